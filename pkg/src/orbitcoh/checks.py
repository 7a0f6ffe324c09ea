"""Built-in verification suites.

Each suite bundles the exactly-checkable claims the library rests on, so a
single command can re-establish them on any machine: agreement of the
orbit-category route with the bar-resolution oracle, the character-group
formula for second cohomology with constant integer coefficients, the
structure/splitting classifications against cohomology orders, the
finite-field vanishing grid, and the structural property checks (complex
law, morphism counts, functor laws, Smith identities, the fixed-point-free
element search).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bredon import (
    BredonComplex,
    bar_cohomology,
    bredon_cohomology,
    restriction_kernel_intersection,
)
from .coeff import GModule, fixed_point_functor, sign_modules
from .groups import (
    Family,
    builtin_group,
    closed_families,
    fixed_point_free_prime_power_element,
    full_family,
    groups_up_to_order,
    trivial_family,
)
from .galoisff import (
    bredon_hilbert90,
    brauer_intersection,
    closed_unit_families,
    odd_vanishing_check,
    primary_parts,
)
from .interp import (
    character_group,
    enumerate_f_structures,
    f_derivation_quotient,
    h0_limit,
    splittings_mod_conjugacy,
)
from .intlin import FgAbGroup, IntMatrix, lattice_contains, smith_normal_form
from .orbitcat import fixed_coset_count, morphisms


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def to_json(self):
        return {"name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self):
        return {"suite": self.suite, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


class _Recorder:
    def __init__(self, suite: str):
        self.report = SuiteReport(suite)

    def run(self, name: str, fn):
        start = time.perf_counter()
        try:
            detail = fn()
            passed = True
            detail = detail or "ok"
        except AssertionError as exc:
            passed = False
            detail = str(exc) or "assertion failed"
        self.report.checks.append(
            CheckResult(name, passed, detail, time.perf_counter() - start))


def _zmod(group, n):
    return GModule.trivial(group, FgAbGroup(1, IntMatrix.from_rows([[n]])))


def _zfree(group):
    return GModule.trivial(group, FgAbGroup.free(1))


def _modules_for(group):
    mods = [("Z", _zfree(group)), ("Z/2", _zmod(group, 2)), ("Z/4", _zmod(group, 4))]
    for i, m in enumerate(sign_modules(group)):
        mods.append((f"Z-sign{i if i else ''}", m))
    return mods


ORACLE_GROUPS = ("c2", "c3", "c4", "c2xc2", "s3")

STRUCTURE_MATRIX = (("c2", 2), ("c2", 3), ("c3", 3), ("c2xc2", 2))

SHIPPED_ORDER_8 = ("c1", "c2", "c3", "c4", "c2xc2", "c5", "c6", "s3",
                   "c7", "c8", "c4xc2", "c2xc2xc2", "d4", "q8")


def _families_with_trivial(group):
    subs = group.all_subgroups()
    triv = group.trivial_subgroup()
    others = [s for s in subs if not s.is_trivial()]
    out = []
    for k in range(2 ** len(others)):
        out.append(Family(group, [triv] + [s for i, s in enumerate(others)
                                           if k >> i & 1]))
    return out


def oracle_suite(threads: int = 1) -> SuiteReport:
    """Cochain route versus the bar oracle, and restriction-kernel formulas."""
    rec = _Recorder("oracle")

    for name in ORACLE_GROUPS:
        group = builtin_group(name)
        for label, module in _modules_for(group):
            def check(group=group, module=module, label=label):
                fam = trivial_family(group)
                om = fixed_point_functor(module, fam)
                cx = BredonComplex(fam, om, threads=threads)
                for deg in range(4):
                    ours = cx.cohomology(deg).normal_form()
                    oracle = bar_cohomology(module, deg).normal_form()
                    assert ours == oracle, \
                        f"degree {deg}: {ours} != oracle {oracle}"
                return "degrees 0..3 agree"
            rec.run(f"bar-agreement/{name}/{label}", check)

    for name in ORACLE_GROUPS:
        group = builtin_group(name)
        def check_limit(group=group):
            for _, module in _modules_for(group):
                for fam in (trivial_family(group), full_family(group)):
                    om = fixed_point_functor(module, fam)
                    direct = h0_limit(om).normal_form
                    routed = bredon_cohomology(fam, om, 0,
                                               threads=threads).normal_form()
                    assert direct == routed, \
                        f"limit {direct} != cochain route {routed}"
            return "degree-0 limit agrees on trivial and full families"
        rec.run(f"h0-limit/{name}", check_limit)

    for name, mod in STRUCTURE_MATRIX:
        group = builtin_group(name)
        module = _zmod(group, mod)
        def check(group=group, module=module):
            for fam in _families_with_trivial(group):
                om = fixed_point_functor(module, fam)
                h1 = bredon_cohomology(fam, om, 1, threads=threads)
                inter1 = restriction_kernel_intersection(module, fam, 1)
                assert h1.normal_form() == inter1.normal_form(), \
                    f"H1 mismatch at {fam.member_sets()}"
                inter2 = restriction_kernel_intersection(module, fam, 2)
                if inter2.h1_hypothesis:
                    h2 = bredon_cohomology(fam, om, 2, threads=threads)
                    assert h2.normal_form() == inter2.normal_form(), \
                        f"H2 mismatch at {fam.member_sets()}"
            return "kernel intersections agree on every family"
        rec.run(f"restriction-kernels/{name}/Z{mod}", check)
    return rec.report


def characters_suite(threads: int = 1) -> SuiteReport:
    """Second cohomology with constant Z versus the character group."""
    rec = _Recorder("characters")
    for name in SHIPPED_ORDER_8:
        group = builtin_group(name)
        module = _zfree(group)
        def check(group=group, module=module):
            fams = closed_families(group)
            for fam in fams:
                om = fixed_point_functor(module, fam)
                h2 = bredon_cohomology(fam, om, 2, threads=threads)
                cg = character_group(group.full_subgroup(), fam)
                assert h2.normal_form() == cg.group.normal_form, \
                    f"mismatch at {fam.member_sets()}"
            return f"{len(fams)} closed families agree"
        rec.run(f"character-formula/{name}", check)
    return rec.report


def structures_suite(threads: int = 1) -> SuiteReport:
    """Structure classes against H^2, splitting classes against H^1."""
    rec = _Recorder("structures")
    for name, mod in STRUCTURE_MATRIX:
        group = builtin_group(name)
        module = _zmod(group, mod)

        def check_h2(group=group, module=module):
            for fam in _families_with_trivial(group):
                om = fixed_point_functor(module, fam)
                h2 = bredon_cohomology(fam, om, 2, threads=threads)
                classes = enumerate_f_structures(module, fam)
                assert len(classes) == h2.order(), \
                    f"class count {len(classes)} != |H2| {h2.order()} at {fam.member_sets()}"
                split = [c for c in classes if c.split]
                assert len(split) == 1, "the split class must be unique"
                zero_fs = all(v == split[0].witness.fm.zero
                              for v in split[0].witness.factor_set.values())
                assert zero_fs, "split class must sit over the trivial extension"
            return "class counts equal |H2|, split class unique over zero"
        rec.run(f"str-bijection/{name}/Z{mod}", check_h2)

        def check_h1(group=group, module=module):
            for fam in _families_with_trivial(group):
                om = fixed_point_functor(module, fam)
                h1 = bredon_cohomology(fam, om, 1, threads=threads)
                got = splittings_mod_conjugacy(module, fam)
                assert got.count == h1.order(), \
                    f"splitting count {got.count} != |H1| {h1.order()} at {fam.member_sets()}"
            return "splitting class counts equal |H1|"
        rec.run(f"splitting-classes/{name}/Z{mod}", check_h1)

    for name in ("c2", "c4", "c2xc2"):
        group = builtin_group(name)
        def check_derivations(group=group):
            for label, module in _modules_for(group):
                for fam in _families_with_trivial(group):
                    om = fixed_point_functor(module, fam)
                    lhs = f_derivation_quotient(module, fam).normal_form
                    rhs = bredon_cohomology(fam, om, 1,
                                            threads=threads).normal_form()
                    assert lhs == rhs, \
                        f"{label}: derivations {lhs} != cochain {rhs}"
            return "derivation quotients equal degree-1 cohomology"
        rec.run(f"derivation-quotient/{name}", check_derivations)
    return rec.report


def galois_suite(threads: int = 1) -> SuiteReport:
    """Unit-module cohomology on the finite-field grid vanishes as predicted."""
    rec = _Recorder("galois")
    for p in (2, 3):
        for n in range(1, 5):
            for d in range(1, n + 1):
                if n % d:
                    continue
                def check(p=p, n=n, d=d):
                    module, fams = closed_unit_families(p, n, d)
                    for fam in fams:
                        h1 = bredon_hilbert90(p, n, d, fam)
                        assert h1.is_trivial(), f"H1 = {h1} at {fam.member_sets()}"
                        h2 = brauer_intersection(p, n, d, fam)
                        assert h2.is_trivial(), f"H2 = {h2} at {fam.member_sets()}"
                        h3 = odd_vanishing_check(p, n, d, fam)
                        assert h3.is_trivial(), f"H3 = {h3} at {fam.member_sets()}"
                        om = fixed_point_functor(module, fam)
                        h0 = bredon_cohomology(fam, om, 0, threads=threads)
                        pp = primary_parts(h0)
                        assert pp.recombined() == h0.torsion, \
                            "primary parts must recombine"
                    return f"{len(fams)} families, degrees 1..3 all zero"
                rec.run(f"finite-field/p{p}/n{n}/d{d}", check)
    return rec.report


def _independent_det(mat: IntMatrix) -> int:
    n = mat.rows
    a = [[Fraction(v) for v in row] for row in mat.to_rows()]
    sign = 1
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i]), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            sign = -sign
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            for c in range(i, n):
                a[r][c] -= f * a[i][c]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return int(out)


def properties_suite(threads: int = 1, snf_samples: int = 1000,
                     seed: int = 271828) -> SuiteReport:
    """Complex law, morphism counts, functor laws, Smith identities, search."""
    rec = _Recorder("properties")

    def check_d_after_d():
        for name in ("c2", "c4", "s3"):
            group = builtin_group(name)
            for fam in (trivial_family(group), full_family(group)):
                for label, module in _modules_for(group):
                    om = fixed_point_functor(module, fam)
                    cx = BredonComplex(fam, om, threads=threads)
                    for deg in range(3):
                        comp = cx.differential(deg + 1).matrix \
                            @ cx.differential(deg).matrix
                        if comp.is_zero():
                            continue
                        target = cx.cochain_group(deg + 2)
                        assert lattice_contains(target.relations, comp), \
                            f"d.d != 0 for {name}/{label} at degree {deg}"
        return "d.d = 0 through degree 3 on the whole matrix"
    rec.run("complex-law", check_d_after_d)

    def check_mor_counts():
        total = 0
        for name in SHIPPED_ORDER_8:
            group = builtin_group(name)
            subs = group.all_subgroups()
            for h in subs:
                for k in subs:
                    assert len(morphisms(h, k)) == fixed_coset_count(h, k), \
                        f"morphism count mismatch in {name}"
                    total += 1
        return f"{total} morphism sets match fixed-coset counts"
    rec.run("morphism-counts", check_mor_counts)

    def check_functoriality():
        count = 0
        for name in ("c2", "c3", "c4", "c2xc2", "s3"):
            group = builtin_group(name)
            for _, module in _modules_for(group):
                for fam in (trivial_family(group), full_family(group)):
                    fixed_point_functor(module, fam).validate()
                    count += 1
        return f"{count} fixed point functors validated"
    rec.run("fixed-point-functoriality", check_functoriality)

    def check_snf():
        rng = random.Random(seed)
        for _ in range(snf_samples):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            a = IntMatrix.from_rows(
                [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)])
            u, d, v = smith_normal_form(a)
            assert (u @ a @ v) == d, "U A V != D"
            assert abs(_independent_det(u)) == 1, "U not unimodular"
            assert abs(_independent_det(v)) == 1, "V not unimodular"
            diag = [d[(i, i)] for i in range(min(rows, cols))]
            for x, y in zip(diag, diag[1:]):
                if y:
                    assert x and y % x == 0, "divisibility chain broken"
        return f"{snf_samples} random Smith forms verified"
    rec.run("smith-identities", check_snf)

    def check_fixed_point_free():
        count = 0
        for group in groups_up_to_order(12):
            for sub in group.all_subgroups():
                if sub.size == group.order:
                    continue
                elt = fixed_point_free_prime_power_element(group, sub)
                mem = set(sub.members)
                assert all(group.conj(x, elt) not in mem
                           for x in sub.left_coset_representatives()), \
                    f"claimed element fixes a coset in {group.name}"
                count += 1
        return f"{count} coset actions admit a fixed-point-free prime-power element"
    rec.run("fixed-point-free-search", check_fixed_point_free)
    return rec.report


SUITES = {
    "oracle": oracle_suite,
    "characters": characters_suite,
    "structures": structures_suite,
    "galois": galois_suite,
    "properties": properties_suite,
}


def available_suites() -> list[str]:
    return sorted(SUITES) + ["all"]


def run_suites(name: str, threads: int = 1) -> list[SuiteReport]:
    if name == "all":
        return [SUITES[key](threads=threads) for key in sorted(SUITES)]
    if name not in SUITES:
        raise KeyError(name)
    return [SUITES[name](threads=threads)]
