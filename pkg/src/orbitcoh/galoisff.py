"""Finite-field Galois demonstrator.

The Galois group of GF(p^n) over GF(p^d) is cyclic of order n/d, generated
by the d-th power of Frobenius, and everything cohomological about the
extension factors through its action on the unit group Z/(p^n - 1) by
multiplication by p^d.  Fields are never represented element by element.

The classical expectations are: first cohomology of the units vanishes in
every family containing the trivial subgroup, second cohomology vanishes
because relative Brauer groups of finite fields are trivial, and the odd
degrees vanish for cyclic groups.  All three are computed here, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bredon import DEFAULT_SIZE_CAP, CohomologyResult, bredon_cohomology
from .coeff import GModule, fixed_point_functor
from .errors import BadParametersError, FamilyMissingTrivialError
from .groups import Family, FiniteGroup
from .intlin import FgAbGroup, IntMatrix


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            return False
        p += 1
    return True


def units_gmodule(p: int, n: int, d: int) -> GModule:
    """Z/(p^n - 1) with the generator of Gal acting as multiplication by p^d."""
    if not _is_prime(p):
        raise BadParametersError(f"{p} is not prime")
    if n < 1 or d < 1 or n % d != 0:
        raise BadParametersError("need d | n with both positive")
    order = n // d
    group = FiniteGroup.cyclic(order)
    modulus = p ** n - 1
    carrier = FgAbGroup(1, IntMatrix.from_rows([[modulus]]))
    if order == 1:
        return GModule.trivial(group, carrier)
    frob = IntMatrix.from_rows([[p ** d % modulus]])
    return GModule.from_generator_action(group, carrier, [1], [frob])


def _unit_functor(p, n, d, family):
    module = units_gmodule(p, n, d)
    if family.parent.order != module.group.order:
        raise BadParametersError("family must be over the Galois group")
    if family.parent is not module.group:
        # rebuild the family over this module's group object
        family = Family(module.group,
                        [module.group.subgroup(s.members) for s in family])
    return module, family, fixed_point_functor(module, family)


def bredon_hilbert90(p: int, n: int, d: int, family: Family,
                     size_cap: int = DEFAULT_SIZE_CAP) -> CohomologyResult:
    """Degree-1 cohomology of the unit functor; the expected value is zero."""
    if not family.contains_trivial():
        raise FamilyMissingTrivialError("family must contain the trivial subgroup")
    _, family, om = _unit_functor(p, n, d, family)
    return bredon_cohomology(family, om, 1, size_cap=size_cap)


def brauer_intersection(p: int, n: int, d: int, family: Family,
                        size_cap: int = DEFAULT_SIZE_CAP) -> CohomologyResult:
    """Degree-2 cohomology of the unit functor.

    This is the intersection of the relative Brauer groups of the
    intermediate fields fixed by the family; over finite fields every
    relative Brauer group vanishes, so zero is the expected outcome.
    """
    if not family.contains_trivial():
        raise FamilyMissingTrivialError("family must contain the trivial subgroup")
    _, family, om = _unit_functor(p, n, d, family)
    return bredon_cohomology(family, om, 2, size_cap=size_cap)


@dataclass
class PrimaryParts:
    """A finite group split into its q-primary components."""

    result: CohomologyResult
    parts: dict[int, tuple[int, ...]]

    def part(self, q: int) -> tuple[int, ...]:
        return self.parts.get(q, ())

    def recombined(self) -> tuple[int, ...]:
        """Invariant factors reassembled from the primary parts."""
        factors: list[int] = []
        cols: list[list[int]] = []
        for q, powers in sorted(self.parts.items()):
            cols.append(sorted(powers, reverse=True))
        depth = max((len(c) for c in cols), default=0)
        out = []
        for i in range(depth):
            f = 1
            for c in cols:
                if i < len(c):
                    f *= c[i]
            out.append(f)
        return tuple(sorted(out))


def primary_parts(result: CohomologyResult) -> PrimaryParts:
    if result.rank != 0:
        raise BadParametersError("primary decomposition needs a finite group")
    parts: dict[int, list[int]] = {}
    for f in result.torsion:
        m = f
        q = 2
        while q * q <= m:
            if m % q == 0:
                e = 1
                while m % q == 0:
                    m //= q
                    e *= q
                parts.setdefault(q, []).append(e)
            q += 1
        if m > 1:
            parts.setdefault(m, []).append(m)
    return PrimaryParts(result, {q: tuple(sorted(v)) for q, v in parts.items()})


def odd_vanishing_check(p: int, n: int, d: int, family: Family, k: int = 1,
                        size_cap: int = DEFAULT_SIZE_CAP) -> CohomologyResult:
    """Degree 2k+1 cohomology of the unit functor for a closed family.

    Cyclic groups have all Sylow subgroups cyclic, so every primary part of
    the odd-degree group must vanish; the caller inspects the result.
    """
    if k < 1:
        raise BadParametersError("k must be >= 1")
    if not family.contains_trivial():
        raise FamilyMissingTrivialError("family must contain the trivial subgroup")
    if not (family.is_conjugation_closed() and family.is_subgroup_closed()):
        raise BadParametersError("family must be closed under conjugation and subgroups")
    _, family, om = _unit_functor(p, n, d, family)
    return bredon_cohomology(family, om, 2 * k + 1, size_cap=size_cap)


def closed_unit_families(p: int, n: int, d: int):
    """All conjugation- and subgroup-closed families of the Galois group."""
    from .groups import closed_families

    module = units_gmodule(p, n, d)
    return module, closed_families(module.group)
