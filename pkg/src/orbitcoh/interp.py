"""Low-degree interpretations of orbit-category cohomology.

Degree 0 is a limit of the coefficient diagram, degree 1 classifies
derivations that restrict principally to every family member (equivalently
splittings of the standard split semidirect structure up to conjugation by
the module), and degree 2 classifies extensions of the group by the module
equipped with compatible subgroup lifts.  Each interpretation here is
computed by its own elementary means, never through the cochain complex;
agreement between the two routes is what the test suites check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .coeff import GModule, OrbitModule
from .errors import (
    BadParametersError,
    FamilyMissingTrivialError,
    SizeLimitError,
)
from .groups import Family, FiniteGroup, GroupExtension, Subgroup
from .intlin import (
    FgAbGroup,
    IntMatrix,
    SmithForm,
    block_diag,
    preimage_generators,
    quotient_presentation,
)
from .orbitcat import morphisms

DEFAULT_ENUM_CAP = 1_000_000


def _require_trivial(family: Family):
    if not family.contains_trivial():
        raise FamilyMissingTrivialError(
            "this interpretation needs the trivial subgroup in the family")


# ---------------------------------------------------------------------------
# Degree 0: the limit of the coefficient diagram

def h0_limit(module: OrbitModule) -> FgAbGroup:
    """Families (m_H) compatible with every induced map, in normal form."""
    family = module.family
    subs = list(family)
    offs = []
    total = 0
    for s in subs:
        offs.append(total)
        total += module.value(s).ngens
    pos = {s.members: i for i, s in enumerate(subs)}

    rows = 0
    entries = {}
    slack_blocks = []
    for s in subs:
        for t in subs:
            for m in morphisms(s, t):
                mat = module.map_matrix(m)
                si, ti = pos[s.members], pos[t.members]
                gens_s = module.value(s).ngens
                for (i, j), v in mat.entries.items():
                    entries[(rows + i, offs[ti] + j)] = v
                for i in range(gens_s):
                    key = (rows + i, offs[si] + i)
                    cur = entries.get(key, 0) - 1
                    if cur:
                        entries[key] = cur
                    elif key in entries:
                        del entries[key]
                slack_blocks.append((rows, module.value(s).relations))
                rows += gens_s
    constraint = IntMatrix(rows, total, entries)
    slack_entries = {}
    col = 0
    for roff, rel in slack_blocks:
        for (i, j), v in rel.entries.items():
            slack_entries[(roff + i, col + j)] = v
        col += rel.cols
    slack = IntMatrix(rows, col, slack_entries)
    lattice = preimage_generators(constraint, slack)
    rels = block_diag([module.value(s).relations for s in subs])
    group = quotient_presentation(lattice, rels)
    return FgAbGroup.from_invariants(*group.normal_form)


# ---------------------------------------------------------------------------
# Degree 1 via derivations: the exact linear-algebra route

def f_derivation_quotient(module: GModule, family: Family) -> FgAbGroup:
    """Derivations restricting principally to each member, mod principal.

    Solved as integer linear algebra, so infinite modules (Z with a sign
    action, say) are handled exactly.
    """
    _require_trivial(family)
    g = module.group
    k = module.carrier.ngens
    n = g.order
    subs = list(family)
    unknowns = (n + len(subs)) * k
    ident = IntMatrix.identity(k)

    entries = {}
    slack_blocks = []
    rows = 0

    def put(block_row, block_col, mat, sign=1):
        for (i, j), v in mat.entries.items():
            key = (block_row + i, block_col + j)
            cur = entries.get(key, 0) + sign * v
            if cur:
                entries[key] = cur
            elif key in entries:
                del entries[key]

    # cocycle law D(xy) = x.D(y) + D(x)
    for x in range(n):
        for y in range(n):
            xy = g.mul(x, y)
            put(rows, xy * k, ident)
            put(rows, y * k, module.act(x), sign=-1)
            put(rows, x * k, ident, sign=-1)
            slack_blocks.append((rows, module.carrier.relations))
            rows += k
    # principality on each member: D(h) = (act(h) - 1) m_H
    for hi, sub in enumerate(subs):
        mcol = (n + hi) * k
        for h in sub.members:
            put(rows, h * k, ident)
            put(rows, mcol, module.act(h) - ident, sign=-1)
            slack_blocks.append((rows, module.carrier.relations))
            rows += k

    constraint = IntMatrix(rows, unknowns, entries)
    slack_entries = {}
    col = 0
    for roff, rel in slack_blocks:
        for (i, j), v in rel.entries.items():
            slack_entries[(roff + i, col + j)] = v
        col += rel.cols
    slack = IntMatrix(rows, col, slack_entries)
    lattice = preimage_generators(constraint, slack)
    dpart = IntMatrix(n * k, lattice.cols,
                      {(i, j): v for (i, j), v in lattice.entries.items()
                       if i < n * k})

    # principal derivations plus relation shifts
    principal = IntMatrix(0, k)
    for x in range(n):
        principal = principal.vstack(module.act(x) - ident)
    rels = block_diag([module.carrier.relations] * n)
    sub = principal.hstack(rels)
    group = quotient_presentation(dpart, sub)
    return FgAbGroup.from_invariants(*group.normal_form)


# ---------------------------------------------------------------------------
# Finite modules as element tables

class FiniteModule:
    """Element-level view of a finite G-module in normal form."""

    def __init__(self, module: GModule):
        nf = module.normalized()
        if nf.carrier.rank != 0:
            raise BadParametersError("module must be finite")
        self.module = nf
        self.group = module.group
        self.moduli = list(nf.carrier.torsion)
        self.k = len(self.moduli)
        self.zero = (0,) * self.k
        self.size = 1
        for d in self.moduli:
            self.size *= d

    def elements(self):
        return [tuple(v) for v in product(*[range(d) for d in self.moduli])]

    def act(self, g: int, vec):
        mat = self.module.act(g)
        return tuple(
            sum(mat[(i, j)] * vec[j] for j in range(self.k)) % self.moduli[i]
            for i in range(self.k))

    def add(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.moduli))

    def sub(self, a, b):
        return tuple((x - y) % d for x, y, d in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % d for x, d in zip(a, self.moduli))

    def index(self, vec) -> int:
        out = 0
        for x, d in zip(vec, self.moduli):
            out = out * d + x
        return out

    def from_index(self, idx: int):
        out = []
        for d in reversed(self.moduli):
            out.append(idx % d)
            idx //= d
        return tuple(reversed(out))


# ---------------------------------------------------------------------------
# Degree 1 via splittings of the standard split structure (the search route)

@dataclass(frozen=True)
class FDerivation:
    """D: G -> M with D(xy) = x.D(y) + D(x), principal on each member."""

    values: tuple            # per group element, an element tuple of M
    witnesses: tuple         # per family member, the m with D|_H = D_m

    def value(self, g: int):
        return self.values[g]


@dataclass
class SplittingClasses:
    count: int
    representatives: list[FDerivation]


def _derivations_by_search(fm: FiniteModule, cap: int) -> list[tuple]:
    g = fm.group
    gens = g.full_subgroup().generators()
    if not gens:
        return [(fm.zero,) * g.order]
    if fm.size ** len(gens) > cap:
        raise SizeLimitError(fm.size ** len(gens), cap)
    out = []
    elements = fm.elements()
    for assignment in product(elements, repeat=len(gens)):
        vals = {0: fm.zero}
        frontier = [0]
        gen_map = dict(zip(gens, assignment))
        ok = True
        while frontier and ok:
            x = frontier.pop(0)
            for s, ds in gen_map.items():
                y = g.mul(x, s)
                cand = fm.add(fm.act(x, ds), vals[x])
                if y in vals:
                    if vals[y] != cand:
                        ok = False
                        break
                else:
                    vals[y] = cand
                    frontier.append(y)
        if not ok or len(vals) != g.order:
            continue
        full = tuple(vals[x] for x in range(g.order))
        if all(full[g.mul(x, y)] == fm.add(fm.act(x, full[y]), full[x])
               for x in range(g.order) for y in range(g.order)):
            out.append(full)
    return sorted(set(out))


def _principal_witness(fm: FiniteModule, deriv, sub: Subgroup):
    for m in fm.elements():
        if all(deriv[h] == fm.sub(fm.act(h, m), m) for h in sub.members):
            return m
    return None


def splittings_mod_conjugacy(module: GModule, family: Family,
                             cap: int = DEFAULT_ENUM_CAP) -> SplittingClasses:
    """Splittings of the standard split structure, up to module conjugacy.

    Splittings are found by exhaustive search over homomorphic sections of
    the semidirect product; the class count equals the order of the
    degree-1 orbit-category cohomology group.
    """
    _require_trivial(family)
    fm = FiniteModule(module)
    g = module.group
    structure_derivs = []
    for deriv in _derivations_by_search(fm, cap):
        witnesses = []
        for sub in family:
            m = _principal_witness(fm, deriv, sub)
            if m is None:
                break
            witnesses.append(m)
        else:
            structure_derivs.append((deriv, tuple(witnesses)))

    classes: dict[tuple, FDerivation] = {}
    for deriv, wits in structure_derivs:
        canon = min(
            tuple(fm.sub(deriv[x], fm.sub(fm.act(x, m), m)) for x in range(g.order))
            for m in fm.elements())
        if canon not in classes:
            classes[canon] = FDerivation(deriv, wits)
    ordered = [classes[c] for c in sorted(classes)]
    return SplittingClasses(len(classes), ordered)


# ---------------------------------------------------------------------------
# Degree 2: families of subgroup lifts on extensions (structures)

class FStructureWitness:
    """An extension built from a factor set, plus one lift per family member."""

    def __init__(self, fm: FiniteModule, family: Family, factor_set: dict,
                 lifts: dict):
        self.fm = fm
        self.family = family
        self.factor_set = factor_set      # (x, y) -> element tuple
        self.lifts = dict(lifts)          # subgroup members -> frozenset of (elt, g)

    # extension arithmetic on pairs (module element tuple, group index)
    def mul(self, p, q):
        (a, x), (b, y) = p, q
        fm = self.fm
        return (fm.add(fm.add(a, fm.act(x, b)), self.factor_set[(x, y)]),
                fm.group.mul(x, y))

    def inv(self, p):
        a, x = p
        g = self.fm.group
        xi = g.inv(x)
        # left inverse: (b, xi)(a, x) = (0, e)
        b = self.fm.neg(self.fm.add(self.fm.act(xi, a),
                                    self.factor_set[(xi, x)]))
        return (b, xi)

    def conj(self, p, q):
        """p^-1 q p."""
        return self.mul(self.mul(self.inv(p), q), p)

    def axiom_i_holds(self) -> bool:
        for sub in self.family:
            lift = self.lifts[sub.members]
            if len(lift) != sub.size:
                return False
            if {x for (_, x) in lift} != set(sub.members):
                return False
            for p in lift:
                for q in lift:
                    if self.mul(p, q) not in lift:
                        return False
        return True

    def axiom_ii_holds(self) -> bool:
        g = self.fm.group
        for hs in self.family:
            for ks in self.family:
                kset = set(ks.members)
                lift_h = self.lifts[hs.members]
                lift_k = self.lifts[ks.members]
                for x in range(g.order):
                    if not all(g.conj(x, h) in kset for h in hs.members):
                        continue
                    found = False
                    for b in self.fm.elements():
                        y = (b, x)
                        if all(self.conj(y, p) in lift_k for p in lift_h):
                            found = True
                            break
                    if not found:
                        return False
        return True

    def extension(self) -> GroupExtension:
        """The extension as a validated Cayley-table group."""
        fm = self.fm
        g = fm.group
        n = g.order
        elems = fm.elements()
        idx = {(a, x): fm.index(a) * n + x for a in elems for x in range(n)}
        order = fm.size * n
        table = [[0] * order for _ in range(order)]
        for a in elems:
            for x in range(n):
                for b in elems:
                    for y in range(n):
                        table[idx[(a, x)]][idx[(b, y)]] = idx[self.mul((a, x), (b, y))]
        total = FiniteGroup(table, name="extension", validate=False)
        kernel = _module_as_group(fm)
        embedding = tuple(fm.index(a) * n for a in elems)
        projection = tuple(i % n for i in range(order))
        ext = GroupExtension(total=total, kernel=kernel, quotient=g,
                             kernel_embedding=embedding, projection=projection)
        ext.validate()
        return ext

    def lift_key(self):
        return tuple(
            tuple(sorted((self.fm.index(a), x) for (a, x) in self.lifts[s.members]))
            for s in self.family)


def _module_as_group(fm: FiniteModule) -> FiniteGroup:
    elems = fm.elements()
    idx = {a: fm.index(a) for a in elems}
    table = [[0] * fm.size for _ in range(fm.size)]
    for a in elems:
        for b in elems:
            table[idx[a]][idx[b]] = idx[fm.add(a, b)]
    return FiniteGroup(table, name="module", validate=False)


@dataclass
class FStructureClass:
    witness: FStructureWitness
    split: bool
    factor_set_class: tuple


def _normalized_cochains(fm: FiniteModule, arity_one: bool):
    """All normalized maps G -> M (arity_one) or (G-e) x (G-e) -> M."""
    g = fm.group
    nontriv = [x for x in range(g.order) if x]
    if arity_one:
        slots = nontriv
    else:
        slots = [(x, y) for x in nontriv for y in nontriv]
    for assignment in product(fm.elements(), repeat=len(slots)):
        yield dict(zip(slots, assignment))


def _coboundary(fm: FiniteModule, eta: dict) -> dict:
    g = fm.group
    full = {0: fm.zero, **eta}
    out = {}
    for x in range(g.order):
        for y in range(g.order):
            out[(x, y)] = fm.sub(fm.add(fm.act(x, full[y]), full[x]),
                                 full[g.mul(x, y)])
    return out


def _factor_set_tuple(fm: FiniteModule, c: dict) -> tuple:
    g = fm.group
    return tuple(c[(x, y)] for x in range(g.order) for y in range(g.order))


def _is_cocycle(fm: FiniteModule, c: dict) -> bool:
    g = fm.group
    for x in range(g.order):
        for y in range(g.order):
            for z in range(g.order):
                lhs = fm.add(fm.act(x, c[(y, z)]), c[(x, g.mul(y, z))])
                rhs = fm.add(c[(g.mul(x, y), z)], c[(x, y)])
                if lhs != rhs:
                    return False
    return True


def _subgroup_lifts(fm: FiniteModule, factor: dict, sub: Subgroup):
    """All subgroups of the extension mapping isomorphically onto sub."""
    g = fm.group
    members = sub.members
    out = []
    nontriv = [h for h in members if h]
    for assignment in product(fm.elements(), repeat=len(nontriv)):
        tau = {0: fm.zero, **dict(zip(nontriv, assignment))}
        ok = True
        for h1 in members:
            for h2 in members:
                expected = tau[g.mul(h1, h2)]
                got = fm.add(fm.add(tau[h1], fm.act(h1, tau[h2])),
                             factor[(h1, h2)])
                if expected != got:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset((tau[h], h) for h in members))
    return out


def enumerate_f_structures(module: GModule, family: Family,
                           cap: int = DEFAULT_ENUM_CAP) -> list[FStructureClass]:
    """Equivalence classes of subgroup-lift structures on extensions.

    Enumerates normalized factor sets, groups them into cohomology classes
    by coboundary shifts, searches subgroup lifts over one representative
    per class, filters by the conjugation-lifting axiom, and canonicalizes
    under the equivalence transformations (automorphisms over the identity
    composed with per-member module conjugation).
    """
    _require_trivial(family)
    fm = FiniteModule(module)
    g = module.group
    n = g.order
    count = fm.size ** ((n - 1) ** 2)
    if count > cap:
        raise SizeLimitError(count, cap)

    cocycles = []
    for cand in _normalized_cochains(fm, arity_one=False):
        c = {}
        for x in range(n):
            c[(0, x)] = fm.zero
            c[(x, 0)] = fm.zero
        c.update(cand)
        if _is_cocycle(fm, c):
            cocycles.append(c)

    coboundaries = []
    derivation_etas = []
    for eta in _normalized_cochains(fm, arity_one=True):
        b = _coboundary(fm, eta)
        coboundaries.append(b)
        if all(v == fm.zero for v in b.values()):
            derivation_etas.append({0: fm.zero, **eta})

    def class_rep(c):
        return min(
            _factor_set_tuple(fm, {k: fm.add(c[k], b[k]) for k in c})
            for b in coboundaries)

    # the minimal tuple in each coboundary orbit is the class representative,
    # and it is itself a cocycle of the class
    pair_keys = [(x, y) for x in range(n) for y in range(n)]
    reps = sorted({class_rep(c) for c in cocycles})
    by_class = {rep: dict(zip(pair_keys, rep)) for rep in reps}

    subs = list(family)
    zero_rep = _zero_rep(fm, n)
    classes: list[FStructureClass] = []
    for rep in reps:
        factor = by_class[rep]
        per_sub = [_subgroup_lifts(fm, factor, s) for s in subs]
        if any(not lifts for lifts in per_sub):
            continue
        buckets: dict[tuple, FStructureWitness] = {}
        for choice in product(*per_sub):
            witness = FStructureWitness(
                fm, family, factor,
                {s.members: lift for s, lift in zip(subs, choice)})
            if not witness.axiom_ii_holds():
                continue
            canon = _canonical_structure_key(fm, family, factor, witness,
                                             derivation_etas)
            if canon not in buckets or witness.lift_key() < buckets[canon].lift_key():
                buckets[canon] = witness
        split_key = None
        if rep == zero_rep and buckets:
            std = FStructureWitness(
                fm, family, factor,
                {s.members: frozenset((fm.zero, h) for h in s.members)
                 for s in subs})
            split_key = _canonical_structure_key(fm, family, factor, std,
                                                 derivation_etas)
        for canon in sorted(buckets):
            classes.append(
                FStructureClass(buckets[canon], canon == split_key, rep))
    return classes


def _zero_rep(fm: FiniteModule, n: int) -> tuple:
    return tuple(fm.zero for _ in range(n * n))


def _canonical_structure_key(fm: FiniteModule, family: Family, factor: dict,
                             witness: FStructureWitness, derivation_etas) -> tuple:
    g = fm.group
    best = None
    for eta in derivation_etas:
        per_sub = []
        for s in family:
            lift = witness.lifts[s.members]
            shifted = frozenset((fm.add(a, eta[x]), x) for (a, x) in lift)
            # minimize over conjugation by module elements
            cands = []
            for m in fm.elements():
                conj = frozenset(
                    _conj_in_extension(fm, factor, m, p) for p in shifted)
                cands.append(tuple(sorted((fm.index(a), x) for (a, x) in conj)))
            per_sub.append(min(cands))
        key = tuple(per_sub)
        if best is None or key < best:
            best = key
    return best


def _conj_in_extension(fm: FiniteModule, factor: dict, m, p):
    """(m,e)^-1 p (m,e) inside the extension with the given factor set."""
    a, x = p
    # (-m, e)(a, x)(m, e) = (-m + a + x.m, x) since the factor set is normalized
    return (fm.add(fm.sub(a, m), fm.act(x, m)), x)


# ---------------------------------------------------------------------------
# Character groups of families

@dataclass
class CharacterGroup:
    """Characters of a subgroup killing every intersection with the family."""

    subgroup: Subgroup
    family: Family
    group: FgAbGroup
    generators: list[list[tuple[int, int]]]   # per generator: (num, den) on P's gens
    value_table: list[list[tuple[int, int]]]  # per generator: (num, den) on all of P

    def order(self):
        return self.group.order()

    def to_json(self):
        rank, torsion = self.group.normal_form
        return {"rank": rank, "torsion": list(torsion),
                "generators": [[[n, d] for (n, d) in gen] for gen in self.generators]}


def character_group(p_sub: Subgroup, family: Family) -> CharacterGroup:
    """{f in Hom(P, Q/Z) : f kills H n P for every family member H}.

    Computed by dualizing the finite quotient of the abelianization of P by
    the images of all intersections; an element-level enumeration oracle
    lives in the tests.
    """
    if family.parent is not p_sub.parent:
        raise BadParametersError("family belongs to a different group")
    pgroup, embed = p_sub.as_group()
    pos = {e: i for i, e in enumerate(embed)}
    np = pgroup.order
    rel_cols = []
    for a in range(np):
        for b in range(np):
            col = {a: 1}
            col[b] = col.get(b, 0) + 1
            ab = pgroup.mul(a, b)
            col[ab] = col.get(ab, 0) - 1
            rel_cols.append({i: v for i, v in col.items() if v})
    killed = set()
    for h in family:
        for x in h.members:
            if x in pos:
                killed.add(pos[x])
    for i in sorted(killed):
        rel_cols.append({i: 1})
    entries = {}
    for j, col in enumerate(rel_cols):
        for i, v in col.items():
            entries[(i, j)] = v
    relations = IntMatrix(np, len(rel_cols), entries)
    quotient = FgAbGroup(np, relations)
    rank, torsion = quotient.normal_form
    if rank != 0:
        raise BadParametersError("character quotient of a finite group must be finite")

    sf = SmithForm(relations)
    tor_rows = [i for i, d in enumerate(sf.diag) if d > 1]
    gens_of_p = p_sub.generators()
    generators = []
    value_table = []
    for row, d in zip(tor_rows, [sf.diag[i] for i in tor_rows]):
        vals_all = []
        for a in range(np):
            num = sf.u[(row, a)] % d
            vals_all.append((num, d))
        value_table.append(vals_all)
        generators.append([vals_all[pos[x]] for x in gens_of_p])
    return CharacterGroup(p_sub, family,
                          FgAbGroup.from_invariants(0, tuple(sorted(sf.diag[i] for i in tor_rows))),
                          generators, value_table)
