"""The standard cochain complex over an orbit category and its cohomology.

Cochains in degree n assign, to every length-n composable chain of orbit
morphisms, an element of the coefficient module at the chain's starting
object.  The differential alternates the face maps: the leading face is
twisted by the module map of the first morphism, inner faces compose two
adjacent morphisms, the last face drops the final morphism.

The inhomogeneous bar complex for ordinary group cohomology is implemented
here as well, as a deliberately separate assembly: it is the independent
oracle the orbit-category route is checked against (the two coincide for the
family consisting of the trivial subgroup alone, and that agreement is a
test, not a shortcut).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product

from .coeff import GModule, OrbitModule
from .errors import BadParametersError, SizeLimitError
from .groups import Family, family_close
from .intlin import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    SubquotientPresentation,
    direct_sum_groups,
    kernel_of_hom,
    solve_exact,
    stack_homs,
    subquotient,
)
from .orbitcat import DEFAULT_CHAIN_CAP, OrbitCategory

DEFAULT_SIZE_CAP = DEFAULT_CHAIN_CAP


@dataclass
class CohomologyResult:
    """Normal form of one cohomology group, with optional representatives."""

    degree: int
    rank: int
    torsion: tuple[int, ...]
    representatives: list[list[int]] | None = None

    @property
    def group(self) -> FgAbGroup:
        return FgAbGroup.from_invariants(self.rank, self.torsion)

    def order(self):
        return self.group.order()

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def normal_form(self):
        return (self.rank, self.torsion)

    def __str__(self):
        return str(self.group)

    def to_json(self):
        return {"degree": self.degree, "rank": self.rank,
                "torsion": list(self.torsion)}


def _result_from_groups(degree: int, group: FgAbGroup,
                        representatives=None) -> CohomologyResult:
    rank, torsion = group.normal_form
    return CohomologyResult(degree, rank, torsion, representatives)


class _Layout:
    """Generator layout of one cochain degree: a block per chain."""

    __slots__ = ("chains", "offsets", "total", "index")

    def __init__(self, chains, block_sizes):
        self.chains = chains
        self.index = {c: i for i, c in enumerate(chains)}
        self.offsets = []
        total = 0
        for c in chains:
            self.offsets.append(total)
            total += block_sizes[c[0]]
        self.total = total


class BredonComplex:
    """Cochain complex of one (family, orbit module) pair.

    Chain blocks follow the deterministic lexicographic chain order, so the
    assembled matrices are bit-stable across runs and thread counts.
    """

    def __init__(self, family: Family, module: OrbitModule,
                 size_cap: int = DEFAULT_SIZE_CAP, threads: int = 1):
        if module.family.parent is not family.parent:
            raise BadParametersError("module and family disagree on the group")
        self.family = family
        self.module = module
        self.size_cap = size_cap
        self.threads = max(1, threads)
        self.cat = OrbitCategory(family)
        nsub = len(self.cat.subgroups)
        self.value_groups = [module.value(s) for s in self.cat.subgroups]
        self.block_size = [g.ngens for g in self.value_groups]
        # module map matrix per morphism id, plus the full composition table
        self.morph_mat = [module.map_matrix(m) for m in self.cat.morphs]
        for i in range(len(self.cat.morphs)):
            for j in self.cat.out[self.cat.m_tgt[i]]:
                self.cat.compose_ids(i, j)
        self._layouts: dict[int, _Layout] = {}
        self._diffs: dict[int, AbHom] = {}

    def layout(self, degree: int) -> _Layout:
        got = self._layouts.get(degree)
        if got is None:
            tuples = self.cat.chain_tuples(degree, self.size_cap)
            got = _Layout(tuples, self.block_size)
            self._layouts[degree] = got
        return got

    def cochain_group(self, degree: int) -> FgAbGroup:
        lay = self.layout(degree)
        entries = {}
        col = 0
        for c in lay.chains:
            rel = self.value_groups[c[0]].relations
            off = lay.offsets[lay.index[c]]
            for (i, j), v in rel.entries.items():
                entries[(off + i, col + j)] = v
            col += rel.cols
        return FgAbGroup(lay.total, IntMatrix(lay.total, col, entries))

    def _row_entries(self, src, dst, rows):
        """Entries of the differential block rows for the given (n+1)-chains."""
        cat = self.cat
        out = []
        for c in rows:
            roff = dst.offsets[dst.index[c]]
            start = c[0]
            n1 = len(c) - 1          # number of morphisms: degree + 1
            # face 0: drop the first morphism, twist by its module map
            first = c[1]
            f0 = (cat.m_tgt[first],) + c[2:]
            coff = src.offsets[src.index[f0]]
            for (i, j), v in self.morph_mat[first].entries.items():
                out.append((roff + i, coff + j, v))
            # inner faces: compose adjacent morphisms
            for i in range(1, n1):
                comp = cat.compose_ids(c[i], c[i + 1])
                fc = c[:i] + (comp,) + c[i + 2:]
                coff = src.offsets[src.index[fc]]
                sign = -1 if i % 2 else 1
                for t in range(self.block_size[start]):
                    out.append((roff + t, coff + t, sign))
            # last face: drop the final morphism
            fl = c[:-1]
            coff = src.offsets[src.index[fl]]
            sign = -1 if n1 % 2 else 1
            for t in range(self.block_size[start]):
                out.append((roff + t, coff + t, sign))
        return out

    def differential(self, degree: int) -> AbHom:
        """d^degree as a map of presented groups C^degree -> C^{degree+1}."""
        got = self._diffs.get(degree)
        if got is not None:
            return got
        src = self.layout(degree)
        dst = self.layout(degree + 1)
        if self.threads > 1 and len(dst.chains) > 64:
            nch = len(dst.chains)
            step = -(-nch // self.threads)
            batches = [dst.chains[i:i + step] for i in range(0, nch, step)]
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                parts = list(pool.map(
                    lambda rows: self._row_entries(src, dst, rows), batches))
            all_entries = [e for part in parts for e in part]
        else:
            all_entries = self._row_entries(src, dst, dst.chains)
        entries: dict[tuple[int, int], int] = {}
        for i, j, v in all_entries:
            key = (i, j)
            s = entries.get(key, 0) + v
            if s:
                entries[key] = s
            elif key in entries:
                del entries[key]
        mat = IntMatrix(dst.total, src.total, entries)
        hom = AbHom(self.cochain_group(degree), self.cochain_group(degree + 1), mat)
        self._diffs[degree] = hom
        return hom

    def cohomology_presentation(self, degree: int) -> SubquotientPresentation:
        d_next = self.differential(degree)
        if degree == 0:
            d_prev = AbHom.zero(FgAbGroup.free(0), d_next.source)
        else:
            d_prev = self.differential(degree - 1)
        return SubquotientPresentation(d_prev, d_next)

    def cohomology(self, degree: int,
                   with_representatives: bool = False) -> CohomologyResult:
        if degree < 0:
            raise BadParametersError("degree must be >= 0")
        d_next = self.differential(degree)
        if degree == 0:
            d_prev = AbHom.zero(FgAbGroup.free(0), d_next.source)
        else:
            d_prev = self.differential(degree - 1)
        if with_representatives:
            pres = SubquotientPresentation(d_prev, d_next)
            group = pres.canonical
            reps = []
            for i in range(group.ngens):
                vec = pres.representative(i)
                reps.append([vec[(r, 0)] for r in range(d_next.source.ngens)])
            return _result_from_groups(degree, group, reps)
        return _result_from_groups(degree, subquotient(d_prev, d_next))


def differential(family: Family, module: OrbitModule, degree: int,
                 size_cap: int = DEFAULT_SIZE_CAP, threads: int = 1) -> AbHom:
    return BredonComplex(family, module, size_cap, threads).differential(degree)


def bredon_cohomology(family: Family, module: OrbitModule, degree: int,
                      size_cap: int = DEFAULT_SIZE_CAP, threads: int = 1,
                      with_representatives: bool = False) -> CohomologyResult:
    cx = BredonComplex(family, module, size_cap, threads)
    return cx.cohomology(degree, with_representatives)


# ---------------------------------------------------------------------------
# Ordinary group cohomology via the inhomogeneous bar complex (the oracle)

class BarComplex:
    """Unnormalized bar cochain complex of a finite group module."""

    def __init__(self, module: GModule, size_cap: int = DEFAULT_SIZE_CAP):
        self.module = module.normalized()
        self.group = module.group
        self.size_cap = size_cap
        self.gens = self.module.carrier.ngens
        self._layout_cache: dict[int, list[tuple]] = {}
        self._diffs: dict[int, AbHom] = {}

    def tuples(self, degree: int) -> list[tuple]:
        got = self._layout_cache.get(degree)
        if got is None:
            count = self.group.order ** degree * max(self.gens, 1)
            if count > self.size_cap:
                raise SizeLimitError(count, self.size_cap)
            got = list(product(range(self.group.order), repeat=degree))
            self._layout_cache[degree] = got
        return got

    def cochain_group(self, degree: int) -> FgAbGroup:
        blocks = len(self.tuples(degree))
        return direct_sum_groups([self.module.carrier] * blocks)

    def differential(self, degree: int) -> AbHom:
        got = self._diffs.get(degree)
        if got is not None:
            return got
        g = self.group
        k = self.gens
        src = self.tuples(degree)
        dst = self.tuples(degree + 1)
        src_index = {c: i for i, c in enumerate(src)}
        entries: dict[tuple[int, int], int] = {}

        def add(i, j, v):
            key = (i, j)
            s = entries.get(key, 0) + v
            if s:
                entries[key] = s
            elif key in entries:
                del entries[key]

        for r, c in enumerate(dst):
            roff = r * k
            coff = src_index[c[1:]] * k
            for (i, j), v in self.module.act(c[0]).entries.items():
                add(roff + i, coff + j, v)
            for i in range(1, degree + 1):
                fc = c[:i - 1] + (g.mul(c[i - 1], c[i]),) + c[i + 1:]
                sign = -1 if i % 2 else 1
                coff = src_index[fc] * k
                for t in range(k):
                    add(roff + t, coff + t, sign)
            sign = -1 if (degree + 1) % 2 else 1
            coff = src_index[c[:-1]] * k
            for t in range(k):
                add(roff + t, coff + t, sign)
        mat = IntMatrix(len(dst) * k, len(src) * k, entries)
        hom = AbHom(self.cochain_group(degree), self.cochain_group(degree + 1), mat)
        self._diffs[degree] = hom
        return hom

    def cohomology_presentation(self, degree: int) -> SubquotientPresentation:
        d_next = self.differential(degree)
        if degree == 0:
            d_prev = AbHom.zero(FgAbGroup.free(0), d_next.source)
        else:
            d_prev = self.differential(degree - 1)
        return SubquotientPresentation(d_prev, d_next)

    def cohomology(self, degree: int) -> CohomologyResult:
        if degree < 0:
            raise BadParametersError("degree must be >= 0")
        d_next = self.differential(degree)
        if degree == 0:
            d_prev = AbHom.zero(FgAbGroup.free(0), d_next.source)
        else:
            d_prev = self.differential(degree - 1)
        return _result_from_groups(degree, subquotient(d_prev, d_next))


def bar_cohomology(module: GModule, degree: int,
                   size_cap: int = DEFAULT_SIZE_CAP) -> CohomologyResult:
    return BarComplex(module, size_cap).cohomology(degree)


# ---------------------------------------------------------------------------
# Kernels of restriction maps on ordinary cohomology

@dataclass
class RestrictionIntersection:
    """Classes of H^n(G, M) restricting to zero on every family member.

    For degree 2 the comparison with the orbit-category group is only
    meaningful under the vanishing hypothesis on first cohomology of the
    conjugation closure; h1_hypothesis records the checked outcome.
    """

    degree: int
    rank: int
    torsion: tuple[int, ...]
    h1_hypothesis: bool | None = None

    @property
    def group(self) -> FgAbGroup:
        return FgAbGroup.from_invariants(self.rank, self.torsion)

    def normal_form(self):
        return (self.rank, self.torsion)


def _bar_restriction_matrix(bar_g: BarComplex, bar_h: BarComplex,
                            embed, degree: int) -> IntMatrix:
    """Matrix of cochain restriction C^degree(G) -> C^degree(H)."""
    k = bar_g.gens
    src_index = {c: i for i, c in enumerate(bar_g.tuples(degree))}
    entries = {}
    for r, c in enumerate(bar_h.tuples(degree)):
        big = tuple(embed[x] for x in c)
        coff = src_index[big] * k
        for t in range(k):
            entries[(r * k + t, coff + t)] = 1
    return IntMatrix(len(bar_h.tuples(degree)) * k,
                     len(bar_g.tuples(degree)) * k, entries)


def restriction_kernel_intersection(module: GModule, family: Family,
                                    degree: int,
                                    size_cap: int = DEFAULT_SIZE_CAP
                                    ) -> RestrictionIntersection:
    """Intersection over the family of restriction kernels in H^degree(G, M)."""
    if degree not in (1, 2):
        raise BadParametersError("only degrees 1 and 2 are interpreted")
    if family.parent is not module.group:
        raise BadParametersError("family belongs to a different group")
    bar_g = BarComplex(module, size_cap)
    pres_g = bar_g.cohomology_presentation(degree)

    homs = []
    for sub in family:
        sgroup, embed = sub.as_group()
        msub = GModule(sgroup, module.carrier,
                       [module.actions[e] for e in embed], validate=False)
        bar_h = BarComplex(msub, size_cap)
        pres_h = bar_h.cohomology_presentation(degree)
        res = _bar_restriction_matrix(bar_g, bar_h, embed, degree)
        cols = {}
        for kcol in range(pres_g.basis.cols):
            vec = res @ IntMatrix(res.cols, 1, {
                (i, 0): v for (i, j), v in pres_g.basis.entries.items() if j == kcol})
            sol = _express_in_basis(pres_h, vec)
            for i, v in sol.items():
                cols[(i, kcol)] = v
        induced = AbHom(pres_g.group, pres_h.group,
                        IntMatrix(pres_h.group.ngens, pres_g.group.ngens, cols))
        if not induced.well_defined():
            raise BadParametersError(
                "induced restriction map failed to respect boundaries")
        homs.append(induced)

    stacked = stack_homs(homs)
    kernel_group, _ = kernel_of_hom(stacked)

    hypothesis = None
    if degree == 2:
        closure = family_close(family, under_conjugation=True)
        hypothesis = True
        for sub in closure:
            sgroup, embed = sub.as_group()
            msub = GModule(sgroup, module.carrier,
                           [module.actions[e] for e in embed], validate=False)
            if not bar_cohomology(msub, 1, size_cap).is_trivial():
                hypothesis = False
                break
    rank, torsion = kernel_group.normal_form
    return RestrictionIntersection(degree, rank, torsion, hypothesis)


def _express_in_basis(pres: SubquotientPresentation, vec: IntMatrix) -> dict:
    sol = solve_exact(pres.basis, vec)
    if sol is None:
        raise BadParametersError("restricted cocycle failed to be a cocycle")
    return {i: v for (i, j), v in sol.entries.items()}
