"""The orbit category of a group with respect to a family of subgroups.

Objects are coset spaces G/H for H in the family; a morphism G/H -> G/K is a
coset xK with x^-1 H x contained in K, stored by the minimal element of the
coset so that equal morphisms have equal representatives.  Composable
sequences of morphisms ("chains") index the standard free resolution, so
their enumeration order is pinned down exactly: by starting subgroup, then
by each morphism's (target, coset representative) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotComposableError, SizeLimitError
from .groups import Family, FiniteGroup, Subgroup

DEFAULT_CHAIN_CAP = 200_000


@dataclass(frozen=True)
class OrbitMorphism:
    source: Subgroup
    target: Subgroup
    rep: int            # minimal element of the coset rep*target

    def is_identity(self) -> bool:
        return self.source.members == self.target.members and self.rep == 0


@dataclass(frozen=True)
class Chain:
    """(id_{H0}, f1, ..., fn) with consecutive morphisms composable."""

    start: Subgroup
    maps: tuple[OrbitMorphism, ...]

    @property
    def length(self) -> int:
        return len(self.maps)

    @property
    def end(self) -> Subgroup:
        return self.maps[-1].target if self.maps else self.start


def canonical_rep(group: FiniteGroup, x: int, target: Subgroup) -> int:
    return min(group.table[x][k] for k in target.members)


def morphisms(source: Subgroup, target: Subgroup) -> list[OrbitMorphism]:
    """All morphisms G/source -> G/target, sorted by coset representative."""
    g = source.parent
    if target.parent is not g:
        raise NotComposableError("subgroups of different parent groups")
    out = []
    tgt = set(target.members)
    for x in target.left_coset_representatives():
        if all(g.conj(x, h) in tgt for h in source.members):
            out.append(OrbitMorphism(source, target, x))
    return out


def identity_morphism(sub: Subgroup) -> OrbitMorphism:
    return OrbitMorphism(sub, sub, 0)


def compose(f: OrbitMorphism, g: OrbitMorphism) -> OrbitMorphism:
    """The composite G/H -> G/L of f: G/H -> G/K then g: G/K -> G/L."""
    if f.target.members != g.source.members:
        raise NotComposableError(
            f"target {f.target.members} differs from source {g.source.members}")
    grp = f.source.parent
    x = grp.mul(f.rep, g.rep)
    return OrbitMorphism(f.source, g.target, canonical_rep(grp, x, g.target))


def fixed_coset_count(source: Subgroup, target: Subgroup) -> int:
    """|(G/target)^source| counted directly from the coset action.

    Independent of morphisms(): counts cosets xK with h.xK = xK for all h.
    """
    g = source.parent
    count = 0
    for x in target.left_coset_representatives():
        coset = {g.table[x][k] for k in target.members}
        if all({g.table[h][c] for c in coset} == coset for h in source.members):
            count += 1
    return count


class OrbitCategory:
    """Morphism tables for one (group, family) pair.

    Morphisms get integer ids; chains used by the cochain machinery are
    tuples (start_index, morphism ids...) in the pinned lexicographic order.
    """

    def __init__(self, family: Family):
        self.family = family
        self.group = family.parent
        self.subgroups = family.subgroups
        self.sub_index = {s.members: i for i, s in enumerate(self.subgroups)}
        self.morphs: list[OrbitMorphism] = []
        self.out: list[list[int]] = [[] for _ in self.subgroups]
        self.m_src: list[int] = []
        self.m_tgt: list[int] = []
        self._morph_id: dict[tuple[int, int, int], int] = {}
        for si, s in enumerate(self.subgroups):
            for ti, t in enumerate(self.subgroups):
                for m in morphisms(s, t):
                    mid = len(self.morphs)
                    self.morphs.append(m)
                    self.m_src.append(si)
                    self.m_tgt.append(ti)
                    self._morph_id[(si, ti, m.rep)] = mid
            self.out[si] = sorted(
                (mid for mid in range(len(self.morphs)) if self.m_src[mid] == si),
                key=lambda mid: (self.m_tgt[mid], self.morphs[mid].rep))
        self._comp: dict[tuple[int, int], int] = {}

    def morphism_id(self, m: OrbitMorphism) -> int:
        si = self.sub_index[m.source.members]
        ti = self.sub_index[m.target.members]
        return self._morph_id[(si, ti, m.rep)]

    def compose_ids(self, i: int, j: int) -> int:
        key = (i, j)
        got = self._comp.get(key)
        if got is None:
            got = self.morphism_id(compose(self.morphs[i], self.morphs[j]))
            self._comp[key] = got
        return got

    def chain_count(self, length: int) -> int:
        counts = [1] * len(self.subgroups)
        for _ in range(length):
            nxt = [0] * len(self.subgroups)
            for si, c in enumerate(counts):
                if c:
                    for mid in self.out[si]:
                        nxt[self.m_tgt[mid]] += c
            counts = nxt
        return sum(counts)

    def chain_tuples(self, length: int, cap: int = DEFAULT_CHAIN_CAP) -> list[tuple]:
        """All (start, mid_1, ..., mid_length) in lexicographic order."""
        total = self.chain_count(length)
        if total > cap:
            raise SizeLimitError(total, cap)
        out = []
        for si in range(len(self.subgroups)):
            if length == 0:
                out.append((si,))
                continue
            prefix = [si]

            def walk(cur: int, remaining: int):
                if remaining == 0:
                    out.append(tuple(prefix))
                    return
                for mid in self.out[cur]:
                    prefix.append(mid)
                    walk(self.m_tgt[mid], remaining - 1)
                    prefix.pop()

            walk(si, length)
        return out

    def chain_object(self, tup: tuple) -> Chain:
        start = self.subgroups[tup[0]]
        return Chain(start, tuple(self.morphs[mid] for mid in tup[1:]))


def chains(family: Family, length: int, cap: int = DEFAULT_CHAIN_CAP) -> list[Chain]:
    """All length-n composable sequences, deterministically ordered."""
    if length < 0:
        raise ValueError("chain length must be >= 0")
    cat = OrbitCategory(family)
    return [cat.chain_object(t) for t in cat.chain_tuples(length, cap)]


def chain_count(family: Family, length: int) -> int:
    return OrbitCategory(family).chain_count(length)
