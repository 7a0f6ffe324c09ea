"""Coefficient systems: G-modules, invariant subgroups, orbit modules.

A G-module stores one action matrix per group element (not per generator);
at the orders this library handles that removes every consistency-derivation
subtlety and makes validation exhaustive.  Orbit modules are contravariant
functors from the orbit category to abelian groups, checked against the
functor laws at construction time.
"""

from __future__ import annotations

from .errors import BadParametersError, FunctorialityError
from .groups import Family, FiniteGroup, Subgroup
from .intlin import (
    AbHom,
    FgAbGroup,
    IntMatrix,
    NormalFormMap,
    block_diag,
    preimage_generators,
    quotient_presentation,
    solve_exact,
)
from .orbitcat import (
    OrbitMorphism,
    canonical_rep,
    compose,
    identity_morphism,
    morphisms,
)


class GModule:
    """F.g. abelian group with a left action of a finite group by matrices."""

    def __init__(self, group: FiniteGroup, carrier: FgAbGroup, actions,
                 validate: bool = True):
        self.group = group
        self.carrier = carrier
        self.actions = tuple(actions)
        if len(self.actions) != group.order:
            raise BadParametersError("need one action matrix per group element")
        if validate:
            self.validate()

    def validate(self):
        n = self.carrier.ngens
        ident = AbHom.identity(self.carrier)
        for g, m in enumerate(self.actions):
            if m.rows != n or m.cols != n:
                raise BadParametersError(f"action of {g} has wrong shape")
            hom = AbHom(self.carrier, self.carrier, m)
            if not hom.well_defined():
                raise BadParametersError(f"action of {g} does not respect relations")
        if not AbHom(self.carrier, self.carrier, self.actions[0]).equal_hom(ident):
            raise BadParametersError("identity element must act as the identity")
        for a in range(self.group.order):
            for b in range(self.group.order):
                ab = self.group.mul(a, b)
                lhs = AbHom(self.carrier, self.carrier,
                            self.actions[a] @ self.actions[b])
                rhs = AbHom(self.carrier, self.carrier, self.actions[ab])
                if not lhs.equal_hom(rhs):
                    raise BadParametersError(
                        f"action is not multiplicative at ({a},{b})")

    def act(self, g: int) -> IntMatrix:
        return self.actions[g]

    @classmethod
    def trivial(cls, group: FiniteGroup, carrier: FgAbGroup) -> GModule:
        ident = IntMatrix.identity(carrier.ngens)
        return cls(group, carrier, [ident] * group.order, validate=False)

    @classmethod
    def from_generator_action(cls, group: FiniteGroup, carrier: FgAbGroup,
                              generators, matrices) -> GModule:
        """Derive the per-element table from matrices on a generating set."""
        generators = list(generators)
        matrices = [m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m)
                    for m in matrices]
        if len(generators) != len(matrices):
            raise BadParametersError("generators and matrices must pair up")
        n = carrier.ngens
        acts: dict[int, IntMatrix] = {0: IntMatrix.identity(n)}
        frontier = [0]
        gen_map = dict(zip(generators, matrices))
        while frontier:
            x = frontier.pop(0)
            for s, ms in gen_map.items():
                y = group.mul(x, s)
                candidate = acts[x] @ ms
                if y in acts:
                    if not AbHom(carrier, carrier, acts[y]).equal_hom(
                            AbHom(carrier, carrier, candidate)):
                        raise BadParametersError(
                            "generator matrices are inconsistent")
                else:
                    acts[y] = candidate
                    frontier.append(y)
        if len(acts) != group.order:
            raise BadParametersError("given elements do not generate the group")
        return cls(group, carrier, [acts[g] for g in range(group.order)])

    def restrict_to(self, sub: Subgroup) -> tuple[GModule, tuple[int, ...]]:
        """The same carrier as a module over the subgroup's own group."""
        h, embed = sub.as_group()
        return GModule(h, self.carrier, [self.actions[e] for e in embed],
                       validate=False), embed

    def normalized(self) -> GModule:
        """Equivalent module on the canonical diagonal presentation."""
        nf = NormalFormMap(self.carrier)
        acts = [nf.to_nf @ a @ nf.from_nf for a in self.actions]
        return GModule(self.group, nf.canonical, acts, validate=False)

def sign_modules(group: FiniteGroup) -> list[GModule]:
    """Z with each sign action of the group, one per index-2 subgroup."""
    out = []
    for index2 in group.all_subgroups():
        if index2.size * 2 != group.order:
            continue
        mem = set(index2.members)
        mats = [IntMatrix.from_rows([[1 if g in mem else -1]])
                for g in range(group.order)]
        out.append(GModule(group, FgAbGroup.free(1), mats))
    return out


class InvariantSubgroup:
    """The fixed subgroup M^H with its inclusion into the ambient module."""

    def __init__(self, module: GModule, sub: Subgroup):
        self.module = module
        self.subgroup = sub
        carrier = module.carrier
        n = carrier.ngens
        gens = sub.generators()
        if gens:
            stacked = IntMatrix(0, n)
            for h in gens:
                stacked = stacked.vstack(module.act(h) - IntMatrix.identity(n))
            rels = block_diag([carrier.relations] * len(gens))
            self.generators = preimage_generators(stacked, rels)
        else:
            self.generators = IntMatrix.identity(n)
        self.presentation = quotient_presentation(self.generators,
                                                  carrier.relations)
        self.inclusion = AbHom(self.presentation, carrier, self.generators)

    def fixes_all(self) -> bool:
        """Exhaustive check that every generator really is H-fixed."""
        carrier = self.module.carrier
        for h in self.subgroup.members:
            moved = (self.module.act(h) - IntMatrix.identity(carrier.ngens)) \
                @ self.generators
            if not AbHom(self.presentation, carrier, moved).is_zero_hom():
                return False
        return True


def invariants(module: GModule, sub: Subgroup) -> InvariantSubgroup:
    """Generators and presentation of {m : h.m = m for all h in sub}."""
    if sub.parent is not module.group:
        raise BadParametersError("subgroup of a different group")
    return InvariantSubgroup(module, sub)


class OrbitModule:
    """Contravariant functor from an orbit category to abelian groups.

    values maps subgroup member-tuples to presented groups; maps sends each
    orbit morphism (source members, target members, rep) to the matrix of
    the induced map value(target) -> value(source).
    """

    def __init__(self, family: Family, values: dict, maps: dict,
                 source_gmodule: GModule | None = None, validate: bool = True):
        self.family = family
        self.values = dict(values)
        self.maps = dict(maps)
        self.source_gmodule = source_gmodule
        if validate:
            self.validate()

    def value(self, sub: Subgroup) -> FgAbGroup:
        return self.values[sub.members]

    def map_matrix(self, m: OrbitMorphism) -> IntMatrix:
        return self.maps[(m.source.members, m.target.members, m.rep)]

    def map_hom(self, m: OrbitMorphism) -> AbHom:
        return AbHom(self.value(m.target), self.value(m.source),
                     self.map_matrix(m))

    def validate(self):
        for s in self.family:
            if s.members not in self.values:
                raise FunctorialityError(f"missing value at {s.members}")
        all_morphs = {}
        for s in self.family:
            for t in self.family:
                for m in morphisms(s, t):
                    key = (m.source.members, m.target.members, m.rep)
                    if key not in self.maps:
                        raise FunctorialityError(f"missing map for {key}")
                    hom = self.map_hom(m)
                    if not hom.well_defined():
                        raise FunctorialityError(f"map at {key} not well defined")
                    all_morphs[key] = m
            ident = identity_morphism(s)
            if not self.map_hom(ident).equal_hom(AbHom.identity(self.value(s))):
                raise FunctorialityError(f"identity at {s.members} is not identity")
        for m1 in all_morphs.values():
            for m2 in all_morphs.values():
                if m1.target.members != m2.source.members:
                    continue
                comp = compose(m1, m2)
                # contravariance: value(comp) = value(m1) o value(m2)
                lhs = self.map_hom(m1).compose(self.map_hom(m2))
                if not lhs.equal_hom(self.map_hom(comp)):
                    raise FunctorialityError(
                        f"functoriality fails on {m1} then {m2}")


def fixed_point_functor(module: GModule, family: Family) -> OrbitModule:
    """H |-> M^H with the morphism x K acting by m |-> x.m.

    Values are stored in canonical normal form; the induced matrices are
    transported through the normalization.
    """
    if family.parent is not module.group:
        raise BadParametersError("family belongs to a different group")
    carrier = module.carrier
    inv: dict[tuple, InvariantSubgroup] = {}
    nf: dict[tuple, NormalFormMap] = {}
    values = {}
    for s in family:
        iv = invariants(module, s)
        inv[s.members] = iv
        nfm = NormalFormMap(iv.presentation)
        nf[s.members] = nfm
        values[s.members] = nfm.canonical
    maps = {}
    for s in family:
        for t in family:
            for m in morphisms(s, t):
                # solve L_s * T = act(rep) * L_t modulo ambient relations
                lhs = inv[s.members].generators.hstack(carrier.relations)
                rhs = module.act(m.rep) @ inv[t.members].generators
                sol = solve_exact(lhs, rhs)
                if sol is None:
                    raise FunctorialityError(
                        "image of a fixed vector failed to be fixed")
                t_mat = sol.take_rows(inv[s.members].generators.cols)
                maps[(s.members, t.members, m.rep)] = (
                    nf[s.members].to_nf @ t_mat @ nf[t.members].from_nf)
    return OrbitModule(family, values, maps, source_gmodule=module)


def constant_orbit_module(family: Family, carrier: FgAbGroup) -> OrbitModule:
    """All values equal, all induced maps the identity."""
    values = {s.members: carrier for s in family}
    ident = IntMatrix.identity(carrier.ngens)
    maps = {}
    for s in family:
        for t in family:
            for m in morphisms(s, t):
                maps[(s.members, t.members, m.rep)] = ident
    return OrbitModule(family, values, maps, validate=False)


def restrict_module(module: OrbitModule, sub: Subgroup) -> OrbitModule:
    """Restriction to the subgroup's orbit category over F n S.

    Fixed point functors restrict through their underlying G-module; a
    general orbit module restricts by evaluation, which requires every
    intersection H n S to already belong to the ambient family.
    """
    g = module.family.parent
    if sub.parent is not g:
        raise BadParametersError("subgroup of a different group")
    sgroup, embed = sub.as_group()
    pos = {e: i for i, e in enumerate(embed)}
    inter = {}
    for h in module.family:
        members = tuple(sorted(pos[a] for a in h.members if a in pos))
        inter[members] = Subgroup(sgroup, members)
    sub_family = Family(sgroup, inter.values())

    if module.source_gmodule is not None:
        src = module.source_gmodule
        restricted = GModule(sgroup, src.carrier,
                             [src.actions[e] for e in embed], validate=False)
        return fixed_point_functor(restricted, sub_family)

    ambient = {s.members for s in module.family}
    values = {}
    maps = {}
    for j in sub_family:
        parent_members = tuple(sorted(embed[i] for i in j.members))
        if parent_members not in ambient:
            raise BadParametersError(
                "general restriction needs F n S inside the family")
        values[j.members] = module.values[parent_members]
    for j1 in sub_family:
        for j2 in sub_family:
            for m in morphisms(j1, j2):
                p1 = tuple(sorted(embed[i] for i in j1.members))
                p2 = tuple(sorted(embed[i] for i in j2.members))
                target = Subgroup(g, p2)
                big = OrbitMorphism(Subgroup(g, p1), target,
                                    canonical_rep(g, embed[m.rep], target))
                maps[(j1.members, j2.members, m.rep)] = module.map_matrix(big)
    return OrbitModule(sub_family, values, maps)
