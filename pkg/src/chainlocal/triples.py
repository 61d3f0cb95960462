"""Normalising triples (C, P, X) with X = N_{G_C}(P), their G-orbits and signs,
the pairing O <-> O* induced by the chain involution, the orbit bijection tau,
and the star correspondent of blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .blocks import Block, ModularSystem, bc_summands, block_induction, brauer_morphism
from .chains import (
    Chain,
    ChainOrbitSet,
    PSubgroupPoset,
    chain_involution,
    chain_length,
    enumerate_chain_orbits,
)
from .errors import DomainError, FilterInvarianceError, InvariantError, ResourceError
from .permgroup import Subgroup, _conjugator_index, normalizer

TripleKey = tuple[Chain, int]
TripleFilter = Callable[[Chain, int, Subgroup], bool]


@dataclass(frozen=True)
class NormalisingTriple:
    chain: Chain
    P: int
    X: Subgroup


def make_triple(poset: PSubgroupPoset, C: Chain, P: int) -> NormalisingTriple:
    GC = poset.stabilizer(C)
    Pg = poset.subgroups[P]
    if P == 0 or not Pg.elements <= GC.elements:
        raise DomainError("P must be a nontrivial p-subgroup of G_C")
    return NormalisingTriple(C, P, normalizer(GC, Pg))


@dataclass
class TripleOrbit:
    representative: TripleKey
    members: list[TripleKey]
    sign: int

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class TripleOrbits:
    poset: PSubgroupPoset
    orbits: list[TripleOrbit]
    orbit_of: dict[TripleKey, int]

    def __len__(self):
        return len(self.orbits)


def accept_all(C: Chain, P: int, X: Subgroup) -> bool:
    return True


def enumerate_triple_orbits(G, p: int, accept: TripleFilter = accept_all, max_triples: int = 10**6) -> TripleOrbits:
    """G-orbits of the triples (C, P, N_{G_C}(P)) accepted by the filter.

    The filter must be G-invariant; a violation raises FilterInvarianceError.
    """
    chains = enumerate_chain_orbits(G, p)
    poset = chains.poset
    keys: list[TripleKey] = []
    for C in chains.chains:
        GC = poset.stabilizer(C)
        for P in poset.ids_in(GC):
            if P and accept(C, P, normalizer(GC, poset.subgroups[P])):
                keys.append((C, P))
                if len(keys) > max_triples:
                    raise ResourceError(f"more than {max_triples} triples")
    accepted = set(keys)
    orbit_of: dict[TripleKey, int] = {}
    orbits: list[TripleOrbit] = []
    for k in sorted(keys):
        if k in orbit_of:
            continue
        oid = len(orbits)
        orbit_of[k] = oid
        q = [k]
        for C, P in q:
            for act in poset._gen_action:
                k2 = (tuple(act[i] for i in C), act[P])
                if k2 not in orbit_of:
                    if k2 not in accepted:
                        raise FilterInvarianceError("triple filter is not G-invariant")
                    orbit_of[k2] = oid
                    q.append(k2)
        lengths = {chain_length(C) for C, _ in q}
        if len(lengths) != 1:
            raise InvariantError("orbit mixes chain lengths")
        orbits.append(TripleOrbit(k, sorted(q), (-1) ** lengths.pop()))
    return TripleOrbits(poset, orbits, orbit_of)


def triple_involution(poset: PSubgroupPoset, t: NormalisingTriple) -> NormalisingTriple:
    """(C, P, X)* = (C*, P, X)."""
    C2 = chain_involution(poset, t.chain, t.P)
    if not t.X.elements <= poset.stabilizer(C2).elements:
        raise InvariantError("X is not contained in G_{C*}")
    return NormalisingTriple(C2, t.P, t.X)


def orbit_pairing(orbits: TripleOrbits) -> dict[int, int]:
    """Match every orbit O with O*; checks signs, sizes, and that the match is
    a fixed-point-free involution on orbits."""
    poset = orbits.poset
    pairing: dict[int, int] = {}
    for oid, O in enumerate(orbits.orbits):
        targets = set()
        for C, P in O.members:
            C2 = chain_involution(poset, C, P)
            j = orbits.orbit_of.get((C2, P))
            if j is None:
                raise FilterInvarianceError(f"involution leaves the triple set at {(C, P)}")
            targets.add(j)
        if len(targets) != 1:
            raise InvariantError("involution of an orbit is not a single orbit")
        j = targets.pop()
        O2 = orbits.orbits[j]
        if j == oid or O2.sign != -O.sign or O2.size != O.size:
            raise InvariantError(f"orbit {oid} badly paired with {j}")
        pairing[oid] = j
    for a, b in pairing.items():
        if pairing[b] != a:
            raise InvariantError("orbit pairing is not an involution")
    return pairing


def signed_orbit_total(orbits: TripleOrbits) -> int:
    return sum(O.sign for O in orbits.orbits)


@dataclass
class TauReport:
    chain: Chain
    local_orbits: int
    global_orbits: int
    injective: bool
    surjective: bool
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.injective and self.surjective


def verify_tau_bijection(orbits: TripleOrbits, C: Chain) -> TauReport:
    """tau sends each G_C-orbit of pairs (Q, Y) with (C, Q, Y) in the set to the
    G-orbit of (C, Q, Y); check it is a bijection onto the G-orbits meeting C."""
    poset = orbits.poset
    GC = poset.stabilizer(C)
    Ps = sorted(P for (C2, P) in orbits.orbit_of if C2 == C)
    Pset = set(Ps)
    seen: dict[int, int] = {}
    local = []
    for P in Ps:
        if P in seen:
            continue
        lid = len(local)
        local.append(P)
        seen[P] = lid
        q = [P]
        for a in q:
            for g in GC.gens:
                b = poset.conj_id(a, g)
                if b not in seen:
                    if b not in Pset:
                        raise FilterInvarianceError("pair set is not G_C-invariant")
                    seen[b] = lid
                    q.append(b)
    images = [orbits.orbit_of[(C, P)] for P in local]
    injective = len(set(images)) == len(images)
    meeting = {oid for oid, O in enumerate(orbits.orbits) if any(c == C for c, _ in O.members)}
    surjective = set(images) == meeting
    witnesses = []
    if not injective:
        witnesses.append({"collision": images})
    if not surjective:
        witnesses.append({"missing": sorted(meeting - set(images))})
    return TauReport(C, len(local), len(meeting), injective, surjective, witnesses)


# ---------------------------------------------------------------------------
# blocks along the involution


def star_block_correspondent(ms: ModularSystem, poset: PSubgroupPoset, B: Block, C: Chain, b: Block, P: int) -> Block:
    """The block b* of G_{C*} with Br_P(e_{b*}) = Br_P(e_b)."""
    if b.defect == 0:
        raise DomainError("star correspondent needs a block of positive defect")
    G = poset.group
    GC = poset.stabilizer(C)
    if b.group.elements != GC.elements:
        raise DomainError("b is not a block of G_C")
    Pg = poset.subgroups[P]
    if _conjugator_index(GC, b.defect_group, Pg) is None:
        raise DomainError("P is not a defect group of b")
    C2 = chain_involution(poset, C, P)
    GC2 = poset.stabilizer(C2)
    X = normalizer(GC, Pg)
    X2 = normalizer(GC2, Pg)
    if X.elements != X2.elements:
        raise InvariantError("N_{G_C}(P) != N_{G_C*}(P)")
    target = brauer_morphism(ms, GC, Pg, b.idem, X)
    cands = [c for c in ms.blocks(GC2) if brauer_morphism(ms, GC2, Pg, c.idem, X) == target]
    if len(cands) != 1:
        raise InvariantError(f"{len(cands)} star-correspondent candidates")
    bs = cands[0]
    if _conjugator_index(GC2, bs.defect_group, Pg) is None:
        raise InvariantError("defect group of b* is not conjugate to P")
    if block_induction(ms, G, bs) is not B:
        raise InvariantError("(b*)^G != B")
    return bs


def defect_group_filter(ms: ModularSystem, poset: PSubgroupPoset, B: Block) -> TripleFilter:
    """Accept (C, P, X) when P is a defect group of some block b of G_C with b^G = B."""
    cache: dict[Chain, list[Block]] = {}

    def accept(C: Chain, P: int, X: Subgroup) -> bool:
        summ = cache.get(C)
        if summ is None:
            summ = bc_summands(ms, poset.group, B, poset.members(C), poset.stabilizer(C)).summands
            cache[C] = summ
        GC = poset.stabilizer(C)
        Pg = poset.subgroups[P]
        return any(b.defect_group.order == Pg.order and _conjugator_index(GC, b.defect_group, Pg) is not None for b in summ)

    return accept


def triple_record(orbits: TripleOrbits, chains: ChainOrbitSet, oid: int, paired: Optional[int]) -> dict:
    poset = orbits.poset
    O = orbits.orbits[oid]
    C, P = O.representative
    return {
        "chain_rep": chains.orbit_of[C],
        "P_order": poset.subgroups[P].order,
        "X_order": normalizer(poset.stabilizer(C), poset.subgroups[P]).order,
        "orbit_size": O.size,
        "sign": O.sign,
        "paired_orbit": paired,
    }


@dataclass
class InvolutionReport:
    pairs_checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_involution(poset: PSubgroupPoset, chains: list[Chain]) -> InvolutionReport:
    """For every chain C and nontrivial P inside G_C: (C*)* = C, |C*| = |C| +- 1,
    and (C^g)* = (C*)^g with respect to P^g for each generator g."""
    checked = 0
    failures = []
    for C in chains:
        for P in poset.ids_in(poset.stabilizer(C)):
            if not P:
                continue
            checked += 1
            C2 = chain_involution(poset, C, P)
            if chain_involution(poset, C2, P) != C:
                failures.append({"chain": list(C), "P": P, "check": "double star"})
            if abs(chain_length(C2) - chain_length(C)) != 1:
                failures.append({"chain": list(C), "P": P, "check": "length"})
            for act in poset._gen_action:
                Cg = tuple(act[i] for i in C)
                if chain_involution(poset, Cg, act[P]) != tuple(act[i] for i in C2):
                    failures.append({"chain": list(C), "P": P, "check": "equivariance"})
                    break
    return InvolutionReport(checked, failures)


@dataclass
class StarBlockReport:
    block_id: int
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_star_blocks(ms: ModularSystem, chains: ChainOrbitSet, B: Block) -> StarBlockReport:
    """For every chain representative C and summand b of B_C of positive defect,
    with P a defect group of b: b* exists and is unique, keeps the defect group,
    (b*)* = b and (b*)^G = B."""
    poset = chains.poset
    G = poset.group
    checked = 0
    failures = []
    for rid, C in enumerate(chains.representatives):
        GC = poset.stabilizer(C)
        for b in bc_summands(ms, G, B, poset.members(C), GC).summands:
            if b.defect == 0:
                continue
            checked += 1
            P = poset.id_of(b.defect_group)
            where = {"chain_rep": rid, "block": b.id, "P_order": b.defect_group.order}
            try:
                bs = star_block_correspondent(ms, poset, B, C, b, P)
                back = star_block_correspondent(ms, poset, B, chain_involution(poset, C, P), bs, P)
            except (InvariantError, DomainError) as exc:
                failures.append({**where, "error": str(exc)})
                continue
            if bs.defect_group.order != b.defect_group.order:
                failures.append({**where, "check": "defect group order"})
            if back is not b:
                failures.append({**where, "check": "double star"})
    return StarBlockReport(B.id, checked, failures)
