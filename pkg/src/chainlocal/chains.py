"""The poset of p-subgroups, chains from the trivial subgroup, their G-orbits,
chain stabilizers and the involution C -> C* attached to a p-subgroup P.

Subgroup ids index ``PSubgroupPoset.subgroups``, which is sorted by
(order, sorted element tuple); id 0 is the trivial group. A chain is a tuple of
ids, strictly increasing under inclusion and always starting with 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError, InvariantError, ResourceError
from .permgroup import (
    Subgroup,
    as_subgroup,
    is_prime,
    normalizer,
    p_core,
    sylow_subgroup,
)
from .errors import InputError

Chain = tuple[int, ...]


def chain_length(c: Chain) -> int:
    return len(c) - 1


@dataclass
class PSubgroupPoset:
    group: Subgroup
    p: int
    subgroups: list[Subgroup]
    index: dict[frozenset, int]
    above: list[list[int]]
    class_of: list[int]
    conj_to_rep: list[int]
    _gen_action: list[list[int]] = field(repr=False, default_factory=list)
    _stabilizers: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.subgroups)

    def id_of(self, S: Subgroup) -> int:
        try:
            return self.index[S.elements]
        except KeyError:
            raise DomainError("not a p-subgroup in the poset") from None

    def conj_id(self, i: int, g: int) -> int:
        return self.index[self.subgroups[i].conjugate(g).elements]

    def conj_chain(self, c: Chain, g: int) -> Chain:
        return tuple(self.conj_id(i, g) for i in c)

    def contains(self, big: int, small: int) -> bool:
        return self.subgroups[small].elements <= self.subgroups[big].elements

    def normalizer(self, i: int) -> Subgroup:
        return normalizer(self.group, self.subgroups[i])

    def stabilizer(self, c: Chain) -> Subgroup:
        S = self._stabilizers.get(c)
        if S is None:
            els = self.group.elements
            for i in c[1:]:
                els = els & self.normalizer(i).elements
            S = self.group.parent.subgroup(els)
            self._stabilizers[c] = S
        return S

    def ids_in(self, H: Subgroup) -> list[int]:
        """Ids of the poset members contained in H."""
        He = H.elements
        return [i for i, S in enumerate(self.subgroups) if S.elements <= He]

    def members(self, c: Chain) -> list[Subgroup]:
        return [self.subgroups[i] for i in c]


def _subgroups_of_p_group(S: Subgroup) -> list[Subgroup]:
    P = S.parent
    found = {P.trivial.elements: P.trivial}
    queue = [P.trivial]
    for X in queue:
        for x in S.sorted:
            if x in X.elements:
                continue
            Y = P.closure(X.gens + [x])
            if Y.elements not in found:
                found[Y.elements] = Y
                queue.append(Y)
    return list(found.values())


def enumerate_p_subgroups(G, p: int) -> PSubgroupPoset:
    """All p-subgroups of G: subgroups of one Sylow subgroup closed under conjugation."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    H = as_subgroup(G)
    key = ("poset", p)
    if key in H.cache:
        return H.cache[key]
    P = H.parent
    limit = P.config.max_psubgroups
    S = sylow_subgroup(H, p)
    seeds = _subgroups_of_p_group(S)
    found = {X.elements: X for X in seeds}
    queue = list(seeds)
    gens = H.gens
    for X in queue:
        for g in gens:
            Y = X.conjugate(g)
            if Y.elements not in found:
                found[Y.elements] = Y
                queue.append(Y)
                if len(found) > limit:
                    raise ResourceError(f"more than {limit} p-subgroups (reached {len(found)})")
    subs = sorted(found.values(), key=lambda X: (X.order, X.sorted))
    index = {X.elements: i for i, X in enumerate(subs)}
    n = len(subs)
    above: list[list[int]] = [[] for _ in range(n)]
    for i, A in enumerate(subs):
        for j in range(i + 1, n):
            B = subs[j]
            if B.order > A.order and B.order % A.order == 0 and A.elements <= B.elements:
                above[i].append(j)
    gen_action = [[index[X.conjugate(g).elements] for X in subs] for g in gens]
    # conjugacy classes: BFS from the least member of each class, tracking conjugators
    class_of = [-1] * n
    conj_to_rep = [0] * n
    ncls = 0
    for i in range(n):
        if class_of[i] >= 0:
            continue
        class_of[i] = ncls
        # word[j] = h with rep^h = X_j; the conjugator to the rep is h^-1
        word = {i: 0}
        q = [i]
        for a in q:
            for gi, g in enumerate(gens):
                b = gen_action[gi][a]
                if b not in word:
                    word[b] = P.mul(word[a], g)
                    class_of[b] = ncls
                    q.append(b)
        for j, h in word.items():
            conj_to_rep[j] = P.inv(h)
        ncls += 1
    poset = PSubgroupPoset(H, p, subs, index, above, class_of, conj_to_rep, gen_action)
    H.cache[key] = poset
    return poset


def radical_p_subgroups(G, p: int) -> list[int]:
    """Ids of nontrivial Q with Q = O_p(N_G(Q))."""
    poset = enumerate_p_subgroups(G, p)
    return [i for i in range(1, len(poset)) if p_core(poset.normalizer(i), p).elements == poset.subgroups[i].elements]


@dataclass
class ChainOrbitSet:
    poset: PSubgroupPoset
    chains: list[Chain]
    representatives: list[Chain]
    orbit_of: dict[Chain, int]
    orbit_sizes: list[int]

    def lengths_histogram(self) -> dict[int, int]:
        h: dict[int, int] = {}
        for c in self.representatives:
            h[chain_length(c)] = h.get(chain_length(c), 0) + 1
        return dict(sorted(h.items()))


def _all_chains(poset: PSubgroupPoset, limit: int) -> list[Chain]:
    out: list[Chain] = []
    stack: list[Chain] = [(0,)]
    while stack:
        c = stack.pop()
        out.append(c)
        if len(out) > limit:
            raise ResourceError(f"more than {limit} chains")
        for j in reversed(poset.above[c[-1]]):
            stack.append(c + (j,))
    out.sort()
    return out


def enumerate_chain_orbits(G, p: int) -> ChainOrbitSet:
    H = as_subgroup(G)
    key = ("chain_orbits", p)
    if key in H.cache:
        return H.cache[key]
    poset = enumerate_p_subgroups(H, p)
    chains = _all_chains(poset, H.parent.config.max_chains)
    orbit_of: dict[Chain, int] = {}
    reps: list[Chain] = []
    sizes: list[int] = []
    # chains are sorted, so the first unvisited chain is its orbit's least member
    for c in chains:
        if c in orbit_of:
            continue
        rid = len(reps)
        reps.append(c)
        orbit_of[c] = rid
        q = [c]
        for a in q:
            for act in poset._gen_action:
                b = tuple(act[i] for i in a)
                if b not in orbit_of:
                    orbit_of[b] = rid
                    q.append(b)
        sizes.append(len(q))
    res = ChainOrbitSet(poset, chains, reps, orbit_of, sizes)
    H.cache[key] = res
    return res


def chain_stabilizer(G, C: Chain, p: int) -> Subgroup:
    return enumerate_p_subgroups(G, p).stabilizer(C)


def involution_defined(poset: PSubgroupPoset, C: Chain, P_id: int) -> bool:
    """P normalises every member of C, or every member of C normalises P."""
    Pg = poset.subgroups[P_id]
    members = poset.members(C)
    par = poset.group.parent
    if all(_normalises(par, Pg, Q) for Q in members):
        return True
    return all(_normalises(par, Q, Pg) for Q in members)


def _normalises(par, A: Subgroup, B: Subgroup) -> bool:
    """Whether A normalises B."""
    Be = B.elements
    return all(par.conj(s, a) in Be for a in A.gens for s in B.gens)


def chain_involution(poset: PSubgroupPoset, C: Chain, P_id: int) -> Chain:
    """C* with respect to P: toggle Q_m P, m maximal with P not inside Q_m."""
    if P_id == 0:
        raise DomainError("P must be nontrivial")
    if not involution_defined(poset, C, P_id):
        raise DomainError("P neither normalises nor is normalised by every member of the chain")
    Pg = poset.subgroups[P_id]
    par = poset.group.parent
    m = max(i for i, q in enumerate(C) if not Pg.elements <= poset.subgroups[q].elements)
    Qm = poset.subgroups[C[m]]
    prod = {par.mul(x, y) for x in Qm.elements for y in Pg.elements}
    prod_sg = par.subgroup(prod)
    if len(prod) != par.closure(Qm.gens + Pg.gens).order:
        raise InvariantError("Q_m P is not a subgroup")
    if not prod_sg.is_p_group(poset.p):
        raise InvariantError("Q_m P is not a p-group")
    j = poset.index.get(prod_sg.elements)
    if j is None:
        raise InvariantError("Q_m P missing from the poset")
    if j in C:
        return tuple(x for x in C if x != j)
    return C[: m + 1] + (j,) + C[m + 1 :]


def chain_record(orbits: ChainOrbitSet, rid: int) -> dict:
    c = orbits.representatives[rid]
    poset = orbits.poset
    return {
        "rep_id": rid,
        "length": chain_length(c),
        "subgroup_orders": [poset.subgroups[i].order for i in c],
        "stabilizer_order": poset.stabilizer(c).order,
    }
