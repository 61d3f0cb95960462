"""Integer-valued functions on (subgroup, block) pairs, the alternating chain
sum, and verifiers for the locality statements built on it.

Evaluation is lazy: starting from a pair (G, B) only the pairs (G_C, b) with
b a summand of B_C are ever touched, so no global family is materialised.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Optional

from .blocks import (
    Block,
    ModularSystem,
    bc_summands,
    block_degrees,
    block_induction,
    brauer_correspondent,
    defect_one_count,
    height_zero_count,
    modular_system,
)
from .chains import ChainOrbitSet, PSubgroupPoset, chain_length, enumerate_chain_orbits, enumerate_p_subgroups
from .errors import DomainError
from .permgroup import (
    Subgroup,
    as_subgroup,
    conjugacy_classes,
    fingerprint,
    is_isomorphic,
    normalizer,
    p_core,
)

Evaluator = Callable[[ModularSystem, Subgroup, Block], int]

ISO = "isomorphism-constant"
CONJ = "conjugacy-constant"


@dataclass(frozen=True)
class BlockFunction:
    name: str
    evaluator: Evaluator = field(compare=False)
    contract: str = ISO

    def __call__(self, ms: ModularSystem, H: Subgroup, b: Block) -> int:
        return int(self.evaluator(ms, H, b))

    def __add__(self, other: "BlockFunction") -> "BlockFunction":
        return BlockFunction(f"({self.name}+{other.name})", lambda ms, H, b: self(ms, H, b) + other(ms, H, b), _weaker(self, other))

    def __mul__(self, other):
        if isinstance(other, int):
            return BlockFunction(f"{other}*{self.name}", lambda ms, H, b: other * self(ms, H, b), self.contract)
        return BlockFunction(f"({self.name}*{other.name})", lambda ms, H, b: self(ms, H, b) * other(ms, H, b), _weaker(self, other))

    __rmul__ = __mul__


def _weaker(f: BlockFunction, g: BlockFunction) -> str:
    return ISO if f.contract == g.contract == ISO else CONJ


def _stable_int(seed: int, key, lo: int = -9, hi: int = 9) -> int:
    h = hashlib.blake2b(repr((seed, key)).encode(), digest_size=8).digest()
    return lo + int.from_bytes(h, "big") % (hi - lo + 1)


# ---------------------------------------------------------------------------
# chain sums


@dataclass
class ChainTerm:
    rep_id: int
    chain: tuple[int, ...]
    subgroup_orders: list[int]
    sign: int
    stabilizer_order: int
    summands: list[int]
    values: list[int]

    def to_dict(self) -> dict:
        return {
            "rep_id": self.rep_id,
            "length": len(self.chain) - 1,
            "subgroup_orders": self.subgroup_orders,
            "sign": self.sign,
            "stabilizer_order": self.stabilizer_order,
            "summands": self.summands,
            "values": self.values,
        }


@dataclass
class ChainSumReport:
    group: str
    prime: int
    block_id: int
    block_defect: int
    function: str
    terms: list[ChainTerm]
    total: int
    signed: bool = True

    @property
    def verdict(self) -> str:
        return "zero" if self.total == 0 else "nonzero"

    def trivial_chain_value(self) -> int:
        return sum(self.terms[0].values)

    def nontrivial_part(self) -> int:
        return sum(t.sign * sum(t.values) for t in self.terms[1:])

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "prime": self.prime,
            "block_id": self.block_id,
            "block_defect": self.block_defect,
            "function": self.function,
            "signed": self.signed,
            "terms": [t.to_dict() for t in self.terms],
            "total": self.total,
            "verdict": self.verdict,
        }


def _summands(ms: ModularSystem, orbits: ChainOrbitSet, B: Block, C) -> list[Block]:
    cache = ms.__dict__.setdefault("_bc_cache", {})
    key = (B.group.elements, B.id, C)
    res = cache.get(key)
    if res is None:
        poset = orbits.poset
        res = bc_summands(ms, poset.group, B, poset.members(C), poset.stabilizer(C)).summands
        cache[key] = res
    return res


def alternating_chain_sum(ms: ModularSystem, G, B: Block, f: BlockFunction, signed: bool = True) -> ChainSumReport:
    """sum over chain representatives C of (-1)^|C| sum_{b | B_C} f(G_C, b)."""
    Gs = as_subgroup(G)
    orbits = enumerate_chain_orbits(Gs, ms.p)
    poset = orbits.poset
    terms = []
    total = 0
    for rid, C in enumerate(orbits.representatives):
        GC = poset.stabilizer(C)
        summ = _summands(ms, orbits, B, C)
        vals = []
        for b in summ:
            try:
                vals.append(f(ms, GC, b))
            except Exception as exc:
                raise type(exc)(f"{exc} [evaluating {f.name} at chain rep {rid}, block {b.id} of order-{GC.order} stabilizer]") from exc
        sign = (-1) ** chain_length(C) if signed else 1
        total += sign * sum(vals)
        terms.append(ChainTerm(rid, C, [poset.subgroups[i].order for i in C], sign, GC.order, [b.id for b in summ], vals))
    return ChainSumReport(Gs.parent.name or "?", ms.p, B.id, B.defect, f.name, terms, total, signed)


# ---------------------------------------------------------------------------
# functions on (group, block) pairs


def fn_am() -> BlockFunction:
    return BlockFunction("am", lambda ms, H, b: height_zero_count(H, b))


def fn_k1() -> BlockFunction:
    return BlockFunction("k1", lambda ms, H, b: defect_one_count(H, b))


def fn_constant(c: int) -> BlockFunction:
    return BlockFunction(f"const:{c}", lambda ms, H, b: c)


def fn_am0() -> BlockFunction:
    """am of the Brauer correspondent in the normalizer of the defect group."""

    def ev(ms, H, b):
        if b.defect == 0:
            raise DomainError("am0 is only defined on blocks of positive defect")
        N, bp = brauer_correspondent(ms, H, b)
        return height_zero_count(N, bp)

    return BlockFunction("am0", ev)


def fn_omega_N(N, label: str | None = None) -> BlockFunction:
    """1 when the defect group's normalizer is isomorphic to N, else 0."""
    Ns = as_subgroup(N)
    fpN = None

    def ev(ms, H, b):
        nonlocal fpN
        if b.defect == 0:
            return 0
        M = normalizer(H, b.defect_group)
        if fpN is None:
            fpN = fingerprint(Ns)
        if fingerprint(M) != fpN:
            return 0
        return int(is_isomorphic(M, Ns))

    return BlockFunction(f"omegaN:{label or Ns.order}", ev)


def _pair_conjugate(G: Subgroup, P: Subgroup, X: Subgroup, Q: Subgroup, Y: Subgroup) -> bool:
    """Whether (P, X)^g = (Q, Y) for some g in G."""
    if P.order != Q.order or X.order != Y.order:
        return False
    par = G.parent
    Qe, Ye = Q.elements, Y.elements
    Pg, Xg = P.gens, X.gens
    for g in G.sorted:
        if all(par.conj(s, g) in Qe for s in Pg) and all(par.conj(s, g) in Ye for s in Xg):
            return True
    return False


def fn_omega_PX(G, P: Subgroup, X: Subgroup, label: str | None = None) -> BlockFunction:
    """Number of H-orbits of pairs (Q, N_H(Q)), Q a defect group of b, that are
    G-conjugate to (P, X) as pairs."""
    Gs = as_subgroup(G)
    if P.order == 1:
        raise DomainError("P must be nontrivial")
    memo: dict[tuple, bool] = {}

    def ev(ms, H, b):
        if b.defect == 0:
            return 0
        par = H.parent
        D = b.defect_group
        # H-conjugates of D, with their normalizers in H
        qs = {D.elements: D}
        queue = [D]
        for Q in queue:
            for h in H.gens:
                Q2 = Q.conjugate(h)
                if Q2.elements not in qs:
                    qs[Q2.elements] = Q2
                    queue.append(Q2)
        accepted = []
        for Q in queue:
            Y = normalizer(H, Q)
            key = (Q.elements, Y.elements)
            ok = memo.get(key)
            if ok is None:
                ok = _pair_conjugate(Gs, P, X, Q, Y)
                memo[key] = ok
            if ok:
                accepted.append(Q)
        # H-orbits on accepted pairs
        seen: set[frozenset] = set()
        count = 0
        for Q in accepted:
            if Q.elements in seen:
                continue
            count += 1
            orb = [Q]
            seen.add(Q.elements)
            for R in orb:
                for h in H.gens:
                    R2 = R.conjugate(h)
                    if R2.elements not in seen:
                        seen.add(R2.elements)
                        orb.append(R2)
        return count

    return BlockFunction(f"omegaPX:{label or (P.order, X.order)}", ev, CONJ)


def _local_classes(poset: PSubgroupPoset, H: Subgroup, radical: bool) -> list[int]:
    """Least id of each H-class of nontrivial (radical) p-subgroups of H."""
    ids = [i for i in poset.ids_in(H) if i]
    idset = set(ids)
    seen: set[int] = set()
    reps = []
    for i in ids:
        if i in seen:
            continue
        reps.append(i)
        orb = [i]
        seen.add(i)
        for a in orb:
            for h in H.gens:
                b = poset.conj_id(a, h)
                if b not in seen:
                    seen.add(b)
                    orb.append(b)
    if radical:
        p = poset.p
        reps = [i for i in reps if p_core(normalizer(H, poset.subgroups[i]), p).elements == poset.subgroups[i].elements]
    return reps


def fn_normalizer_sum(h: BlockFunction, mode: str = "all") -> BlockFunction:
    """f(H, b) = sum over H-classes of nontrivial p-subgroups Q (radical ones in
    mode 'radical') of sum over blocks b' of N_H(Q) with b'^H = b of h(N_H(Q), b')."""
    if mode not in ("all", "radical"):
        raise ValueError("mode must be 'all' or 'radical'")

    def ev(ms, H, b):
        poset = enumerate_p_subgroups(ms.parent.full, ms.p)
        total = 0
        for i in _local_classes(poset, H, mode == "radical"):
            M = normalizer(H, poset.subgroups[i])
            for bp in ms.blocks(M):
                if block_induction(ms, H, bp) is b:
                    total += h(ms, M, bp)
        return total

    return BlockFunction(f"normsum[{mode}]({h.name})", ev, CONJ)


def fn_g_N(N, p: int, radical: bool = False) -> Callable[[Subgroup], int]:
    """Number of H-classes of nontrivial (radical) p-subgroups Q of H with N_H(Q) isomorphic to N."""
    Ns = as_subgroup(N)

    def g(H: Subgroup) -> int:
        poset = enumerate_p_subgroups(H.parent.full, p)
        n = 0
        for i in _local_classes(poset, H, radical):
            M = normalizer(H, poset.subgroups[i])
            if fingerprint(M) == fingerprint(Ns) and is_isomorphic(M, Ns):
                n += 1
        return n

    return g


def fn_r_N(N, p: int) -> Callable[[Subgroup], int]:
    return fn_g_N(N, p, radical=True)


def group_chain_sums(G, p: int, g: Callable[[Subgroup], int]) -> tuple[int, int]:
    """(signed, unsigned) sums of a group-level function over chain representatives."""
    orbits = enumerate_chain_orbits(G, p)
    signed = unsigned = 0
    for C in orbits.representatives:
        v = g(orbits.poset.stabilizer(C))
        signed += (-1) ** chain_length(C) * v
        unsigned += v
    return signed, unsigned


# ---------------------------------------------------------------------------
# random test functions


def canonical_conjugate(G, H: Subgroup) -> tuple[Subgroup, int]:
    """The G-conjugate of H with least sorted element tuple, and a conjugator."""
    Gs = as_subgroup(G)
    key = ("canon", Gs.elements)
    hit = H.cache.get(key)
    if hit is not None:
        return hit
    best = None
    for g in Gs.sorted:
        K = H.conjugate(g)
        if best is None or K.sorted < best[0].sorted:
            best = (K, g)
    H.cache[key] = best
    return best


def transport_block(ms: ModularSystem, b: Block, g: int) -> Block:
    """The block b^g of H^g, matched through central characters."""
    H = b.group
    K = H.conjugate(g)
    ccH = conjugacy_classes(H)
    ccK = conjugacy_classes(K)
    par = H.parent
    cmap = [ccK.class_of[par.conj(r, g)] for r in ccH.reps]
    for c in ms.blocks(K):
        if all(c.lam[cmap[k]] == b.lam[k] for k in range(len(cmap))):
            return c
    raise DomainError("no conjugate block found")


def random_conjugacy_constant(G, seed: int, lo: int = -9, hi: int = 9) -> BlockFunction:
    """A seeded integer function constant on G-conjugacy classes of pairs (H, b)."""
    Gs = as_subgroup(G)

    def ev(ms, H, b):
        K, g = canonical_conjugate(Gs, H)
        c = transport_block(ms, b, g)
        return _stable_int(seed, (K.sorted, c.id), lo, hi)

    return BlockFunction(f"random-conj:{seed}", ev, CONJ)


def iso_key(ms: ModularSystem, H: Subgroup, b: Block) -> tuple:
    return (fingerprint(H), b.defect, tuple(sorted(block_degrees(b))), b.defect_group.order)


def random_isomorphism_constant(seed: int, lo: int = -9, hi: int = 9) -> BlockFunction:
    """A seeded integer function of isomorphism invariants of (H, b)."""
    return BlockFunction(f"random-iso:{seed}", lambda ms, H, b: _stable_int(seed, iso_key(ms, H, b), lo, hi))


# ---------------------------------------------------------------------------
# verifiers


def verify_block_chain_local(ms: ModularSystem, G, f: BlockFunction, positive_defect_only: bool = False) -> list[ChainSumReport]:
    return [
        alternating_chain_sum(ms, G, B, f)
        for B in ms.blocks(G)
        if B.defect > 0 or not positive_defect_only
    ]


def verify_am_equality(ms: ModularSystem, G) -> list[dict]:
    out = []
    for B in ms.blocks(G):
        if B.defect == 0:
            continue
        N, Bp = brauer_correspondent(ms, G, B)
        a, b = height_zero_count(G, B), height_zero_count(N, Bp)
        out.append({
            "block_id": B.id,
            "defect": B.defect,
            "am_G": a,
            "normalizer_order": N.order,
            "correspondent_id": Bp.id,
            "am_N": b,
            "equal": a == b,
        })
    return out


@dataclass
class LemmaFGReport:
    block_id: int
    f_total: int
    g_total: int
    hypothesis: bool
    witnesses: list
    conclusion: Optional[bool]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def verify_lemma_fg(ms: ModularSystem, G, f: BlockFunction, g: BlockFunction, positive_defect_only: bool = True) -> list[LemmaFGReport]:
    """If f and g agree on every reached pair (H, b) with O_p(H) > 1, check
    that they agree at (G, B)."""
    Gs = as_subgroup(G)
    orbits = enumerate_chain_orbits(Gs, ms.p)
    poset = orbits.poset
    out = []
    for B in ms.blocks(Gs):
        if positive_defect_only and B.defect == 0:
            continue
        rf = alternating_chain_sum(ms, Gs, B, f)
        rg = alternating_chain_sum(ms, Gs, B, g)
        witnesses = []
        for rid, C in enumerate(orbits.representatives[1:], start=1):
            GC = poset.stabilizer(C)
            for b in _summands(ms, orbits, B, C):
                a, c = f(ms, GC, b), g(ms, GC, b)
                if a != c:
                    witnesses.append({"chain_rep": rid, "block": b.id, "f": a, "g": c})
        if p_core(Gs, ms.p).order > 1:
            a, c = f(ms, Gs, B), g(ms, Gs, B)
            if a != c:
                witnesses.append({"chain_rep": 0, "block": B.id, "f": a, "g": c})
        hyp = not witnesses and rf.total == 0 and rg.total == 0
        concl = (f(ms, Gs, B) == g(ms, Gs, B)) if hyp else None
        out.append(LemmaFGReport(B.id, rf.total, rg.total, hyp, witnesses, concl))
    return out


def omega_N_candidates(ms: ModularSystem, G) -> list[Subgroup]:
    """One subgroup per isomorphism class of the normalizers N_{G_C}(Q)."""
    orbits = enumerate_chain_orbits(G, ms.p)
    poset = orbits.poset
    reps: list[Subgroup] = []
    seen: set[frozenset] = set()
    for C in orbits.representatives:
        GC = poset.stabilizer(C)
        for i in poset.ids_in(GC):
            if not i:
                continue
            M = normalizer(GC, poset.subgroups[i])
            if M.elements in seen:
                continue
            seen.add(M.elements)
            if not any(fingerprint(M) == fingerprint(R) and is_isomorphic(M, R) for R in reps):
                reps.append(M)
    return reps


def omega_PX_candidates(ms: ModularSystem, G) -> list[tuple[Subgroup, Subgroup]]:
    """Pairs (P, N_G(P)) for every class of nontrivial p-subgroups, and the
    pairs (D_b, N_{G_C}(D_b)) met along the chain sums; deduplicated up to
    G-conjugacy."""
    Gs = as_subgroup(G)
    orbits = enumerate_chain_orbits(Gs, ms.p)
    poset = orbits.poset
    raw: list[tuple[Subgroup, Subgroup]] = []
    for i in _local_classes(poset, Gs, False):
        P = poset.subgroups[i]
        raw.append((P, normalizer(Gs, P)))
    for B in ms.blocks(Gs):
        if B.defect == 0:
            continue
        for C in orbits.representatives:
            GC = poset.stabilizer(C)
            for b in _summands(ms, orbits, B, C):
                if b.defect:
                    raw.append((b.defect_group, normalizer(GC, b.defect_group)))
    out: list[tuple[Subgroup, Subgroup]] = []
    for P, X in raw:
        if not any(_pair_conjugate(Gs, P, X, Q, Y) for Q, Y in out):
            out.append((P, X))
    return out
