"""p-blocks, block idempotents, the Brauer morphism, block induction and
Brauer correspondents.

All subgroups of one permutation group share a :class:`ModularSystem`: a field
GF(p^m) and a reduction of Z[zeta_e] (e the exponent of the whole group) that
sends zeta_e to an element of order e_{p'}. Subgroup tables, whose conductor
divides e, reduce through the same map, so central characters of different
subgroups can be compared directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chartab import (
    CharacterTable,
    central_character,
    character_defect,
    character_table,
    class_multiplication_coefficients,
)
from .cyclotomic import Cyclotomic
from .errors import DomainError, InputError, InvariantError
from .finfield import GF, field as gf_field
from .permgroup import (
    PermGroup,
    Subgroup,
    as_subgroup,
    centralizer,
    centralizer_of_subgroup,
    conjugacy_classes,
    is_prime,
    normalizer,
    p_valuation,
    sylow_subgroup,
)


def _p_prime_part(n: int, p: int) -> int:
    while n % p == 0:
        n //= p
    return n


@dataclass(eq=False)
class Block:
    group: Subgroup
    id: int
    rows: tuple[int, ...]
    defect: int
    lam: tuple[int, ...]
    idem: tuple[int, ...]
    defect_group: Subgroup
    principal: bool
    p: int

    def __repr__(self):
        return f"Block(id={self.id}, |H|={self.group.order}, rows={self.rows}, defect={self.defect})"


class ModularSystem:
    """Reduction from cyclotomic integers to GF(p^m) for one permutation group."""

    def __init__(self, G, p: int, m: int | None = None, root_power: int = 1):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        root = as_subgroup(G)
        self.parent: PermGroup = root.parent
        self.p = p
        self.e = self.parent.exponent
        self.e_pprime = _p_prime_part(self.e, p)
        m0 = 1
        while (p**m0 - 1) % self.e_pprime:
            m0 += 1
        if m is None:
            m = m0
        elif m % m0:
            raise InputError(f"GF({p}^{m}) does not contain the needed roots of unity")
        self.m = m
        self.F: GF = gf_field(p, m)
        from math import gcd

        if gcd(root_power, self.e_pprime) != 1:
            raise InputError("root_power must be coprime to the p'-part of the exponent")
        # least-index element of order e_{p'} under the field generator, optionally Galois-twisted
        self.t = self.F.gen_power(root_power * (self.F.q - 1) // self.e_pprime)
        self._blocks: dict[frozenset, list[Block]] = {}

    def __repr__(self):
        return f"ModularSystem(p={self.p}, GF({self.p}^{self.m}), e={self.e})"

    def reduce(self, v: Cyclotomic) -> int:
        F = self.F
        if self.e % v.e:
            raise DomainError("conductor does not divide the ambient exponent")
        tv = F.pow(self.t, self.e // v.e)
        s = 0
        for i, c in enumerate(v.coeffs):
            c %= self.p
            if c:
                s = F.add(s, F.mul(F.from_int(c), F.pow(tv, i)))
        return s

    def reduce_fraction(self, v: Cyclotomic, n: int) -> int:
        """Reduction of v/n, which must be p-integral."""
        pa = n // _p_prime_part(n, self.p)
        try:
            w = v.divexact(pa)
        except ArithmeticError:
            raise InvariantError("value is not p-integral") from None
        return self.F.mul(self.reduce(w), self.F.inv(self.F.from_int(n // pa)))

    def int_(self, n: int) -> int:
        return self.F.from_int(n)

    # -- blocks -------------------------------------------------------------

    def blocks(self, G) -> list[Block]:
        H = as_subgroup(G)
        if H.parent is not self.parent:
            raise DomainError("subgroup of a different permutation group")
        cached = self._blocks.get(H.elements)
        if cached is not None:
            return cached
        out = self._compute_blocks(H)
        self._blocks[H.elements] = out
        return out

    def _compute_blocks(self, H: Subgroup) -> list[Block]:
        T = character_table(H)
        cc = T.classes
        n = len(cc)
        p = self.p
        F = self.F
        groups: dict[tuple, list[int]] = {}
        for chi in range(len(T.rows)):
            lam = tuple(self.reduce(central_character(T, chi, k)) for k in range(n))
            groups.setdefault(lam, []).append(chi)
        out = []
        for bid, (lam, rows) in enumerate(sorted(groups.items(), key=lambda kv: kv[1][0])):
            idem = []
            for k in range(n):
                kinv = cc.inverse[k]
                s = Cyclotomic.from_int(0, T.e)
                for chi in rows:
                    s = s + T.rows[chi][kinv] * T.degrees[chi]
                idem.append(self.reduce_fraction(s, H.order))
            d = max(character_defect(T, chi, p) for chi in rows)
            K = next((k for k in range(n) if idem[k] and lam[k]), None)
            if K is None:
                raise InvariantError("block has no defect class")
            D = sylow_subgroup(centralizer(H, cc.reps[K]), p)
            if D.order != p**d:
                raise InvariantError(f"defect group order {D.order} != p^{d}")
            out.append(Block(H, bid, tuple(rows), d, lam, tuple(idem), D, 0 in rows, p))
        if not out[0].principal:
            raise InvariantError("principal block not first")
        return out

    # -- class algebra over GF(p^m) ------------------------------------------

    def class_product(self, G, u: Sequence[int], v: Sequence[int]) -> list[int]:
        H = as_subgroup(G)
        a = class_multiplication_coefficients(conjugacy_classes(H))
        F = self.F
        n = len(u)
        w = [0] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                uv = F.mul(u[i], v[j])
                aij = a[i][j]
                for k in range(n):
                    c = aij[k] % self.p
                    if c:
                        w[k] = F.add(w[k], F.mul(uv, F.from_int(c)))
        return w

    def apply_lambda(self, lam: Sequence[int], v: Sequence[int]) -> int:
        return self.F.dot(lam, v)

    def is_multiplicative(self, G, lam: Sequence[int]) -> bool:
        H = as_subgroup(G)
        a = class_multiplication_coefficients(conjugacy_classes(H))
        F = self.F
        n = len(lam)
        if lam[0] != 1:
            return False
        for i in range(n):
            for j in range(i, n):
                lhs = F.mul(lam[i], lam[j])
                rhs = 0
                aij = a[i][j]
                for k in range(n):
                    c = aij[k] % self.p
                    if c and lam[k]:
                        rhs = F.add(rhs, F.mul(F.from_int(c), lam[k]))
                if lhs != rhs:
                    return False
        return True


def modular_system(G, p: int) -> ModularSystem:
    """The default modular system for G's permutation group at p (cached)."""
    root = as_subgroup(G)
    P = root.parent
    store = P.__dict__.setdefault("_modular_systems", {})
    ms = store.get(p)
    if ms is None:
        ms = ModularSystem(root, p)
        store[p] = ms
    return ms


def block_partition(G, p: int) -> list[Block]:
    """Blocks of G at p, principal block first."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    return modular_system(G, p).blocks(G)


def defect_group(G, B: Block) -> Subgroup:
    return B.defect_group


def height_zero_count(G, B: Block) -> int:
    T = character_table(B.group)
    return sum(1 for chi in B.rows if character_defect(T, chi, B.p) == B.defect)


def defect_one_count(G, B: Block) -> int:
    T = character_table(B.group)
    return sum(1 for chi in B.rows if character_defect(T, chi, B.p) == 1)


def block_degrees(B: Block) -> list[int]:
    T = character_table(B.group)
    return [T.degrees[chi] for chi in B.rows]


# ---------------------------------------------------------------------------
# Brauer morphism, B_C, induction


def brauer_morphism(ms: ModularSystem, G, Q: Subgroup, v: Sequence[int], H: Subgroup | None = None) -> list[int]:
    """Br_Q of a central element v of kG (given on G-classes), re-expressed on
    the classes of H, where C_G(Q) <= H <= N_G(Q); H defaults to C_G(Q)."""
    Gs = as_subgroup(G)
    if not Q.is_p_group(ms.p):
        raise InputError("Brauer morphism needs a p-subgroup")
    C = centralizer_of_subgroup(Gs, Q)
    if H is None:
        H = C
    if not (C.elements <= H.elements <= Gs.elements):
        raise DomainError("H must contain C_G(Q)")
    if not all(H.parent.conj(s, h) in Q.elements for h in H.gens for s in Q.gens):
        raise DomainError("H must normalise Q")
    ccG = conjugacy_classes(Gs)
    ccH = conjugacy_classes(H)
    Ce = C.elements
    return [v[ccG.class_of[r]] if r in Ce else 0 for r in ccH.reps]


def chain_stabilizer_of(G, members: Sequence[Subgroup]) -> Subgroup:
    Gs = as_subgroup(G)
    S = Gs.elements
    for Q in members:
        S = S & normalizer(Gs, Q).elements
    return Gs.parent.subgroup(S)


@dataclass
class BCDecomposition:
    members: list[Subgroup]
    stabilizer: Subgroup
    brauer_image: list[int]
    summands: list[Block] = field(default_factory=list)


def bc_summands(ms: ModularSystem, G, B: Block, members: Sequence[Subgroup], stabilizer: Subgroup | None = None) -> BCDecomposition:
    """B_C = Br_{Q_n}(e_B) k G_C as a set of blocks of the chain stabilizer."""
    Gs = as_subgroup(G)
    members = list(members)
    H = stabilizer if stabilizer is not None else chain_stabilizer_of(Gs, members)
    Qn = members[-1]
    img = brauer_morphism(ms, Gs, Qn, B.idem, H)
    F = ms.F
    summands = []
    total = [0] * len(img)
    for b in ms.blocks(H):
        x = ms.apply_lambda(b.lam, img)
        if x == 1:
            summands.append(b)
            total = [F.add(s, y) for s, y in zip(total, b.idem)]
        elif x != 0:
            raise InvariantError("Brauer image is not a sum of block idempotents")
    if total != img:
        raise InvariantError("summand idempotents do not add up to the Brauer image")
    return BCDecomposition(members, H, img, summands)


def induced_lambda(ms: ModularSystem, G, b: Block) -> list[int]:
    Gs = as_subgroup(G)
    ccG = conjugacy_classes(Gs)
    ccH = conjugacy_classes(b.group)
    F = ms.F
    lam = [0] * len(ccG)
    for k, r in enumerate(ccH.reps):
        if b.lam[k]:
            K = ccG.class_of[r]
            lam[K] = F.add(lam[K], b.lam[k])
    return lam


def block_induction(ms: ModularSystem, G, b: Block) -> Optional[Block]:
    """b^G when lambda_b^G is an algebra homomorphism, else None."""
    Gs = as_subgroup(G)
    if not b.group.elements <= Gs.elements:
        raise DomainError("block of a subgroup not contained in G")
    lam = induced_lambda(ms, Gs, b)
    if not ms.is_multiplicative(Gs, lam):
        return None
    for B in ms.blocks(Gs):
        if list(B.lam) == lam:
            return B
    raise InvariantError("induced central character matches no block")


def brauer_correspondent(ms: ModularSystem, G, B: Block) -> tuple[Subgroup, Block]:
    if B.defect == 0:
        raise DomainError("Brauer correspondent needs positive defect")
    Gs = as_subgroup(G)
    D = B.defect_group
    N = normalizer(Gs, D)
    cands = [b for b in ms.blocks(N) if b.defect_group.elements == D.elements and block_induction(ms, Gs, b) is B]
    if len(cands) != 1:
        raise InvariantError(f"{len(cands)} Brauer correspondent candidates")
    return N, cands[0]


def is_subconjugate(G, A: Subgroup, B: Subgroup) -> bool:
    """Whether A^g <= B for some g in G."""
    Gs = as_subgroup(G)
    if B.order % A.order:
        return False
    P = Gs.parent
    Be = B.elements
    gens = A.gens
    return any(all(P.conj(s, g) in Be for s in gens) for g in Gs.sorted)


def block_record(group_name: str, p: int, B: Block) -> dict:
    return {
        "group": group_name,
        "prime": p,
        "block_id": B.id,
        "degrees": block_degrees(B),
        "defect": B.defect,
        "defect_group_order": B.defect_group.order,
        "am": height_zero_count(None, B),
        "k1": defect_one_count(None, B),
        "principal": B.principal,
    }
