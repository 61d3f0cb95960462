"""Permutation groups: stabilizer chains, element indexing, subgroups and the
usual local constructions (classes, centralizers, normalizers, Sylow, p-core,
conjugators, isomorphism).

Every group is enumerated once. Elements are addressed by their index in the
lexicographically sorted element list, so index order is lexicographic order of
image sequences and the identity always has index 0. Subgroups are frozen sets
of such indices, interned per parent so derived tables can be cached on them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional

from . import perm as _perm
from .errors import DomainError, InputError, InvariantError, ResourceError
from .perm import Permutation


@dataclass
class Config:
    max_order: int = 10**5
    max_degree: int = 64
    max_psubgroups: int = 20000
    max_chains: int = 10**6


DEFAULT_CONFIG = Config()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _schreier_sims(gens: list[Permutation], n: int):
    """Deterministic Schreier-Sims. Returns (base, transversals)."""
    ident = _perm.identity(n)
    strong = [g for g in gens if g != ident]
    base: list[int] = []

    def first_moved(g):
        return next(i for i in range(n) if g[i] != i)

    for g in strong:
        if all(g[b] == b for b in base):
            base.append(first_moved(g))

    trans: list[dict[int, Permutation]] = []

    def level_gens(i):
        return [s for s in strong if all(s[b] == b for b in base[:i])]

    def orbit(i):
        b = base[i]
        t = {b: ident}
        queue = [b]
        gs = level_gens(i)
        for pt in queue:
            u = t[pt]
            for s in gs:
                y = s[pt]
                if y not in t:
                    t[y] = _perm.mul(u, s)
                    queue.append(y)
        return t

    def sift(h, start):
        for lvl in range(start, len(base)):
            x = h[base[lvl]]
            if x not in trans[lvl]:
                return h, lvl
            h = _perm.mul(h, _perm.inverse(trans[lvl][x]))
        return h, len(base)

    trans = [orbit(i) for i in range(len(base))]
    i = len(base) - 1
    while i >= 0:
        extended = False
        gs = level_gens(i)
        for pt, u in list(trans[i].items()):
            for s in gs:
                h = _perm.mul(_perm.mul(u, s), _perm.inverse(trans[i][s[pt]]))
                if h == ident:
                    continue
                res, j = sift(h, i + 1)
                if res == ident:
                    continue
                strong.append(res)
                if j == len(base):
                    base.append(first_moved(res))
                    trans.append({})
                for lvl in range(i + 1, j + 1):
                    trans[lvl] = orbit(lvl)
                i = j
                extended = True
                break
            if extended:
                break
        if not extended:
            i -= 1
    return base, trans


class PermGroup:
    """A finite permutation group given by generators.

    Order and membership come from a stabilizer chain; everything else works on
    the enumerated element list, built lazily and guarded by ``config.max_order``.
    """

    def __init__(self, degree: int, generators: Iterable, config: Config | None = None, name: str | None = None):
        self.config = config or DEFAULT_CONFIG
        if degree < 1:
            raise InputError("degree must be positive")
        if degree > self.config.max_degree:
            raise ResourceError(f"degree {degree} exceeds guard {self.config.max_degree}")
        self.degree = degree
        self.generators = [_perm.check_perm(g, degree) for g in generators]
        self.name = name
        self._base, self._trans = _schreier_sims(self.generators, degree)
        o = 1
        for t in self._trans:
            o *= len(t)
        self.order = o
        if o > self.config.max_order:
            raise ResourceError(f"group order {o} exceeds guard {self.config.max_order}")
        self._elements: list[Permutation] | None = None
        self._index: dict[Permutation, int] | None = None
        self._rows: list[list[int] | None] = []
        self._inv: list[int] = []
        self._orders: list[int] = []
        self._interned: dict[frozenset, Subgroup] = {}

    def __repr__(self):
        return f"PermGroup({self.name or '?'}, degree={self.degree}, order={self.order})"

    # stabilizer chain queries
    def contains(self, p) -> bool:
        p = tuple(p)
        if len(p) != self.degree:
            return False
        for b, t in zip(self._base, self._trans):
            x = p[b]
            if x not in t:
                return False
            p = _perm.mul(p, _perm.inverse(t[x]))
        return p == _perm.identity(self.degree)

    def random_element(self, rng) -> Permutation:
        g = _perm.identity(self.degree)
        for t in reversed(self._trans):
            u = t[rng.choice(sorted(t))]
            g = _perm.mul(g, u)
        return g

    # element enumeration
    def _enumerate(self):
        if self._elements is not None:
            return
        if self.order > self.config.max_order:
            raise ResourceError(f"group order {self.order} exceeds guard {self.config.max_order}")
        ident = _perm.identity(self.degree)
        seen = {ident}
        queue = [ident]
        for x in queue:
            for s in self.generators:
                y = _perm.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != self.order:
            raise InvariantError("enumeration disagrees with stabilizer-chain order")
        self._elements = sorted(seen)
        self._index = {g: i for i, g in enumerate(self._elements)}
        self._rows = [None] * self.order
        self._inv = [self._index[_perm.inverse(g)] for g in self._elements]
        self._orders = [_perm.order(g) for g in self._elements]

    @property
    def elements(self) -> list[Permutation]:
        self._enumerate()
        return self._elements

    def index(self, p) -> int:
        self._enumerate()
        try:
            return self._index[tuple(p)]
        except KeyError:
            raise DomainError(f"{_perm.format_cycles(tuple(p))} is not in the group") from None

    def perm(self, i: int) -> Permutation:
        self._enumerate()
        return self._elements[i]

    def mul(self, a: int, b: int) -> int:
        row = self._rows[a]
        if row is None:
            ea = self._elements[a]
            idx = self._index
            row = [idx[tuple(g[i] for i in ea)] for g in self._elements]
            self._rows[a] = row
        return row[b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def conj(self, x: int, g: int) -> int:
        """x^g = g^-1 x g."""
        return self.mul(self.mul(self._inv[g], x), g)

    def elt_order(self, a: int) -> int:
        return self._orders[a]

    def power(self, a: int, k: int) -> int:
        k %= self._orders[a]
        r = 0
        base = a
        while k:
            if k & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            k >>= 1
        return r

    @property
    def exponent(self) -> int:
        self._enumerate()
        e = 1
        for o in set(self._orders):
            e = e * o // gcd(e, o)
        return e

    # subgroups
    def subgroup(self, elements) -> "Subgroup":
        key = frozenset(elements)
        sg = self._interned.get(key)
        if sg is None:
            sg = Subgroup(self, key)
            self._interned[key] = sg
        return sg

    def closure(self, gens: Iterable[int]) -> "Subgroup":
        self._enumerate()
        gens = [g for g in gens if g != 0]
        seen = {0}
        queue = [0]
        for x in queue:
            for s in gens:
                y = self.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return self.subgroup(seen)

    def generated_by(self, perms: Iterable) -> "Subgroup":
        return self.closure(self.index(p) for p in perms)

    @property
    def full(self) -> "Subgroup":
        self._enumerate()
        return self.subgroup(range(self.order))

    @property
    def trivial(self) -> "Subgroup":
        self._enumerate()
        return self.subgroup([0])


class Subgroup:
    """A subgroup of a :class:`PermGroup`, stored as a set of element indices."""

    __slots__ = ("parent", "elements", "order", "_sorted", "_gens", "cache", "__weakref__")

    def __init__(self, parent: PermGroup, elements: frozenset):
        self.parent = parent
        self.elements = elements
        self.order = len(elements)
        self._sorted: tuple[int, ...] | None = None
        self._gens: list[int] | None = None
        self.cache: dict = {}

    def __repr__(self):
        return f"Subgroup(order={self.order}, gens={[_perm.format_cycles(self.parent.perm(g)) for g in self.gens]})"

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.sorted)

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def __lt__(self, other: "Subgroup") -> bool:
        return self.elements < other.elements

    @property
    def sorted(self) -> tuple[int, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self.elements))
        return self._sorted

    @property
    def gens(self) -> list[int]:
        """A small generating set: the greedy choice of lexicographically least elements."""
        if self._gens is None:
            gens: list[int] = []
            cur = self.parent.trivial
            for x in self.sorted:
                if x not in cur.elements:
                    gens.append(x)
                    cur = self.parent.closure(gens)
                    if cur.order == self.order:
                        break
            self._gens = gens
        return self._gens

    def conjugate(self, g: int) -> "Subgroup":
        P = self.parent
        return P.subgroup(P.conj(x, g) for x in self.elements)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return self.parent.subgroup(self.elements & other.elements)

    def join(self, other: "Subgroup") -> "Subgroup":
        return self.parent.closure(self.gens + other.gens)

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def is_normal_in(self, H: "Subgroup") -> bool:
        P = self.parent
        return all(P.conj(s, h) in self.elements for h in H.gens for s in self.gens)

    @property
    def exponent(self) -> int:
        e = 1
        for x in self.elements:
            o = self.parent.elt_order(x)
            e = e * o // gcd(e, o)
        return e

    def perms(self) -> list[Permutation]:
        return [self.parent.perm(x) for x in self.sorted]


def build_group(degree: int, generators, config: Config | None = None, name: str | None = None) -> PermGroup:
    """Build a permutation group from generators; order is exact (Schreier-Sims)."""
    return PermGroup(degree, generators, config=config, name=name)


def as_subgroup(G) -> Subgroup:
    return G.full if isinstance(G, PermGroup) else G


def _elt(H: Subgroup, g) -> int:
    return g if isinstance(g, int) else H.parent.index(g)


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass
class ConjClassTable:
    group: Subgroup
    classes: list[tuple[int, ...]]
    class_of: dict[int, int]
    inverse: list[int]
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def reps(self) -> list[int]:
        return [c[0] for c in self.classes]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    def __len__(self):
        return len(self.classes)

    def rep_orders(self) -> list[int]:
        P = self.group.parent
        return [P.elt_order(r) for r in self.reps]

    def power_map(self, k: int) -> list[int]:
        """Class of rep^k for every class."""
        pm = self._powers.get(k)
        if pm is None:
            P = self.group.parent
            pm = [self.class_of[P.power(r, k)] for r in self.reps]
            self._powers[k] = pm
        return pm


def conjugacy_classes(G) -> ConjClassTable:
    """Conjugacy classes ordered by their least element, which is also the
    canonical representative; the identity class is always class 0."""
    H = as_subgroup(G)
    cached = H.cache.get("classes")
    if cached is not None:
        return cached
    P = H.parent
    if H.order > P.config.max_order:
        raise ResourceError(f"group order {H.order} exceeds guard {P.config.max_order}")
    gens = H.gens
    seen: set[int] = set()
    classes = []
    for x in H.sorted:
        if x in seen:
            continue
        orb = {x}
        queue = [x]
        for y in queue:
            for g in gens:
                z = P.conj(y, g)
                if z not in orb:
                    orb.add(z)
                    queue.append(z)
        seen |= orb
        classes.append(tuple(sorted(orb)))
    class_of = {x: i for i, c in enumerate(classes) for x in c}
    inverse = [class_of[P.inv(c[0])] for c in classes]
    table = ConjClassTable(H, classes, class_of, inverse)
    H.cache["classes"] = table
    return table


def centralizer(G, g) -> Subgroup:
    """C_G(g) for an element g of G."""
    H = as_subgroup(G)
    g = _elt(H, g)
    if g not in H.elements:
        raise DomainError("element is not in the group")
    P = H.parent
    return P.subgroup(x for x in H.elements if P.mul(x, g) == P.mul(g, x))


def centralizer_of_subgroup(G, K: Subgroup) -> Subgroup:
    H = as_subgroup(G)
    P = H.parent
    gens = K.gens
    return P.subgroup(x for x in H.elements if all(P.mul(x, s) == P.mul(s, x) for s in gens))


def normalizer(G, K: Subgroup) -> Subgroup:
    """N_G(K) by exhaustive scan over G."""
    H = as_subgroup(G)
    if not K.elements <= H.elements:
        raise DomainError("subgroup is not contained in the group")
    return _normalizer_any(H, K)


def _normalizer_any(H: Subgroup, K: Subgroup) -> Subgroup:
    key = ("norm", K.elements)
    cached = H.cache.get(key)
    if cached is not None:
        return cached
    P = H.parent
    gens = K.gens
    Ke = K.elements
    N = P.subgroup(x for x in H.elements if all(P.conj(s, x) in Ke for s in gens))
    H.cache[key] = N
    return N


def sylow_subgroup(G, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one factor of p at a time by the least element
    of the normalizer whose image in N/P has order p."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    H = as_subgroup(G)
    key = ("sylow", p)
    if key in H.cache:
        return H.cache[key]
    P = H.parent
    target = p ** p_valuation(H.order, p)
    S = P.trivial
    while S.order < target:
        N = _normalizer_any(H, S)
        ext = next(x for x in N.sorted if x not in S.elements and P.power(x, p) in S.elements)
        S2 = P.closure(S.gens + [ext])
        if S2.order != S.order * p:
            raise InvariantError("Sylow extension step did not multiply the order by p")
        S = S2
    H.cache[key] = S
    return S


def conjugates(G, K: Subgroup) -> list[Subgroup]:
    """All G-conjugates of K, sorted by element tuple."""
    H = as_subgroup(G)
    count = H.order // _normalizer_any(H, K).order
    seen = {}
    for g in H.sorted:
        C = K.conjugate(g)
        seen.setdefault(C.elements, C)
        if len(seen) == count:
            break
    return sorted(seen.values(), key=lambda S: S.sorted)


def p_core(G, p: int) -> Subgroup:
    """O_p(G): the intersection of all Sylow p-subgroups."""
    H = as_subgroup(G)
    key = ("pcore", p)
    if key in H.cache:
        return H.cache[key]
    S = sylow_subgroup(H, p)
    core = S.elements
    for C in conjugates(H, S):
        core = core & C.elements
    out = H.parent.subgroup(core)
    H.cache[key] = out
    return out


def _conjugator_index(G, H1: Subgroup, H2: Subgroup) -> Optional[int]:
    H = as_subgroup(G)
    if H1.order != H2.order:
        return None
    P = H.parent
    if H1.elements == H2.elements:
        return 0
    gens = H1.gens
    target = H2.elements
    for g in H.sorted:
        if all(P.conj(s, g) in target for s in gens):
            return g
    return None


def subgroup_conjugator(G, H1: Subgroup, H2: Subgroup) -> Optional[Permutation]:
    """Least g in G (lexicographically) with H1^g = H2, or None."""
    H = as_subgroup(G)
    g = _conjugator_index(H, H1, H2)
    if g is None:
        return None
    if H1.conjugate(g).elements != H2.elements:
        raise InvariantError("conjugator failed verification")
    return H.parent.perm(g)


# ---------------------------------------------------------------------------
# isomorphism


def center(G) -> Subgroup:
    H = as_subgroup(G)
    return centralizer_of_subgroup(H, H)


def derived_subgroup(G) -> Subgroup:
    H = as_subgroup(G)
    P = H.parent
    gens = H.gens
    comms = [P.mul(P.mul(P.inv(a), P.inv(b)), P.mul(a, b)) for a in gens for b in gens]
    D = P.closure(comms)
    changed = True
    while changed:
        changed = False
        for h in gens:
            for s in D.gens:
                c = P.conj(s, h)
                if c not in D.elements:
                    D = P.closure(D.gens + [c])
                    changed = True
    return D


def fingerprint(G) -> tuple:
    """Isomorphism invariant: order, element-order histogram, |Z|, |G'|, class sizes."""
    H = as_subgroup(G)
    if "fingerprint" in H.cache:
        return H.cache["fingerprint"]
    P = H.parent
    hist = tuple(sorted(Counter(P.elt_order(x) for x in H.elements).items()))
    fp = (
        H.order,
        hist,
        center(H).order,
        derived_subgroup(H).order,
        tuple(sorted(conjugacy_classes(H).sizes)),
    )
    H.cache["fingerprint"] = fp
    return fp


def _extend_hom(A: Subgroup, B: Subgroup, gens: list[int], imgs: list[int]) -> Optional[dict[int, int]]:
    PA, PB = A.parent, B.parent
    phi = {0: 0}
    queue = [0]
    for x in queue:
        fx = phi[x]
        for s, t in zip(gens, imgs):
            y = PA.mul(x, s)
            fy = PB.mul(fx, t)
            old = phi.get(y)
            if old is None:
                phi[y] = fy
                queue.append(y)
            elif old != fy:
                return None
    return phi


def isomorphism(G1, G2) -> Optional[dict[int, int]]:
    """An isomorphism as a dict of element indices, or None."""
    A, B = as_subgroup(G1), as_subgroup(G2)
    if A.order > A.parent.config.max_order or B.order > B.parent.config.max_order:
        raise ResourceError("isomorphism test beyond size guard")
    if fingerprint(A) != fingerprint(B):
        return None
    PA, PB = A.parent, B.parent
    # few generators of large order keep the search shallow
    gens: list[int] = []
    cur = PA.trivial
    for x in sorted(A.elements, key=lambda x: (-PA.elt_order(x), x)):
        if x not in cur.elements:
            gens.append(x)
            cur = PA.closure(gens)
            if cur.order == A.order:
                break
    ccA, ccB = conjugacy_classes(A), conjugacy_classes(B)

    def inv(P, cc, x):
        return (P.elt_order(x), len(cc.classes[cc.class_of[x]]))

    cands = []
    for s in gens:
        key = inv(PA, ccA, s)
        cands.append([y for y in B.sorted if inv(PB, ccB, y) == key])

    imgs: list[int] = []

    def search(i):
        if i == len(gens):
            phi = _extend_hom(A, B, gens, imgs)
            if phi is not None and len(phi) == A.order and len(set(phi.values())) == B.order:
                return phi
            return None
        for y in cands[i]:
            imgs.append(y)
            part = _extend_hom(A, B, gens[: i + 1], imgs)
            if part is not None and len(set(part.values())) == len(part):
                res = search(i + 1)
                if res is not None:
                    return res
            imgs.pop()
        return None

    return search(0)


def is_isomorphic(G1, G2) -> bool:
    return isomorphism(G1, G2) is not None
