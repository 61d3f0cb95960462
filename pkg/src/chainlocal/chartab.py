"""Ordinary character tables by simultaneous diagonalisation of the class
matrices over a prime field F_l, lifted to exact cyclotomic values.

The common eigenvectors of the class matrices over F_l (l = 1 mod exponent)
are the reduced central characters. Degrees are recovered from the norm of the
eigenvector, values from it by scaling, and exact values by discrete Fourier
inversion over the powers of each class representative.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .cyclotomic import Cyclotomic
from .errors import InvariantError, ResourceError
from .permgroup import ConjClassTable, as_subgroup, conjugacy_classes, is_prime, p_valuation

MAX_AUX_PRIME = 10**6


def class_multiplication_coefficients(cc: ConjClassTable) -> list[list[list[int]]]:
    """a[i][j][k] = #{(x, y) in K_i x K_j : xy = z_k} for the fixed representative z_k."""
    H = cc.group
    cached = H.cache.get("structure_constants")
    if cached is not None:
        return cached
    P = H.parent
    n = len(cc)
    a = [[[0] * n for _ in range(n)] for _ in range(n)]
    class_of = cc.class_of
    reps = cc.reps
    for i, Ki in enumerate(cc.classes):
        ai = a[i]
        for k, z in enumerate(reps):
            for x in Ki:
                ai[class_of[P.mul(P.inv(x), z)]][k] += 1
    H.cache["structure_constants"] = a
    return a


@dataclass
class CharacterTable:
    classes: ConjClassTable
    e: int
    rows: list[tuple[Cyclotomic, ...]]
    degrees: list[int]
    aux_prime: int

    @property
    def group(self):
        return self.classes.group

    def __len__(self):
        return len(self.rows)

    def value(self, chi: int, k: int) -> Cyclotomic:
        return self.rows[chi][k]


# ---------------------------------------------------------------------------
# linear algebra over F_l


def _nullspace(rows: list[list[int]], ncols: int, ell: int) -> list[list[int]]:
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] % ell), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], ell - 2, ell)
        m[r] = [x * inv % ell for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % ell for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-m[i][f]) % ell
        basis.append(v)
    return basis


def _split(space: list[list[int]], M: list[list[int]], ell: int) -> list[list[list[int]]]:
    """Decompose span(space) into eigenspaces of M (space is M-invariant)."""
    n = len(M)
    d = len(space)
    Mb = [[sum(M[i][k] * b[k] for k in range(n)) % ell for i in range(n)] for b in space]
    parts = []
    found = 0
    for lam in range(ell):
        # rows of the n x d system sum_i c_i (M b_i - lam b_i) = 0
        W = [[(Mb[i][r] - lam * space[i][r]) % ell for i in range(d)] for r in range(n)]
        null = _nullspace(W, d, ell)
        if null:
            vecs = [[sum(c[i] * space[i][r] for i in range(d)) % ell for r in range(n)] for c in null]
            parts.append(vecs)
            found += len(vecs)
            if found == d:
                break
    if found != d:
        raise InvariantError("class matrix is not diagonalisable over the auxiliary field")
    return parts


def _primitive_root(ell: int) -> int:
    fac = []
    n = ell - 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // q, ell) != 1 for q in fac):
            return g
    return 1


def auxiliary_prime(order: int, e: int) -> int:
    """Least prime l = 1 mod e with l^2 > 4|G| (so l > 2 sqrt|G|)."""
    ell = e + 1
    while ell < MAX_AUX_PRIME:
        if is_prime(ell) and ell * ell > 4 * order:
            return ell
        ell += e
    raise ResourceError("no auxiliary prime below bound; raise MAX_AUX_PRIME")


def character_table(G) -> CharacterTable:
    H = as_subgroup(G)
    cached = H.cache.get("character_table")
    if cached is not None:
        return cached
    cc = conjugacy_classes(H)
    n = len(cc)
    order = H.order
    e = H.exponent
    sizes = cc.sizes
    a = class_multiplication_coefficients(cc)
    ell = auxiliary_prime(order, e)
    z = pow(_primitive_root(ell), (ell - 1) // e, ell)

    spaces = [[[1 if i == j else 0 for i in range(n)] for j in range(n)]]
    for j in range(1, n):
        if all(len(s) == 1 for s in spaces):
            break
        M = [[a[j][i][k] % ell for k in range(n)] for i in range(n)]
        nxt = []
        for s in spaces:
            nxt.extend([s] if len(s) == 1 else _split(s, M, ell))
        spaces = nxt
    if len(spaces) != n or any(len(s) != 1 for s in spaces):
        raise InvariantError("simultaneous eigenspaces are not one-dimensional")

    inv_cls = cc.inverse
    orders = cc.rep_orders()
    maxdeg = int(order**0.5)
    powmaps = {k: cc.power_map(k) for k in range(e)}
    rows = []
    degrees = []
    for (v,) in spaces:
        w0 = pow(v[0], ell - 2, ell)
        w = [x * w0 % ell for x in v]
        s = sum(w[k] * w[inv_cls[k]] * pow(sizes[k], ell - 2, ell) for k in range(n)) % ell
        dsq = order * pow(s, ell - 2, ell) % ell
        deg = next((d for d in range(1, maxdeg + 1) if d * d % ell == dsq), None)
        if deg is None or order % deg:
            raise InvariantError("could not recover a character degree")
        vals_mod = [w[k] * deg * pow(sizes[k], ell - 2, ell) % ell for k in range(n)]
        row = []
        for k in range(n):
            o = orders[k]
            step = e // o
            inv_o = pow(o, ell - 2, ell)
            terms = {}
            total = 0
            for jj in range(o):
                m = 0
                for i in range(o):
                    m += vals_mod[powmaps[i][k]] * pow(z, (-step * i * jj) % e, ell)
                m = m * inv_o % ell
                if m > deg:
                    raise InvariantError("eigenvalue multiplicity exceeds the degree")
                if m:
                    terms[step * jj] = m
                    total += m
            if total != deg:
                raise InvariantError("eigenvalue multiplicities do not sum to the degree")
            row.append(Cyclotomic.from_terms(e, terms))
        rows.append(tuple(row))
        degrees.append(deg)

    def key(idx):
        row = rows[idx]
        trivial = all(v == 1 for v in row)
        return (degrees[idx], not trivial, tuple(v.sort_key() for v in row))

    perm = sorted(range(n), key=key)
    T = CharacterTable(cc, e, [rows[i] for i in perm], [degrees[i] for i in perm], ell)
    H.cache["character_table"] = T
    return T


def central_character(T: CharacterTable, chi: int, k: int) -> Cyclotomic:
    """omega_chi(K) = |K| chi(g_K) / chi(1), exact in Z[zeta]."""
    return (T.rows[chi][k] * T.classes.sizes[k]).divexact(T.degrees[chi])


def p_adic_valuation_of_degree(T: CharacterTable, chi: int, p: int) -> int:
    return p_valuation(T.degrees[chi], p)


def character_defect(T: CharacterTable, chi: int, p: int) -> int:
    return p_valuation(T.group.order, p) - p_valuation(T.degrees[chi], p)


def inner_product_times_order(T: CharacterTable, chi: int, psi: int) -> Cyclotomic:
    """sum_K |K| chi(g_K) conj(psi(g_K)); equals |G| delta for irreducibles."""
    s = Cyclotomic.from_int(0, T.e)
    for k, size in enumerate(T.classes.sizes):
        s = s + T.rows[chi][k] * T.rows[psi][k].conjugate() * size
    return s


def check_orthogonality(T: CharacterTable) -> bool:
    """Both orthogonality relations, exactly."""
    n = len(T.rows)
    order = T.group.order
    if n != len(T.classes):
        return False
    if sum(d * d for d in T.degrees) != order:
        return False
    conj = [[v.conjugate() for v in row] for row in T.rows]
    sizes = T.classes.sizes
    for i in range(n):
        for j in range(i, n):
            s = Cyclotomic.from_int(0, T.e)
            for k in range(n):
                s = s + T.rows[i][k] * conj[j][k] * sizes[k]
            if s != (order if i == j else 0):
                return False
    for k in range(n):
        for l in range(k, n):
            s = Cyclotomic.from_int(0, T.e)
            for i in range(n):
                s = s + T.rows[i][k] * conj[i][l]
            expected = order // sizes[k] if k == l else 0
            if s != expected:
                return False
    return True


def table_to_csv(T: CharacterTable) -> str:
    """Header: conductor then class sizes; one row per character, values as c0+c1*z^1+..."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"conductor={T.e}"] + [str(s) for s in T.classes.sizes])
    for i, row in enumerate(T.rows):
        w.writerow([f"chi{i}"] + [str(v) for v in row])
    return buf.getvalue()
