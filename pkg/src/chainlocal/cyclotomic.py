"""Exact arithmetic in Z[zeta_e].

A value is a coefficient vector indexed by residues mod e. Vectors are kept
reduced modulo the cyclotomic polynomial Phi_e, so entries at positions
>= phi(e) are zero and equality of values is equality of vectors.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n)[:-1]:
        num = _exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("polynomial division not exact")
    return q


def _reduce(coeffs: list[int], e: int) -> tuple[int, ...]:
    """Reduce a length-e vector (already folded mod x^e - 1) modulo Phi_e."""
    phi = cyclotomic_poly(e)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(e - 1, deg - 1, -1):
        k = c[i]
        if k:
            # Phi_e is monic
            base = i - deg
            for j in range(deg + 1):
                c[base + j] -= k * phi[j]
    return tuple(c)


class Cyclotomic:
    """An element of Z[zeta_e]; immutable and hashable."""

    __slots__ = ("e", "coeffs", "_hash")

    def __init__(self, e: int, coeffs, _reduced: bool = False):
        self.e = e
        if _reduced:
            self.coeffs = tuple(coeffs)
        else:
            c = [0] * e
            for i, x in enumerate(coeffs):
                c[i % e] += x
            self.coeffs = _reduce(c, e)
        self._hash = None

    @classmethod
    def from_int(cls, n: int, e: int = 1) -> "Cyclotomic":
        c = [0] * e
        c[0] = n
        return cls(e, c, _reduced=True)

    @classmethod
    def root(cls, k: int, e: int) -> "Cyclotomic":
        c = [0] * e
        c[k % e] = 1
        return cls(e, c)

    @classmethod
    def from_terms(cls, e: int, terms: dict[int, int]) -> "Cyclotomic":
        c = [0] * e
        for k, v in terms.items():
            c[k % e] += v
        return cls(e, c)

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.e != self.e:
                raise ValueError(f"conductor mismatch {self.e} vs {other.e}")
            return other
        if isinstance(other, int):
            return Cyclotomic.from_int(other, self.e)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.e, [a + b for a, b in zip(self.coeffs, o.coeffs)], _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.e, [-a for a in self.coeffs], _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.e, [a - b for a, b in zip(self.coeffs, o.coeffs)], _reduced=True)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.e, [other * a for a in self.coeffs], _reduced=True)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        e = self.e
        out = [0] * e
        lhs = [(i, a) for i, a in enumerate(self.coeffs) if a]
        for j, b in enumerate(o.coeffs):
            if b:
                for i, a in lhs:
                    out[(i + j) % e] += a * b
        return Cyclotomic(e, out)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        e = self.e
        out = [0] * e
        for i, a in enumerate(self.coeffs):
            if a:
                out[(-i) % e] += a
        return Cyclotomic(e, out)

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta -> zeta^k (k coprime to e)."""
        e = self.e
        if gcd(k, e) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        out = [0] * e
        for i, a in enumerate(self.coeffs):
            if a:
                out[(i * k) % e] += a
        return Cyclotomic(e, out)

    def divexact(self, n: int) -> "Cyclotomic":
        """Division by a rational integer; raises if not exact in Z[zeta_e]."""
        if any(a % n for a in self.coeffs):
            raise ArithmeticError(f"{self} is not divisible by {n}")
        return Cyclotomic(self.e, [a // n for a in self.coeffs], _reduced=True)

    def embed(self, e2: int) -> "Cyclotomic":
        """The same number in conductor e2 (a multiple of e)."""
        if e2 % self.e:
            raise ValueError("target conductor must be a multiple")
        s = e2 // self.e
        out = [0] * e2
        for i, a in enumerate(self.coeffs):
            if a:
                out[i * s] += a
        return Cyclotomic(e2, out)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, Cyclotomic):
            if self.e == other.e:
                return self.coeffs == other.coeffs
            e = self.e * other.e // gcd(self.e, other.e)
            return self.embed(e).coeffs == other.embed(e).coeffs
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.e, self.coeffs))
        return self._hash

    def sort_key(self) -> tuple[int, ...]:
        return self.coeffs

    def to_complex(self) -> complex:
        import cmath

        return sum(a * cmath.exp(2j * cmath.pi * i / self.e) for i, a in enumerate(self.coeffs) if a)

    def __str__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            if i == 0:
                terms.append(str(a))
            else:
                terms.append(f"{a}*z^{i}")
        if not terms:
            return "0"
        return "+".join(terms).replace("+-", "-")

    def __repr__(self):
        return f"Cyclotomic({self.e}, {self})"
