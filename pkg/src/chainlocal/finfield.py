"""Small finite fields GF(p^m) with log tables.

Elements are ints in [0, p^m): the base-p digits are the coefficients of a
polynomial in the root ``x`` of a fixed primitive polynomial. 0 and 1 are the
field's zero and one. ``gen`` is x itself, a generator of the unit group.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


class GF:
    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.q = p**m
        self.poly = self._find_primitive_poly()
        q = self.q
        self.exp = [0] * (2 * (q - 1))
        self.log = [0] * q
        x = 1
        for i in range(q - 1):
            self.exp[i] = x
            self.exp[i + q - 1] = x
            self.log[x] = i
            x = self._mul_by_x(x)
        self._neg = [self._encode([(-d) % p for d in self._digits(a)]) for a in range(q)]

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.m):
            out.append(a % p)
            a //= p
        return out

    def _encode(self, digits) -> int:
        a = 0
        for d in reversed(digits):
            a = a * self.p + d
        return a

    def _mul_by_x_with(self, a: int, poly) -> int:
        d = [0] + self._digits(a)
        top = d[self.m]
        if top:
            for i in range(self.m):
                d[i] = (d[i] - top * poly[i]) % self.p
        return self._encode(d[: self.m])

    def _mul_by_x(self, a: int) -> int:
        return self._mul_by_x_with(a, self.poly)

    def _find_primitive_poly(self) -> tuple[int, ...]:
        # least monic poly (lexicographic in low coefficients) in which x has order q-1
        p, m, q = self.p, self.m, self.p**self.m
        if m == 1:
            for g in range(1, p):
                if p == 2 or all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)):
                    return ((-g) % p,)
        for low in product(range(p), repeat=m):
            poly = tuple(reversed(low))
            if poly[0] == 0:
                continue
            x = 1
            ok = True
            for i in range(1, q - 1):
                x = self._mul_by_x_with(x, poly)
                if x == 1 or x == 0:
                    ok = False
                    break
            if ok and self._mul_by_x_with(x, poly) == 1:
                return poly
        raise RuntimeError("no primitive polynomial found")

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        r = 0
        mult = 1
        while a or b:
            r += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return r

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k else 1
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the rational integer n (the prime field sits in digit 0)."""
        return n % self.p

    def gen_power(self, k: int) -> int:
        return self.exp[k % (self.q - 1)]

    def order(self, a: int) -> int:
        n = self.q - 1
        k = self.log[a]
        from math import gcd

        return n // gcd(n, k)

    def sum(self, items) -> int:
        s = 0
        for x in items:
            s = self.add(s, x)
        return s

    def dot(self, u, v) -> int:
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = self.add(s, self.mul(a, b))
        return s


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def field(p: int, m: int) -> GF:
    return GF(p, m)
