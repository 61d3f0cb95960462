"""Permutations as image tuples, with cycle-notation I/O.

A permutation of degree n is a tuple ``p`` with ``p[i]`` the image of ``i``.
Products are read left to right: ``mul(a, b)`` applies ``a`` first, then ``b``.
Conjugation is ``x^g = g^-1 x g``.
"""

from __future__ import annotations

import re
from math import gcd

from .errors import InputError

Permutation = tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def check_perm(p, degree: int | None = None) -> Permutation:
    p = tuple(int(x) for x in p)
    if degree is not None and len(p) != degree:
        raise InputError(f"permutation {p} has degree {len(p)}, expected {degree}")
    if sorted(p) != list(range(len(p))):
        raise InputError(f"not a permutation: {p}")
    return p


def identity(n: int) -> Permutation:
    return tuple(range(n))


def mul(a: Permutation, b: Permutation) -> Permutation:
    return tuple(b[i] for i in a)


def inverse(a: Permutation) -> Permutation:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def order(a: Permutation) -> int:
    seen = [False] * len(a)
    o = 1
    for i in range(len(a)):
        if seen[i]:
            continue
        n = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = a[j]
            n += 1
        o = o * n // gcd(o, n)
    return o


def from_cycles(cycles, degree: int) -> Permutation:
    img = list(range(degree))
    used: set[int] = set()
    for cyc in cycles:
        cyc = [int(x) for x in cyc]
        for x in cyc:
            if not 0 <= x < degree:
                raise InputError(f"point {x} outside [0, {degree})")
            if x in used:
                raise InputError(f"point {x} repeated in cycle notation")
            used.add(x)
        for i, x in enumerate(cyc):
            img[x] = cyc[(i + 1) % len(cyc)]
    return tuple(img)


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation such as ``"(0 1)(2 3)"``; ``"()"`` is the identity."""
    text = text.strip()
    if not text:
        raise InputError("empty permutation string")
    rest = _CYCLE_RE.sub("", text).strip()
    if rest:
        raise InputError(f"cannot parse permutation {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = body.replace(",", " ").split()
        try:
            cycles.append([int(x) for x in pts])
        except ValueError:
            raise InputError(f"cannot parse permutation {text!r}") from None
    return from_cycles([c for c in cycles if c], degree)


def format_cycles(p: Permutation) -> str:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def read_generator_file(path, degree: int | None = None) -> tuple[int, list[Permutation]]:
    """Read one permutation per line; blank lines and ``#`` comments are skipped.

    When ``degree`` is not given it is one more than the largest point mentioned.
    """
    lines = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    if degree is None:
        pts = [int(x) for line in lines for x in re.findall(r"\d+", line)]
        degree = max(pts) + 1 if pts else 1
    return degree, [parse_cycles(line, degree) for line in lines]
