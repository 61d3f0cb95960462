"""Named groups shipped with the package, all as permutation groups on 0-based points."""

from __future__ import annotations

from itertools import product

from .errors import InputError
from .perm import parse_cycles
from .permgroup import Config, PermGroup


def _sl23_generators():
    # SL(2,3) acting on the 8 nonzero vectors of F_3^2
    vecs = [v for v in product(range(3), repeat=2) if v != (0, 0)]
    index = {v: i for i, v in enumerate(vecs)}

    def act(m):
        return tuple(index[((m[0][0] * x + m[0][1] * y) % 3, (m[1][0] * x + m[1][1] * y) % 3)] for x, y in vecs)

    return 8, [act(((1, 1), (0, 1))), act(((1, 0), (1, 1)))]


_CYCLES: dict[str, tuple[int, list[str]]] = {
    "S3": (3, ["(0 1)", "(0 1 2)"]),
    "S4": (4, ["(0 1)", "(0 1 2 3)"]),
    "S5": (5, ["(0 1)", "(0 1 2 3 4)"]),
    "A4": (4, ["(0 1 2)", "(0 1)(2 3)"]),
    "A5": (5, ["(0 1 2)", "(0 1 2 3 4)"]),
    "D8": (4, ["(0 1 2 3)", "(0 2)"]),
    "D12": (6, ["(0 1 2 3 4 5)", "(1 5)(2 4)"]),
    "Q8": (8, ["(0 1 3 5)(2 7 6 4)", "(0 2 3 6)(1 4 5 7)"]),
    "C2xC2": (4, ["(0 1)", "(2 3)"]),
    # stretch
    "S6": (6, ["(0 1)", "(0 1 2 3 4 5)"]),
    "A6": (6, ["(0 1 2)", "(1 2 3 4 5)"]),
    "PSL(2,7)": (7, ["(0 3)(5 6)", "(0 2 1)(3 6 4)"]),
}

REQUIRED = ("S3", "S4", "S5", "A4", "A5", "D8", "D12", "Q8", "C2xC2", "SL(2,3)")
STRETCH = ("S6", "A6", "PSL(2,7)")
EXPECTED_ORDERS = {
    "S3": 6, "S4": 24, "S5": 120, "A4": 12, "A5": 60, "D8": 8, "D12": 12, "Q8": 8,
    "C2xC2": 4, "SL(2,3)": 24, "S6": 720, "A6": 360, "PSL(2,7)": 168,
}


def catalog_names(stretch: bool = False) -> tuple[str, ...]:
    return REQUIRED + STRETCH if stretch else REQUIRED


def generator_data(name: str):
    if name == "SL(2,3)":
        return _sl23_generators()
    if name not in _CYCLES:
        raise InputError(f"unknown catalog group {name!r}; known: {', '.join(REQUIRED + STRETCH)}")
    degree, cycles = _CYCLES[name]
    return degree, [parse_cycles(c, degree) for c in cycles]


def resolve_catalog(name: str, stretch: bool = False, config: Config | None = None) -> PermGroup:
    if name not in catalog_names(stretch):
        extra = "" if stretch else " (stretch groups need --stretch)"
        raise InputError(f"unknown catalog group {name!r}; known: {', '.join(catalog_names(stretch))}{extra}")
    degree, gens = generator_data(name)
    G = PermGroup(degree, gens, config=config, name=name)
    if G.order != EXPECTED_ORDERS[name]:
        raise AssertionError(f"catalog group {name} has order {G.order}")
    return G
