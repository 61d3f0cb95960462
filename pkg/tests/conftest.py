import functools

import pytest

from chainlocal.catalog import REQUIRED, STRETCH, resolve_catalog


@functools.lru_cache(maxsize=None)
def group(name):
    return resolve_catalog(name, stretch=True)


def primes_of(G, candidates=(2, 3, 5, 7)):
    return [p for p in candidates if G.order % p == 0]


def catalog_pairs(names=REQUIRED, candidates=(2, 3, 5, 7)):
    return [(n, p) for n in names for p in primes_of(group(n), candidates)]


@pytest.fixture
def get_group():
    return group


ALL_NAMES = REQUIRED + STRETCH
