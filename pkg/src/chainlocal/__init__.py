"""Exact computations with blocks of finite groups along chains of p-subgroups.

Permutation groups, character tables, p-blocks, the chain poset and its
involution, normalising triples, and the alternating chain sums of integer
functions on (subgroup, block) pairs.
"""

from .blocks import Block, ModularSystem, block_partition, brauer_correspondent, modular_system
from .catalog import REQUIRED, STRETCH, resolve_catalog
from .chains import enumerate_chain_orbits, enumerate_p_subgroups
from .chartab import character_table
from .errors import (
    ChainLocalError,
    DomainError,
    FilterInvarianceError,
    InputError,
    InvariantError,
    ResourceError,
)
from .localfn import BlockFunction, alternating_chain_sum, verify_block_chain_local
from .permgroup import Config, PermGroup, Subgroup

__version__ = "0.1.0"

__all__ = [
    "Block", "BlockFunction", "ChainLocalError", "Config", "DomainError", "FilterInvarianceError",
    "InputError", "InvariantError", "ModularSystem", "PermGroup", "REQUIRED", "ResourceError", "STRETCH",
    "Subgroup", "alternating_chain_sum", "block_partition", "brauer_correspondent", "character_table",
    "enumerate_chain_orbits", "enumerate_p_subgroups", "modular_system", "resolve_catalog",
    "verify_block_chain_local",
]
