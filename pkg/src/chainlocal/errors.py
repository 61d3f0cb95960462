"""Exception hierarchy shared by every module."""


class ChainLocalError(Exception):
    pass


class InputError(ChainLocalError, ValueError):
    """Malformed user input: bad permutation, unknown catalog name, non-prime p."""


class DomainError(ChainLocalError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ResourceError(ChainLocalError, RuntimeError):
    """A configured size guard was exceeded."""


class InvariantError(ChainLocalError, AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class FilterInvarianceError(ChainLocalError, RuntimeError):
    """A triple filter is not stable under the chain involution."""
