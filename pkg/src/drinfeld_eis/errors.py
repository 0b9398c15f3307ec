"""Exception types shared by every module.

The CLI maps each of them to a fixed exit code, so library code should raise
the most specific one instead of a bare ``ValueError``.
"""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation (zero polynomial,
    constant level, non-unimodular matrix, ...)."""


class PrecisionError(ArithmeticError):
    """The answer cannot be decided at the precision carried by the inputs."""


class ResourceError(RuntimeError):
    """A configured size cap (degree bound, enumeration size) would be exceeded."""
