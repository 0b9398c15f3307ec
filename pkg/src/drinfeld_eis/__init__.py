"""Eisenstein series, exponentials and Drinfeld modules of A-lattices over
F_q[T], computed in truncated Laurent series in a root of 1/T."""

from .errors import DomainError, PrecisionError, ResourceError

__version__ = "0.1.0"

__all__ = ["DomainError", "PrecisionError", "ResourceError", "__version__"]
