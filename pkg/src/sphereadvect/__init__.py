"""Semi-Lagrangian advection of unit-sphere-valued curves."""

from ._backend import NAME as BACKEND
from .exceptions import DomainError

__version__ = "0.1.0"

__all__ = ["BACKEND", "DomainError", "__version__"]
