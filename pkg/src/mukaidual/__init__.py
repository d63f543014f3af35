"""Exact numerical checks for Brill-Noether stratifications of moduli of
sheaves on K3 surfaces and their duality under lattice reflections."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402

__all__ = ["BACKEND", "__version__"]
