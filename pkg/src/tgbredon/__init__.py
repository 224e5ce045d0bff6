"""Finite transitive groupoids, their equivariant spaces and complexes, and Bredon (co)homology."""

from ._backend import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
