"""Exact computations on Cartan planes of jet spaces: integral elements,
isotropic Grassmannians, polar planes, and singularity equations of PDEs."""

from .symalg import Context, SymPoly
from .grassmann import CartanSubspace

__all__ = ["Context", "SymPoly", "CartanSubspace"]
__version__ = "0.1.0"
