"""Exact symplectic-obstruction toolkit for nilpotent Lie algebras."""

from nilpo.exactlin import SparseMatrix, SubspaceBasis
from nilpo.liealg import LieAlgebra, NotNilpotent, FormNotClosed
from nilpo.exterior import KForm

__all__ = [
    "SparseMatrix",
    "SubspaceBasis",
    "LieAlgebra",
    "KForm",
    "NotNilpotent",
    "FormNotClosed",
]

__version__ = "0.1.0"
