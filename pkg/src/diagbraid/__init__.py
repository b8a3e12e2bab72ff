"""diagbraid: exact computation with braided vector spaces of diagonal type."""

from .scalars import FieldSpec, Scalar, UnitOrder, scalar_parse, render_scalar
from .freealg import BraidingSpec, FreeElement

__all__ = [
    "FieldSpec",
    "Scalar",
    "UnitOrder",
    "scalar_parse",
    "render_scalar",
    "BraidingSpec",
    "FreeElement",
]

__version__ = "0.1.0"
