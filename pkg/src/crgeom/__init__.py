"""Exact computations with real-algebraic hypersurfaces in C^{n+1}."""

__version__ = "0.1.0"

from .gaussian import GR, GaussianRational
from .geometry import Hypersurface, tangent_levi_form, tangential_signature
from .parsing import ParseError, parse
from .polyring import Point, Poly, evaluate

__all__ = [
    "__version__",
    "GR",
    "GaussianRational",
    "Hypersurface",
    "ParseError",
    "Point",
    "Poly",
    "evaluate",
    "parse",
    "tangent_levi_form",
    "tangential_signature",
]
