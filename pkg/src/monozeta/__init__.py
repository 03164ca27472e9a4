"""Monodromy zeta functions at infinity and along fibers of polynomial maps."""

from .errors import GeometryError, HypothesisWarning, MonozetaError, ParseError, PreconditionError
from .polyio import Polynomial, parse_polynomial, render
from .zetacore import ZetaFunction, SingularDatum
from .cizeta import PolyMap

__all__ = [
    "GeometryError", "HypothesisWarning", "MonozetaError", "ParseError", "PreconditionError",
    "Polynomial", "parse_polynomial", "render", "ZetaFunction", "SingularDatum", "PolyMap",
]
