"""Spectral triples on quantum SU(2) and the Podles sphere, computed exactly on truncation windows."""

from .algebra import AlgebraElement, LaurentPoly, Monomial, generators, parse_element
from .config import RunConfig, load_config, parse_config
from .podles import SphereElement, SphereParams
from .scalars import Surd, sqrt
from .truncation import IntWindow, NatWindow, SumWindow, TruncatedOperator, TruncationWindow

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "LaurentPoly", "Monomial", "generators", "parse_element",
    "RunConfig", "load_config", "parse_config",
    "SphereElement", "SphereParams",
    "Surd", "sqrt",
    "IntWindow", "NatWindow", "SumWindow", "TruncatedOperator", "TruncationWindow",
]
