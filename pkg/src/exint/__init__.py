"""Exact certification toolkit for the boundary-driven XXX chain.

Builds the Lax operator, the block R-matrix of the infinite-dimensional
auxiliary space, monodromy and transfer matrices, the steady state of the
boundary-driven chain and its conserved charges, all in exact Gaussian
rational arithmetic, and checks the identities they satisfy.
"""
from .errors import ExintError
from .report import EMPIRICAL, PROVEN, Report
from .scalar import Scalar, format_scalar, parse_scalar
from .spin import SpinMatrix

__version__ = "0.1.0"

__all__ = ["EMPIRICAL", "ExintError", "PROVEN", "Report", "Scalar", "SpinMatrix", "__version__",
           "format_scalar", "parse_scalar"]
