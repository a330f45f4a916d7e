"""Elliptic solutions of the associative Yang-Baxter equation.

Two independent routes to the same tensor-valued function r(v; x1, x2):
a closed formula in Kronecker elliptic functions (:mod:`ellaybe.closed_form`)
and a residue/evaluation construction from theta-function sections
(:mod:`ellaybe.geometric`).  :mod:`ellaybe.verifier` checks the functional
identities numerically.
"""
from .closed_form import SolutionParams, closed_form_evaluator, laurent_expand, r_elliptic
from .errors import (DegeneracyError, EllAYBEError, ParameterError, PoleError, PrecisionError,
                     SelectionError)
from .geometric import construction_evaluator, r_from_construction

__version__ = "0.1.0"

__all__ = [
    "SolutionParams", "closed_form_evaluator", "laurent_expand", "r_elliptic",
    "construction_evaluator", "r_from_construction",
    "EllAYBEError", "ParameterError", "PoleError", "PrecisionError", "DegeneracyError",
    "SelectionError",
]
