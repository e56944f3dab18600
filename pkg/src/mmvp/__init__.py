"""Exact series and closed-form solutions of the reduced thermophoretic motion equation
by a modified variation-of-parameters scheme."""
from .exprcore import ContextError, ExpPoly, QuadCoeff
from .vop import ProblemSpec, SeriesSolution, run_recursion

__all__ = ["ContextError", "ExpPoly", "QuadCoeff", "ProblemSpec", "SeriesSolution",
           "run_recursion"]
__version__ = "0.1.0"
