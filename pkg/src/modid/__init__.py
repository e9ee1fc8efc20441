"""High-precision special functions and numerical checks of modular-type
transformation formulas for divisor and sum-of-squares series."""
from .precision import (HEURISTIC, RIGOROUS, ConvergenceError, DomainError,
                        PrecisionContext, PrecisionError, ValueWithError, ctx_new,
                        sum_series)

__all__ = [
    "HEURISTIC", "RIGOROUS", "ConvergenceError", "DomainError", "PrecisionContext",
    "PrecisionError", "ValueWithError", "ctx_new", "sum_series",
]
