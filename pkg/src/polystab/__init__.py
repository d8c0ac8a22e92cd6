"""Exact computations with polynomial stability conditions.

Phases are germs of continuous arguments of complex polynomials in m,
ordered by their eventual behaviour as m grows; everything is decided
with rational arithmetic.
"""

from .errors import CapExceeded, ModelMismatch, PolystabError, UndecidedAtPrecision, ValidationError
from .phasecore import CPoly, GaussianRational, Ordering, PhaseGerm, cmp_phase, shift_phase, stabilization_bound

__all__ = [
    "CPoly",
    "CapExceeded",
    "GaussianRational",
    "ModelMismatch",
    "Ordering",
    "PhaseGerm",
    "PolystabError",
    "UndecidedAtPrecision",
    "ValidationError",
    "cmp_phase",
    "shift_phase",
    "stabilization_bound",
]

__version__ = "0.1.0"
