"""q-averages of the 0-logarithm at torsion points of real elliptic curves.

The subpackages are layered: ``arith`` (cyclotomic and multiprecision
helpers), ``curve`` and ``families`` (exact curve arithmetic), ``periods``,
``zerolog`` and ``eisenstein`` (numerics and exact q-expansions),
``recognize`` and ``verify`` (rational recognition and the table check).
"""
from .arith import DEFAULT_PREC, CycloElem
from .curve import CurveModel, CurvePoint
from .errors import QAverageError
from .families import family_curve
from .periods import PeriodData, period_lattice
from .recognize import recognize_rational
from .verify import compute_R, run_all, verify_row
from .zerolog import d0, d0_q_average

__all__ = [
    "DEFAULT_PREC",
    "CurveModel",
    "CurvePoint",
    "CycloElem",
    "PeriodData",
    "QAverageError",
    "compute_R",
    "d0",
    "d0_q_average",
    "family_curve",
    "period_lattice",
    "recognize_rational",
    "run_all",
    "verify_row",
]
__version__ = "0.1.0"
