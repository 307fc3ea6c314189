"""Colored Jones polynomials of iterated torus-knot cables and their asymptotics at roots of unity."""

from .errors import (
    BetaZero,
    CableJonesError,
    DivisionByZeroPoly,
    InvalidParams,
    NotDivisible,
)
from .laurent import EvalPoint, LaurentPoly, evaluate, lp_divexact, quantum_int
from .numeric import ComplexHP

__version__ = "0.1.0"
