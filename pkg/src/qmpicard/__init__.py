"""Quaternionic Shimura-curve data: orders, polarizations, periods and theta divisors."""

from .errors import QMError
from .quaternion import (
    QuaternionAlgebra,
    QuaternionElement,
    compute_invariants,
    conjugate,
    hilbert_symbol,
    multiply,
    reduced_norm,
    reduced_trace,
)

__all__ = [
    "QMError",
    "QuaternionAlgebra",
    "QuaternionElement",
    "compute_invariants",
    "conjugate",
    "hilbert_symbol",
    "multiply",
    "reduced_norm",
    "reduced_trace",
]
