"""Exact-arithmetic toolkit for quantum sl2 at an odd root of unity.

Everything is computed over Q(zeta_ell) with arbitrary-precision rational
coefficients; there is no floating point anywhere in the library.
"""

from tiltlab.cyclotomic import CycloField, CyclotomicScalar
from tiltlab.linalg import ExactMatrix

__all__ = ["CycloField", "CyclotomicScalar", "ExactMatrix"]

__version__ = "0.1.0"
