"""Fast fractional parts of alpha*k for integer k, accurate to ~1e-12.

alpha is split into a double-double pair (hi, lo); the product hi*k is formed
with Dekker's TwoProduct so its rounding error is recovered exactly, and the
residual lo*k is folded back in.  For k below 2^40 the absolute phase error
stays orders of magnitude under the certification margin used by callers.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from mpmath import mpf

from .precision import NamedConstant, as_exact, materialize

_SPLIT = 134217729.0  # 2^27 + 1


def alpha_split(alpha, digits: int = 40) -> tuple[float, float]:
    """Double-double representation (hi, lo) of an exact carrier."""
    ex = alpha if isinstance(alpha, (Fraction, NamedConstant)) else as_exact(alpha)
    v, _ = materialize(ex, digits)
    hi = float(v)
    lo = float(v - mpf(hi))
    return hi, lo


def _two_prod(a: float, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = a * x
    ah = a * _SPLIT
    ah = ah - (ah - a)
    al = a - ah
    xh = x * _SPLIT
    xh = xh - (xh - x)
    xl = x - xh
    err = ((ah * xh - p) + ah * xl + al * xh) + al * xl
    return p, err


def frac_mod_one(k: np.ndarray, alpha_hi: float, alpha_lo: float,
                 shift: float = 0.0) -> np.ndarray:
    """{alpha*k + shift} in [0, 1) for an integer array k."""
    x = k.astype(np.float64)
    p, err = _two_prod(alpha_hi, x)
    y = (p - np.floor(p)) + (err + alpha_lo * x + shift)
    y = y - np.floor(y)
    return y


def dist_to_int(y: np.ndarray) -> np.ndarray:
    """||y||: distance to the nearest integer, elementwise."""
    return np.abs(y - np.round(y))
