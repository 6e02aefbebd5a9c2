"""Exact accumulation of float64 term streams.

Every finite float64 is an integer multiple of 2^-1074, so a sum of floats
is represented exactly by one big integer in units of 2^-1074.  Partial sums
merge by integer addition, which makes blockwise evaluation bit-identical to
a monolithic pass regardless of chunking or worker count; the single rounding
happens when the final integer is converted back to a float.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

_SHIFT = 1074


def exact_scaled_sum(values) -> int:
    """Sum of floats as an exact integer in units of 2^-1074."""
    total = 0
    for v in np.asarray(values, dtype=np.float64).ravel().tolist():
        if v == 0.0:
            continue
        n, d = v.as_integer_ratio()  # d is a power of two <= 2^1074
        total += n * (2 ** _SHIFT // d)
    return total


def scaled_to_float(total: int) -> float:
    """Correctly rounded float value of total * 2^-1074."""
    if total == 0:
        return 0.0
    return float(Fraction(total, 2 ** _SHIFT))


class ExactComplexSum:
    """Accumulates real and imaginary term streams exactly."""

    __slots__ = ("re", "im", "count")

    def __init__(self):
        self.re = 0
        self.im = 0
        self.count = 0

    def add(self, re_terms, im_terms) -> None:
        self.re += exact_scaled_sum(re_terms)
        self.im += exact_scaled_sum(im_terms)
        self.count += int(np.asarray(re_terms).size)

    def merge(self, other: "ExactComplexSum") -> None:
        self.re += other.re
        self.im += other.im
        self.count += other.count

    def value(self) -> complex:
        return complex(scaled_to_float(self.re), scaled_to_float(self.im))
