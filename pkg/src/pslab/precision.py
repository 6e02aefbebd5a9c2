"""Certified extended-precision real arithmetic.

Every fractional-part and power computation in the package funnels through
this module.  Values are mpmath floats carried together with a conservative
absolute error bound.  Threshold decisions either succeed with a certified
margin or escalate the working precision; PrecisionExhausted is raised when
the maximum precision cannot separate the operands.

Exact inputs (integers, fractions, decimal strings, named constants) can be
re-materialized at any precision, so escalation never loses information.
Reduction mod 1 always subtracts the rounded integer, never iterates.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
from mpmath import mpf

from .errors import ParameterRange, PrecisionExhausted

DEFAULT_DIGITS = 40
ESCALATED_DIGITS = 80
_GUARD = 10  # extra working digits beyond the certified target


def default_digits() -> int:
    """Working precision in decimal digits; PSLAB_PRECISION overrides."""
    env = os.environ.get("PSLAB_PRECISION")
    if env:
        d = int(env)
        if d < 30:
            raise ParameterRange(f"PSLAB_PRECISION={d} below the 30-digit floor")
        return d
    return DEFAULT_DIGITS


def digit_ladder(digits: Optional[int] = None) -> tuple[int, ...]:
    """Escalation ladder used by certified decisions."""
    base = digits if digits is not None else default_digits()
    top = max(2 * base, ESCALATED_DIGITS)
    return (base, top)


class NamedConstant:
    """An irrational constant that can be materialized at any precision."""

    __slots__ = ("name", "_fn")

    def __init__(self, name: str, fn: Callable[[], mpf]):
        self.name = name
        self._fn = fn

    def materialize(self, digits: int) -> mpf:
        with mpmath.workdps(digits + _GUARD):
            return +self._fn()

    def __repr__(self):
        return f"NamedConstant({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, NamedConstant) and other.name == self.name

    def __hash__(self):
        return hash(("NamedConstant", self.name))


CONSTANTS = {
    "sqrt2": NamedConstant("sqrt2", lambda: mpmath.sqrt(2)),
    "golden": NamedConstant("golden", lambda: (1 + mpmath.sqrt(5)) / 2),
    "pi": NamedConstant("pi", lambda: +mpmath.pi),
    "e": NamedConstant("e", lambda: +mpmath.e),
}
_CONSTANT_ALIASES = {
    "sqrt2": "sqrt2",
    "root2": "sqrt2",
    "golden": "golden",
    "golden_ratio": "golden",
    "phi": "golden",
    "pi": "pi",
    "e": "e",
}

ExactLike = Union[int, Fraction, str, NamedConstant]

_DECIMAL_RE = re.compile(r"^[+-]?\d+(\.\d+)?$")


def parse_constant(text: str) -> Union[NamedConstant, Fraction]:
    """Parse a named constant or a decimal literal into an exact carrier."""
    key = text.strip().lower()
    if key in _CONSTANT_ALIASES:
        return CONSTANTS[_CONSTANT_ALIASES[key]]
    if _DECIMAL_RE.match(text.strip()):
        return Fraction(text.strip())
    raise ParameterRange(f"not a known constant or decimal literal: {text!r}")


def as_exact(x) -> Union[Fraction, NamedConstant]:
    """Coerce to an exact carrier.  Floats go through repr to avoid binary noise."""
    if isinstance(x, NamedConstant):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_constant(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    raise TypeError(f"cannot treat {type(x).__name__} as an exact real")


@dataclass(frozen=True)
class PreciseReal:
    """A real number carried with a conservative absolute error bound.

    ``exact`` optionally holds a re-materializable carrier (Fraction or
    NamedConstant) so certified decisions can escalate precision.
    """

    value: mpf
    error_bound: mpf
    exact: Optional[ExactLike] = field(default=None, compare=False)

    def __float__(self) -> float:
        return float(self.value)

    def materialize(self, digits: int) -> tuple[mpf, mpf]:
        if self.exact is not None:
            return materialize(self.exact, digits)
        return self.value, self.error_bound

    def to_decimal(self, frac_digits: int = 40) -> str:
        """Fixed-point decimal: sign, integer part, '.', up to 40 fractional digits."""
        if not 1 <= frac_digits <= 40:
            raise ParameterRange("frac_digits must be in [1, 40]")
        with mpmath.workdps(frac_digits + 25):
            v = self.value
            sign = "-" if v < 0 else ""
            scaled = int(mpmath.nint(abs(v) * mpf(10) ** frac_digits))
        ip, fp = divmod(scaled, 10 ** frac_digits)
        frac = str(fp).rjust(frac_digits, "0").rstrip("0") or "0"
        return f"{sign}{ip}.{frac}"

    @classmethod
    def from_decimal(cls, text: str, digits: Optional[int] = None) -> "PreciseReal":
        text = text.strip()
        if not _DECIMAL_RE.match(text):
            raise ParameterRange(f"not a plain decimal literal: {text!r}")
        return from_exact(Fraction(text), digits)


def materialize(x: ExactLike, digits: int) -> tuple[mpf, mpf]:
    """Evaluate an exact carrier at the given precision; returns (value, abs error)."""
    with mpmath.workdps(digits + _GUARD):
        if isinstance(x, NamedConstant):
            v = x.materialize(digits)
        else:
            f = Fraction(x)
            v = mpf(f.numerator) / mpf(f.denominator)
        err = (abs(v) + 1) * mpf(10) ** (-(digits + _GUARD - 2))
        return v, err


def from_exact(x, digits: Optional[int] = None) -> PreciseReal:
    d = digits if digits is not None else default_digits()
    ex = as_exact(x)
    v, err = materialize(ex, d)
    return PreciseReal(v, err, exact=ex)


def as_precise(x, digits: Optional[int] = None) -> PreciseReal:
    """Coerce any supported number-like input to PreciseReal."""
    if isinstance(x, PreciseReal):
        return x
    if isinstance(x, mpf):
        ulp = abs(x) * mpf(2) ** (-mpmath.mp.prec)
        return PreciseReal(x, ulp + mpf(10) ** (-default_digits()))
    return from_exact(x, digits)


def _round_err(v: mpf, digits: int) -> mpf:
    # a few ulp at the working precision, stated conservatively in decimal
    return (abs(v) + 1) * mpf(10) ** (-(digits + _GUARD - 3))


def nearest_int_distance(x, digits: Optional[int] = None) -> PreciseReal:
    """Distance of x to the nearest integer; always in [0, 1/2]."""
    d = digits if digits is not None else default_digits()
    xr = as_precise(x, d)
    with mpmath.workdps(d + _GUARD):
        v, e = xr.materialize(d)
        m = mpmath.nint(v)
        dist = abs(v - m)
        if dist > mpf(1) / 2:  # nint ties can leave dist marginally above 1/2
            dist = 1 - dist
        return PreciseReal(dist, e + _round_err(dist, d), exact=None)


def reduce_mod_one(v: mpf) -> mpf:
    """x minus the nearest integer (single subtraction, O(1) error growth)."""
    return v - mpmath.nint(v)


def unit_circle_exp(x, digits: Optional[int] = None) -> tuple[PreciseReal, PreciseReal]:
    """(cos 2*pi*x, sin 2*pi*x); depends on x only through x mod 1."""
    d = digits if digits is not None else default_digits()
    xr = as_precise(x, d)
    with mpmath.workdps(d + _GUARD):
        v, e = xr.materialize(d)
        r = reduce_mod_one(v)
        ang = 2 * mpmath.pi * r
        c, s = mpmath.cos(ang), mpmath.sin(ang)
        err = 7 * e + _round_err(mpf(1), d)
        return PreciseReal(c, err), PreciseReal(s, err)


def certified_decision(make: Callable[[int], tuple[mpf, mpf]],
                       digits: Optional[int] = None,
                       witness=None,
                       what: str = "comparison") -> bool:
    """Decide sign(make(digits).value) with certainty, escalating precision.

    ``make(d)`` returns (value, abs_error) evaluated at d digits.  Returns
    True when value > 0 certifiably, False when value < 0 certifiably.
    """
    for d in digit_ladder(digits):
        with mpmath.workdps(d + _GUARD):
            v, e = make(d)
            if v > e:
                return True
            if v < -e:
                return False
    raise PrecisionExhausted(
        f"{what} unresolved at {digit_ladder(digits)[-1]} digits", witness=witness)


def _floor_with_certainty(v: mpf, e: mpf) -> Optional[int]:
    f = mpmath.floor(v)
    frac = v - f
    if frac > e and (1 - frac) > e:
        return int(f)
    return None


def power_floor(n: int, c, digits: Optional[int] = None) -> int:
    """Integral part of n^c, certified against off-by-one at the boundary.

    Rational exponents with small denominator are decided by exact integer
    arithmetic (k <= n^(p/q) iff k^q <= n^p); everything else escalates
    through the precision ladder and raises PrecisionExhausted if n^c stays
    ambiguous against an integer.
    """
    if n < 1:
        raise ParameterRange("power_floor requires n >= 1")
    if n == 1:
        return 1
    ce = as_exact(c) if not isinstance(c, PreciseReal) else c
    if isinstance(ce, Fraction):
        if ce <= 0:
            raise ParameterRange("power_floor requires c > 0")
        if ce.denominator == 1:
            return n ** ce.numerator
        if ce.denominator <= 64:
            return _floor_rational_pow(n, ce)
    for d in digit_ladder(digits):
        with mpmath.workdps(d + _GUARD):
            if isinstance(ce, PreciseReal):
                cv, cerr = ce.materialize(d)
            else:
                cv, cerr = materialize(ce, d)
            v = mpf(n) ** cv
            err = v * (mpmath.log(n) * cerr) + _round_err(v, d)
            f = _floor_with_certainty(v, err)
            if f is not None:
                return f
    raise PrecisionExhausted(f"floor of {n}^{c} ambiguous against an integer",
                             witness=(n, c))


def _floor_rational_pow(n: int, e: Fraction) -> int:
    """floor(n^(p/q)) by exact integer comparison."""
    p, q = e.numerator, e.denominator
    k = int(float(n) ** float(e))
    while (k + 1) ** q <= n ** p:
        k += 1
    while k > 0 and k ** q > n ** p:
        k -= 1
    return k


def floor_scaled_power(x: int, expo: Fraction, scale: Fraction = Fraction(1)) -> int:
    """Exact floor(scale * x^expo) for x >= 1, expo > 0, scale > 0.

    Pure integer arithmetic: k <= (sn/sd) x^(p/r)  iff  (k*sd)^r <= sn^r * x^p.
    """
    if x < 1 or expo <= 0 or scale <= 0:
        raise ParameterRange("floor_scaled_power requires x >= 1, expo > 0, scale > 0")
    p, r = expo.numerator, expo.denominator
    sn, sd = scale.numerator, scale.denominator
    rhs = sn ** r * x ** p
    k = max(int(float(scale) * float(x) ** float(expo)), 0)
    while ((k + 1) * sd) ** r <= rhs:
        k += 1
    while k > 0 and (k * sd) ** r > rhs:
        k -= 1
    return k


def ceil_scaled_power(x: int, expo: Fraction, scale: Fraction = Fraction(1)) -> int:
    """Exact ceil(scale * x^expo), companion of floor_scaled_power."""
    k = floor_scaled_power(x, expo, scale)
    p, r = expo.numerator, expo.denominator
    sn, sd = scale.numerator, scale.denominator
    exact_hit = (k * sd) ** r == sn ** r * x ** p
    return k if exact_hit else k + 1
