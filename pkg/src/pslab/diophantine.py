"""Continued-fraction convergents and the admissible X-window for a denominator.

Partial quotients are certified by running the continued-fraction recursion
on an exact rational enclosure [lo, hi] of alpha: a quotient is accepted only
while floor(lo) == floor(hi).  Named constants re-materialize at higher
precision whenever the enclosure becomes too loose; decimal input cannot be
refined, so running out of certified quotients raises RationalInput.

The X-window endpoints are certified by exact integer power comparisons
(X^(p/r) <= q iff X^p <= q^r), so no floating-point rounding can shift them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath
from mpmath import mpf

from .errors import ParameterRange, PrecisionExhausted, RangeTooLarge, RationalInput
from .precision import (
    NamedConstant,
    PreciseReal,
    as_exact,
    ceil_scaled_power,
    digit_ladder,
    floor_scaled_power,
    materialize,
)

AlphaLike = Union[str, int, float, Fraction, NamedConstant]

_MAX_CF_DIGITS = 4000


@dataclass(frozen=True)
class RationalApprox:
    """A convergent a/q of alpha together with the approximation error."""

    a: int
    q: int
    error: PreciseReal

    def __post_init__(self):
        if self.q < 1:
            raise ParameterRange("denominator must be positive")
        if math.gcd(self.a, self.q) != 1:
            raise ParameterRange(f"gcd({self.a}, {self.q}) != 1")


@dataclass(frozen=True)
class XWindow:
    """Range of X for which X^(2*theta+10*eta) <= q <= X^(1-theta-10*eta)."""

    lo: int
    hi: int
    q: int
    theta: Fraction
    eta: Fraction


def _mpf_to_fraction(v: mpf) -> Fraction:
    sign, man, exp, _ = v._mpf_
    man, exp = int(man), int(exp)  # gmpy-backed mpmath hands back mpz here
    if man == 0:
        return Fraction(0)
    val = Fraction(man) * Fraction(2) ** exp
    return -val if sign else val


def _enclosure(alpha: AlphaLike, digits: int) -> tuple[Fraction, Fraction, bool]:
    """Exact rational enclosure of alpha; the flag says whether it can be refined."""
    ex = as_exact(alpha)
    if isinstance(ex, NamedConstant):
        v, err = materialize(ex, digits)
        vf = _mpf_to_fraction(v)
        w = Fraction(10) ** (-(digits + 5))
        return vf - w, vf + w, True
    if isinstance(alpha, str) and "." in alpha:
        # a decimal literal is a truncation: alpha is only pinned to +- one
        # unit in the last written place
        frac_digits = len(alpha.strip().split(".")[1])
        w = Fraction(10) ** (-frac_digits)
        return ex - w, ex + w, False
    return ex, ex, False


def _cf_expand(lo: Fraction, hi: Fraction, max_q: Optional[int], count: Optional[int]):
    """Certified CF recursion on an interval.

    Returns (convergents, exhausted) where exhausted means the enclosure ran
    out of agreement (or the value went rational) before the request was met.
    """
    out: list[tuple[int, int]] = []
    h_prev, k_prev = 1, 0
    h_cur, k_cur = None, None
    x_lo, x_hi = lo, hi
    while True:
        a_lo = x_lo.numerator // x_lo.denominator
        a_hi = x_hi.numerator // x_hi.denominator
        if a_lo != a_hi:
            return out, True
        a = a_lo
        if h_cur is None:
            h_cur, k_cur = a, 1
        else:
            h_prev, h_cur = h_cur, a * h_cur + h_prev
            k_prev, k_cur = k_cur, a * k_cur + k_prev
        if max_q is not None and k_cur > max_q:
            return out, False
        if out and out[-1][1] == k_cur:
            out.pop()  # same denominator: the newer convergent supersedes
        out.append((h_cur, k_cur))
        if count is not None and len(out) >= count:
            return out, False
        f_lo, f_hi = x_lo - a, x_hi - a
        if f_lo <= 0:
            return out, True  # exact rational reached (or enclosure touches it)
        x_lo, x_hi = 1 / f_hi, 1 / f_lo


def convergents(alpha: AlphaLike,
                max_q: Optional[int] = None,
                count: Optional[int] = None,
                digits: Optional[int] = None) -> list[RationalApprox]:
    """All continued-fraction convergents of alpha with q <= max_q, increasing q.

    Either ``max_q`` or ``count`` must be given.  When two consecutive
    convergents share a denominator (possible only at q=1) the better one is
    kept, so denominators are strictly increasing.
    """
    if max_q is None and count is None:
        raise ParameterRange("need max_q or count")
    if max_q is not None and max_q < 1:
        return []
    ex = as_exact(alpha)
    refinable = isinstance(ex, NamedConstant)
    d = digit_ladder(digits)[0]
    while True:
        lo, hi, can_refine = _enclosure(alpha, d)
        pairs, exhausted = _cf_expand(lo, hi, max_q, count)
        if not exhausted:
            break
        if not (refinable and can_refine):
            raise RationalInput(
                "decimal expansion terminated before the requested convergents "
                "could be certified")
        d *= 2
        if d > _MAX_CF_DIGITS:
            raise PrecisionExhausted("continued fraction needs more than "
                                     f"{_MAX_CF_DIGITS} digits of alpha")
    lo, hi, _ = _enclosure(alpha, d)
    out = []
    for a, q in pairs:
        err_lo = abs(lo - Fraction(a, q))
        err_hi = abs(hi - Fraction(a, q))
        worst = max(err_lo, err_hi)
        if worst >= Fraction(1, q * q):
            raise PrecisionExhausted(
                f"cannot certify |alpha - {a}/{q}| < {q}^-2", witness=(a, q))
        mid = (err_lo + err_hi) / 2
        width = (err_hi - err_lo if err_hi >= err_lo else err_lo - err_hi)
        with mpmath.workdps(d):
            err = PreciseReal(mpf(mid.numerator) / mpf(mid.denominator),
                              mpf((width + Fraction(10) ** (-d)).numerator)
                              / mpf((width + Fraction(10) ** (-d)).denominator))
        out.append(RationalApprox(a, q, err))
    return out


def verify_dirichlet(alpha: AlphaLike, a: int, q: int,
                     digits: Optional[int] = None) -> bool:
    """True iff gcd(a,q)=1 and |alpha - a/q| < q^-2, decided with certainty."""
    if q < 1:
        raise ParameterRange("q must be positive")
    if math.gcd(a, q) != 1:
        return False
    target = Fraction(1, q * q)
    ex = as_exact(alpha)
    refinable = isinstance(ex, NamedConstant)
    for d in digit_ladder(digits):
        lo, hi, _ = _enclosure(alpha, d)
        err_max = max(abs(lo - Fraction(a, q)), abs(hi - Fraction(a, q)))
        err_min = min(abs(lo - Fraction(a, q)), abs(hi - Fraction(a, q)))
        if lo <= Fraction(a, q) <= hi:
            err_min = Fraction(0)
        if err_max < target:
            return True
        if err_min >= target:
            return False
        if not refinable:
            break
    raise PrecisionExhausted(
        f"|alpha - {a}/{q}| vs {q}^-2 unresolved", witness=(a, q))


def x_window(q: int, theta, eta) -> Optional[XWindow]:
    """Integers X with X^(2t+10e) <= q <= X^(1-t-10e), certified endpoints.

    Returns None when the window is empty.  Endpoints come from exact integer
    power comparisons, then are re-checked against the defining inequalities
    (floor/ceil of inexact powers can be off by one; exact re-checks cannot).
    """
    if q < 1:
        raise ParameterRange("q must be positive")
    t, e = Fraction(as_exact(theta)), Fraction(as_exact(eta))
    if not (0 < t < Fraction(1, 10)):
        raise ParameterRange(f"theta={t} outside (0, 1/10)")
    if e <= 0:
        raise ParameterRange("eta must be positive")
    e_low = 2 * t + 10 * e
    e_high = 1 - t - 10 * e
    if not e_low < e_high:
        raise ParameterRange("need 2*theta+10*eta < 1-theta-10*eta")

    # hi = floor(q^(1/e_low)); guard against absurd magnitudes first
    inv_low = 1 / e_low
    if float(inv_low) * math.log10(max(q, 2)) > 60:
        raise RangeTooLarge(f"upper endpoint q^{float(inv_low):.3g} exceeds 10^60")
    hi = floor_scaled_power(q, inv_low)
    lo = max(ceil_scaled_power(q, 1 / e_high), 1)

    q_r1 = q ** e_low.denominator
    q_r2 = q ** e_high.denominator

    def le_low(x: int) -> bool:  # x^e_low <= q, exactly
        return x ** e_low.numerator <= q_r1

    def ge_high(x: int) -> bool:  # x^e_high >= q, exactly
        return x ** e_high.numerator >= q_r2

    # nudge by one where the float inversion rounded wrongly
    while hi >= 1 and not le_low(hi):
        hi -= 1
    while le_low(hi + 1):
        hi += 1
    while lo > 1 and ge_high(lo - 1):
        lo -= 1
    while not ge_high(lo):
        lo += 1
    if lo > hi:
        return None
    # re-check the defining inequalities at both endpoints
    assert le_low(lo) and le_low(hi) and ge_high(lo) and ge_high(hi)
    return XWindow(lo=lo, hi=hi, q=q, theta=t, eta=e)


def select_denominator(alpha: AlphaLike, X: int, theta, eta) -> Optional[RationalApprox]:
    """A convergent denominator q admissible for X, or None.

    Admissible means X^(2t+10e) <= q <= X^(1-t-10e).  Among admissible
    convergents the one with q closest to sqrt(X) is returned; that choice
    balances the two endpoints of the linear-sum bound.
    """
    t, e = Fraction(as_exact(theta)), Fraction(as_exact(eta))
    q_min = ceil_scaled_power(X, 2 * t + 10 * e)
    q_max = floor_scaled_power(X, 1 - t - 10 * e)
    if q_min > q_max:
        return None
    cands = [r for r in convergents(alpha, max_q=q_max) if r.q >= q_min]
    if not cands:
        return None
    root = math.isqrt(X)
    return min(cands, key=lambda r: abs(r.q - root))
