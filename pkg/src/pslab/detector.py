"""One-sided trigonometric approximants to the interval indicator mod 1.

chi_xi(x) is 1 when ||x|| < xi and 0 otherwise.  The majorant/minorant pair
is the Selberg extremal construction for [-xi, xi]: write the indicator as
2*xi + psi(x - xi) - psi(x + xi) with the sawtooth psi(t) = {t} - 1/2, then
replace psi by Vaaler's degree-K polynomial and absorb its pointwise error
(at most Fejer_{K+1}(x)/(2K+2)) by adding or subtracting Fejer-kernel terms.
The resulting Fourier coefficients are closed-form, with M = K+1, t = k/M:

    taper(t)  = pi*t*(1-t)*cot(pi*t) + t          (Vaaler)
    c_k(+/-)  = +/- taper(t)*sin(2*pi*k*xi)/(pi*k) + (1-t)*cos(2*pi*k*xi)/M

stored in the convention  majorant = q0 + sum c_k e(kx),
                          minorant = q0' - sum c_k e(kx),
with constant terms q0 = 2*xi + 1/M and q0' = 2*xi - 1/M.

Construction never clamps: if a computed coefficient ever exceeded the
contractual cap min(2*xi + 1/(K+1), 3/(2|k|)) the build would fail loudly,
since a clamped coefficient would silently break the sandwich.

For xi > 1/2 the indicator is identically 1 and the pair degenerates to
constants; that branch exists because the Delta scale exceeds 1/2 at small X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpf

from .errors import ParameterRange, PrecisionExhausted
from .precision import (
    PreciseReal,
    as_precise,
    certified_decision,
    default_digits,
    nearest_int_distance,
)

MINORANT = "minorant"
MAJORANT = "majorant"

_cache: dict = {}


@dataclass(frozen=True)
class ApproximantPolynomial:
    """A one-sided degree-K approximant to chi_xi.

    ``coeffs`` holds c_k for k = 1..K (the polynomial is real and even, so
    c_{-k} = c_k); ``coeffs_mp`` are the same values at working precision.
    """

    xi: mpf
    K: int
    side: str
    constant_term: mpf
    coeffs: np.ndarray
    coeffs_mp: tuple = field(repr=False, default=())

    def coefficient(self, k: int) -> complex:
        if k == 0 or abs(k) > self.K:
            raise ParameterRange(f"k={k} outside [-K,-1] u [1,K]")
        return complex(float(self.coeffs[abs(k) - 1]), 0.0)

    def coefficient_cap(self, k: int) -> float:
        return min(2 * float(self.xi) + 1.0 / (self.K + 1), 1.5 / abs(k))


def indicator(xi, x, digits: Optional[int] = None) -> int:
    """1 iff ||x|| < xi, decided with certainty (raises at the exact boundary)."""
    xi_p = as_precise(xi, digits)
    if not 0 < float(xi_p.value) < 1:
        raise ParameterRange("xi must lie in (0, 1)")

    def margin(d):
        xv, xe = xi_p.materialize(d)
        dist = nearest_int_distance(x, d)
        return xv - dist.value, xe + dist.error_bound

    return 1 if certified_decision(margin, digits, witness=(xi, x),
                                   what="indicator boundary") else 0


def _vaaler_taper(t: mpf) -> mpf:
    return mpmath.pi * t * (1 - t) * mpmath.cot(mpmath.pi * t) + t


def build_approximant(xi, K: int, side: str,
                      digits: Optional[int] = None) -> ApproximantPolynomial:
    """Construct (and cache) the degree-K majorant or minorant for chi_xi."""
    if side not in (MINORANT, MAJORANT):
        raise ParameterRange(f"side must be {MINORANT!r} or {MAJORANT!r}")
    if K < 1:
        raise ParameterRange("K must be a positive integer")
    d = digits if digits is not None else default_digits()
    xi_p = as_precise(xi, d)
    key = (mpmath.nstr(xi_p.value, 30), K, side, d)
    hit = _cache.get(key)
    if hit is not None:
        return hit

    with mpmath.workdps(d + 10):
        xv = xi_p.value
        if not 0 < xv < 1:
            raise ParameterRange(f"xi={float(xv)} outside (0, 1)")
        M = K + 1
        sign = 1 if side == MAJORANT else -1
        const = 2 * xv + sign * mpf(1) / M
        if xv == mpf(1) / 2:
            raise ParameterRange("xi = 1/2 admits no sandwich with the "
                                 "contractual constant terms")
        if xv > mpf(1) / 2:
            # indicator is identically 1; constants suffice, but only while
            # the forced minorant mean stays at or below 1
            if side == MINORANT and const > 1:
                raise ParameterRange(
                    f"xi={float(xv)} > 1/2 with K={K}: minorant mean exceeds 1")
            coeffs_mp = tuple(mpf(0) for _ in range(K))
        else:
            coeffs_mp = []
            for k in range(1, K + 1):
                t = mpf(k) / M
                ck = (sign * (1 - t) * mpmath.cos(2 * mpmath.pi * k * xv) / M
                      + _vaaler_taper(t) * mpmath.sin(2 * mpmath.pi * k * xv)
                      / (mpmath.pi * k))
                if side == MINORANT:
                    ck = -ck  # stored so that minorant subtracts its sum
                coeffs_mp.append(ck)
            coeffs_mp = tuple(coeffs_mp)
        # live contract check; a violation here means the construction is
        # wrong, and clamping would silently break the sandwich
        cap_flat = 2 * xv + mpf(1) / M
        for k, ck in enumerate(coeffs_mp, start=1):
            cap = min(cap_flat, mpf(3) / (2 * k))
            if abs(ck) > cap * (1 + mpf(10) ** (-(d - 5))):
                raise AssertionError(
                    f"coefficient bound violated at k={k}: |{float(ck)}| > {float(cap)}")
        poly = ApproximantPolynomial(
            xi=+xv, K=K, side=side, constant_term=+const,
            coeffs=np.array([float(c) for c in coeffs_mp]),
            coeffs_mp=coeffs_mp)
    _cache[key] = poly
    return poly


def eval_approximant(poly: ApproximantPolynomial, x,
                     digits: Optional[int] = None) -> PreciseReal:
    """Evaluate at a single point at working precision.

    The complex exponential sum is formed as written, its imaginary residue
    is checked below 1e-20, and the real part is returned.
    """
    d = digits if digits is not None else default_digits()
    xp = as_precise(x, d)
    sign = 1 if poly.side == MAJORANT else -1
    with mpmath.workdps(d + 10):
        xv, xe = xp.materialize(d)
        r = xv - mpmath.nint(xv)
        total = mpmath.mpc(0)
        for k in range(1, poly.K + 1):
            e_k = mpmath.expjpi(2 * k * r)
            total += poly.coeffs_mp[k - 1] * (e_k + mpmath.conj(e_k))
        value = poly.constant_term + sign * total
        if abs(value.imag) > mpf(10) ** (-20):
            raise PrecisionExhausted(
                f"imaginary residue {float(value.imag)} above 1e-20")
        deriv = sum(2 * mpmath.pi * k * abs(c) for k, c in
                    enumerate(poly.coeffs_mp, start=1))
        err = 2 * deriv * xe + (abs(value.real) + 1) * mpf(10) ** (-(d + 4))
        return PreciseReal(+value.real, +err)


def evaluate_many(poly: ApproximantPolynomial, xs: np.ndarray,
                  chunk_elems: int = 1 << 24) -> np.ndarray:
    """float64 batch evaluation via the real cosine form (chunked)."""
    xs = np.asarray(xs, dtype=np.float64).ravel()
    sign = 1.0 if poly.side == MAJORANT else -1.0
    acc = np.full(xs.shape, float(poly.constant_term))
    if poly.K <= 0 or not poly.coeffs.any():
        return acc
    k = np.arange(1, poly.K + 1, dtype=np.float64)
    step = max(chunk_elems // poly.K, 1)
    for i in range(0, xs.size, step):
        block = xs[i: i + step]
        acc[i: i + step] += sign * 2.0 * (
            np.cos(2.0 * np.pi * np.outer(block, k)) @ poly.coeffs)
    return acc


def evaluate_equispaced(poly: ApproximantPolynomial, n: int) -> np.ndarray:
    """Values at x = j/n for j = 0..n-1, via the inverse real FFT."""
    if n <= 2 * poly.K:
        raise ParameterRange("need n > 2K to alias-free sample a degree-K polynomial")
    sign = 1.0 if poly.side == MAJORANT else -1.0
    spec = np.zeros(n // 2 + 1, dtype=np.complex128)
    spec[0] = float(poly.constant_term)
    spec[1: poly.K + 1] = sign * poly.coeffs
    return np.fft.irfft(spec, n) * n


def detector_pair(xi, K: int, digits: Optional[int] = None):
    """(minorant, majorant) for one scale."""
    return (build_approximant(xi, K, MINORANT, digits),
            build_approximant(xi, K, MAJORANT, digits))


def product_bounds(x, y, delta_pair, small_pair,
                   digits: Optional[int] = None) -> tuple[PreciseReal, PreciseReal]:
    """Two-sided bounds on chi_Delta(x) * chi_delta(y) at a point.

    lower = Am*Bp + Ap*Bm - Ap*Bp and upper = Ap*Bp, where (Am, Ap) evaluate
    the Delta pair at x and (Bm, Bp) the delta pair at y.  Any valid sandwich
    pairs make lower <= chi*chi <= upper pointwise.
    """
    am, ap = delta_pair
    bm, bp = small_pair
    d = digits if digits is not None else default_digits()
    with mpmath.workdps(d + 10):
        Am, Ap = eval_approximant(am, x, d), eval_approximant(ap, x, d)
        Bm, Bp = eval_approximant(bm, y, d), eval_approximant(bp, y, d)
        lower_v = Am.value * Bp.value + Ap.value * Bm.value - Ap.value * Bp.value
        upper_v = Ap.value * Bp.value
        scale = max(abs(Am.value), abs(Ap.value), 1) * max(abs(Bm.value), abs(Bp.value), 1)
        err = scale * (Am.error_bound + Ap.error_bound + Bm.error_bound + Bp.error_bound)
        return PreciseReal(+lower_v, +err), PreciseReal(+upper_v, +err)


def product_bounds_grid(xs: np.ndarray, ys: np.ndarray, delta_pair, small_pair):
    """(lower, upper) arrays of shape (len(xs), len(ys)) in float64."""
    am, ap = delta_pair
    bm, bp = small_pair
    Am, Ap = evaluate_many(am, xs), evaluate_many(ap, xs)
    Bm, Bp = evaluate_many(bm, ys), evaluate_many(bp, ys)
    lower = np.outer(Am, Bp) + np.outer(Ap, Bm) - np.outer(Ap, Bp)
    upper = np.outer(Ap, Bp)
    return lower, upper
