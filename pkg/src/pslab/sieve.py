"""Prime enumeration and Piatetski-Shapiro membership machinery.

A prime p is a represented value [n^c] exactly when the interval
[p^gamma, (p+1)^gamma) contains an integer (gamma = 1/c).  For rational c
with a small denominator this is decided by exact integer arithmetic
(n >= p^(q/p') iff n^p' >= p^q), so membership below 2^40 never depends on
floating point.  The thin set

    A = { a : X/2 <= a < X, ||alpha*a + beta|| < Delta, ||a^gamma + 2*delta|| < delta }

is materialized by a vectorized float64 filter whose undecided boundary band
(|distance - threshold| below a safety margin) is re-decided by certified
high-precision evaluation, so the result agrees with a 30-digit oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

import mpmath
import numpy as np
from mpmath import mpf

from .errors import ParameterRange, RangeTooLarge, ValidationError
from .fastfrac import alpha_split, dist_to_int, frac_mod_one
from .precision import (
    NamedConstant,
    PreciseReal,
    as_exact,
    ceil_scaled_power,
    certified_decision,
    default_digits,
    floor_scaled_power,
    materialize,
)

logger = logging.getLogger(__name__)

SEGMENT_SIZE = 1 << 20
MAX_SIEVE_BOUND = 1 << 40

# float64 distances are good to ~1e-8 absolute at the magnitudes we sieve;
# anything within this band of a threshold is re-decided at high precision
FLOAT_MARGIN = 1e-6

AlphaLike = Union[str, Fraction, NamedConstant]


# ---------------------------------------------------------------------------
# configuration and derived scales


@dataclass(frozen=True)
class ExperimentConfig:
    """Free parameters of one experiment run."""

    alpha: Union[Fraction, NamedConstant]
    beta: Fraction
    c: Fraction
    theta: Fraction
    eta: Fraction
    epsilon: Fraction
    X: int
    seed: int = 0

    def __post_init__(self):
        if not (1 < self.c < Fraction(9, 8)):
            raise ValidationError(f"c={self.c} outside (1, 9/8)",
                                  constraint="1 < c < 9/8")
        theta_cap = (9 / self.c - 8) / 10
        if not (0 < self.theta < theta_cap):
            raise ValidationError(
                f"theta={float(self.theta)} exceeds (9/c-8)/10 = "
                f"{float(theta_cap):.6g} for c={float(self.c)}",
                constraint="0 < theta < (9/c-8)/10")
        if self.eta <= 0:
            raise ValidationError("eta must be positive", constraint="eta > 0")
        if self.epsilon <= 0:
            raise ValidationError("epsilon must be positive", constraint="epsilon > 0")
        if self.X < 4:
            raise ValidationError("X must be at least 4", constraint="X >= 4")
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed must fit in 64 bits", constraint="0 <= seed < 2^64")

    @property
    def gamma(self) -> Fraction:
        return 1 / self.c


def experiment_config(alpha="sqrt2", beta=0, c="1.05", theta="0.05",
                      eta="0.01", epsilon="0.001", X=10 ** 6, seed=0) -> ExperimentConfig:
    """Convenience constructor coercing everything to exact carriers."""
    return ExperimentConfig(
        alpha=as_exact(alpha), beta=Fraction(as_exact(beta)),
        c=Fraction(as_exact(c)), theta=Fraction(as_exact(theta)),
        eta=Fraction(as_exact(eta)), epsilon=Fraction(as_exact(epsilon)),
        X=int(X), seed=int(seed))


@dataclass(frozen=True)
class DerivedScales:
    """Scale quantities derived from a config.

    Delta = X^-theta, delta = gamma X^(gamma-1)/10, L = [X^(theta+eta)],
    H = [10 X^(1-gamma+eta)/gamma], lam = 4*Delta*delta.  L and H come from
    exact integer arithmetic; Delta and delta carry certified error bounds.
    """

    gamma: Fraction
    Delta: PreciseReal
    delta: PreciseReal
    L: int
    H: int
    lam: PreciseReal
    X: int
    ordered: bool  # 0 < delta < Delta < 1 (expected once X is large enough)


def derived_scales(config: ExperimentConfig, digits: Optional[int] = None) -> DerivedScales:
    d = digits if digits is not None else default_digits()
    gamma = config.gamma
    X = config.X
    with mpmath.workdps(d + 10):
        Xm = mpf(X)
        Delta_v = Xm ** (-mpf(config.theta.numerator) / config.theta.denominator)
        gm = mpf(gamma.numerator) / gamma.denominator
        delta_v = gm * Xm ** (gm - 1) / 10
        lam_v = 4 * Delta_v * delta_v
        rel = mpf(10) ** (-(d + 5))
        Delta = PreciseReal(Delta_v, abs(Delta_v) * rel)
        delta = PreciseReal(delta_v, abs(delta_v) * rel)
        lam = PreciseReal(lam_v, abs(lam_v) * 3 * rel)
    L = floor_scaled_power(X, config.theta + config.eta)
    H = floor_scaled_power(X, 1 - gamma + config.eta, scale=10 / gamma)
    ordered = bool(0 < delta_v < Delta_v < 1)
    if not ordered:
        logger.warning("scale ordering 0 < delta < Delta < 1 violated at X=%d "
                       "(delta=%s, Delta=%s)", X, float(delta_v), float(Delta_v))
    if L < 1 or H < 1:
        raise ParameterRange(f"degenerate detector degrees L={L}, H={H}")
    return DerivedScales(gamma=gamma, Delta=Delta, delta=delta, L=L, H=H,
                         lam=lam, X=X, ordered=ordered)


def raw_scales(gamma, Delta, delta, L=1, H=1, X=0) -> DerivedScales:
    """Scales from explicit values, bypassing config validation (test hook)."""
    g = Fraction(as_exact(gamma))
    mk = lambda x: PreciseReal(*materialize(as_exact(x), default_digits()),
                               exact=as_exact(x))
    D, dl = mk(Delta), mk(delta)
    lam = PreciseReal(4 * D.value * dl.value, 4 * (D.error_bound + dl.error_bound))
    return DerivedScales(gamma=g, Delta=D, delta=dl, L=L, H=H, lam=lam, X=X,
                         ordered=bool(0 < dl.value < D.value < 1))


# ---------------------------------------------------------------------------
# segmented sieve


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_array(lo: int, hi: int, segment: int = SEGMENT_SIZE) -> np.ndarray:
    """All primes in [lo, hi) as an int64 array, by segmented sieving."""
    if hi > MAX_SIEVE_BOUND:
        raise RangeTooLarge(f"sieve bound {hi} exceeds 2^40")
    lo = max(lo, 2)
    if lo >= hi:
        return np.empty(0, dtype=np.int64)
    base = _small_primes(math.isqrt(hi - 1))
    chunks = []
    for start in range(lo, hi, segment):
        stop = min(start + segment, hi)
        flags = np.ones(stop - start, dtype=bool)
        if start <= 1:
            flags[: min(2 - start, stop - start)] = False
        for p in base:
            p = int(p)
            first = max(p * p, ((start + p - 1) // p) * p)
            if first >= stop:
                if p * p >= stop:
                    break
                continue
            flags[first - start:: p] = False
        idx = np.flatnonzero(flags)
        if idx.size:
            chunks.append(idx.astype(np.int64) + start)
    if not chunks:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(chunks)


def primes_in_range(lo: int, hi: int, segment: int = SEGMENT_SIZE) -> Iterator[int]:
    """Ascending iterator over primes in [lo, hi); memory bounded by segment."""
    if hi > MAX_SIEVE_BOUND:
        raise RangeTooLarge(f"sieve bound {hi} exceeds 2^40")
    lo = max(lo, 2)
    for start in range(lo, hi, segment):
        stop = min(start + segment, hi)
        for p in primes_array(start, stop, segment=segment):
            yield int(p)


# ---------------------------------------------------------------------------
# Piatetski-Shapiro membership

_EXACT_DENOM_CAP = 64


def is_ps_prime(p: int, c, digits: Optional[int] = None) -> bool:
    """True iff [p^gamma, (p+1)^gamma) contains an integer, gamma = 1/c.

    Equivalent to ceil(p^gamma) < (p+1)^gamma.  Exact for rational c with
    denominator <= 64; certified precision ladder otherwise.
    """
    if p < 2:
        raise ParameterRange("p must be a prime >= 2")
    ce = Fraction(as_exact(c)) if not isinstance(c, PreciseReal) else None
    if ce is not None:
        if not 1 < ce < Fraction(9, 8):
            raise ParameterRange(f"c={ce} outside (1, 9/8)")
        if ce.numerator <= _EXACT_DENOM_CAP:
            # gamma = q/p' in lowest terms; n >= p^gamma iff n^p' >= p^q
            num, den = ce.numerator, ce.denominator  # gamma = den/num
            n = _exact_ceil_root(p, den, num)
            return n ** num < (p + 1) ** den
    # generic path: certified floating comparison
    g = 1 / Fraction(as_exact(c))

    def gap(d):
        with mpmath.workdps(d + 10):
            gv = mpf(g.numerator) / g.denominator
            a = mpf(p) ** gv
            b = mpf(p + 1) ** gv
            err = (abs(b) + abs(a) + 1) * mpf(10) ** (-(d + 6))
            frac = a - mpmath.floor(a)
            if frac <= err or (1 - frac) <= err:
                return mpf(0), mpf(1)  # ceil(p^gamma) itself uncertain: escalate
            n = mpmath.floor(a) + 1
            return b - n, err

    return certified_decision(gap, digits, witness=(p, c),
                              what=f"is_ps_prime({p})")


def _exact_ceil_root(p: int, num: int, den: int) -> int:
    """ceil(p^(num/den)) by exact integer comparison."""
    n = int(float(p) ** (num / den))
    while n ** den < p ** num:
        n += 1
    while n > 1 and (n - 1) ** den >= p ** num:
        n -= 1
    return n


def ps_prime_flags(ps: np.ndarray, c) -> np.ndarray:
    """Vectorized is_ps_prime over an int64 array of primes.

    float64 classifies everything away from integer boundaries; the boundary
    band is re-decided exactly, so the result matches the scalar path.
    """
    ce = Fraction(as_exact(c))
    g = float(1 / ce)
    p = ps.astype(np.float64)
    a = np.power(p, g)
    b = np.power(p + 1.0, g)
    n = np.ceil(a)
    sure = (np.abs(a - np.round(a)) > FLOAT_MARGIN) & (np.abs(b - n) > FLOAT_MARGIN)
    flags = n < b
    for i in np.flatnonzero(~sure):
        flags[i] = is_ps_prime(int(ps[i]), ce)
    return flags


def power_floor_scan(c, limit: int) -> np.ndarray:
    """All distinct values [n^c] < limit, ascending (oracle-facing helper)."""
    from .precision import power_floor

    ce = Fraction(as_exact(c))
    n_max = ceil_scaled_power(limit, 1 / ce) + 2
    n = np.arange(1, n_max + 1, dtype=np.float64)
    v = np.power(n, float(ce))
    f = np.floor(v).astype(np.int64)
    frac = v - np.floor(v)
    band = (frac < FLOAT_MARGIN) | (frac > 1 - FLOAT_MARGIN)
    for i in np.flatnonzero(band):
        f[i] = power_floor(int(i) + 1, ce)
    return np.unique(f[f < limit])


# ---------------------------------------------------------------------------
# membership conditions and the set A


def frac_distance_linear(a: np.ndarray, alpha_hi: float, alpha_lo: float,
                         beta: float) -> np.ndarray:
    """||alpha*a + beta|| in float64 via the split-alpha product."""
    return dist_to_int(frac_mod_one(a, alpha_hi, alpha_lo, beta))


def frac_distance_power(a: np.ndarray, gamma: float, shift: float) -> np.ndarray:
    """||a^gamma + shift|| in float64 (error ~1e-9 at a ~ 1e7)."""
    v = np.power(a.astype(np.float64), gamma) + shift
    return np.abs(v - np.round(v))


def fractional_condition(a: int, scales: DerivedScales,
                         digits: Optional[int] = None) -> bool:
    """Certified ||a^gamma + 2*delta|| < delta."""
    if a < 1:
        raise ParameterRange("a must be positive")
    g = scales.gamma

    def margin(d):
        with mpmath.workdps(d + 10):
            dv, de = scales.delta.materialize(d)
            gv = mpf(g.numerator) / g.denominator
            x = mpf(a) ** gv + 2 * dv
            dist = abs(x - mpmath.nint(x))
            err = (abs(x) + 1) * mpf(10) ** (-(d + 6)) + 3 * de
            return dv - dist, err

    return certified_decision(margin, digits, witness=a,
                              what=f"fractional_condition({a})")


def diophantine_condition(a: int, config: ExperimentConfig,
                          scales: DerivedScales,
                          digits: Optional[int] = None) -> bool:
    """Certified ||alpha*a + beta|| < Delta."""

    def margin(d):
        with mpmath.workdps(d + 10):
            av, ae = materialize(config.alpha, d)
            bv, be = materialize(config.beta, d)
            Dv, De = scales.Delta.materialize(d)
            x = av * a + bv
            dist = abs(x - mpmath.nint(x))
            err = ae * a + be + (abs(x) + 1) * mpf(10) ** (-(d + 6)) + De
            return Dv - dist, err

    return certified_decision(margin, digits, witness=a,
                              what=f"diophantine_condition({a})")


def is_A_member(a: int, config: ExperimentConfig,
                scales: Optional[DerivedScales] = None,
                digits: Optional[int] = None) -> bool:
    """Certified membership of a in the thin set A."""
    s = scales if scales is not None else derived_scales(config)
    if not (config.X / 2 <= a < config.X):
        return False
    return (diophantine_condition(a, config, s, digits)
            and fractional_condition(a, s, digits))


@dataclass(frozen=True)
class BSummary:
    """The dense reference set B = [X/2, X) represented by its endpoints."""

    lo: int
    hi: int

    @property
    def count(self) -> int:
        return self.hi - self.lo


def _filter_band(values: np.ndarray, dist: np.ndarray, threshold: float,
                 decide) -> np.ndarray:
    """Keep values with dist < threshold; re-decide the uncertain band exactly."""
    keep = dist < threshold - FLOAT_MARGIN
    band = np.abs(dist - threshold) <= FLOAT_MARGIN
    if band.any():
        extra = np.fromiter((decide(int(v)) for v in values[band]), dtype=bool,
                            count=int(band.sum()))
        keep = keep.copy()
        keep[band] = extra
    return values[keep]


def build_sets(config: ExperimentConfig, digits: Optional[int] = None,
               chunk: int = 1 << 20, threads: int = 1) -> tuple[np.ndarray, BSummary]:
    """Materialize A (sorted int64 array) and the implicit B summary.

    A is filtered in float64 chunks; candidates within FLOAT_MARGIN of either
    threshold are re-decided by the certified scalar conditions.  Chunks may
    run on a thread pool; results merge in chunk order, so the output does
    not depend on the worker count.
    """
    s = derived_scales(config, digits)
    lo = (config.X + 1) // 2
    hi = config.X
    d = digits if digits is not None else default_digits()
    a_hi, a_lo = alpha_split(config.alpha, d)
    beta_f = float(config.beta)
    Delta_f = float(s.Delta.value)
    delta_f = float(s.delta.value)
    gamma_f = float(s.gamma)

    def filter_chunk(start: int) -> np.ndarray:
        stop = min(start + chunk, hi)
        a = np.arange(start, stop, dtype=np.int64)
        d1 = frac_distance_linear(a, a_hi, a_lo, beta_f)
        a = _filter_band(a, d1, Delta_f,
                         lambda v: diophantine_condition(v, config, s, digits))
        if a.size:
            d2 = frac_distance_power(a, gamma_f, 2 * delta_f)
            a = _filter_band(a, d2, delta_f,
                             lambda v: fractional_condition(v, s, digits))
        return a

    starts = list(range(lo, hi, chunk))
    if threads > 1 and len(starts) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(filter_chunk, starts))
    else:
        parts = [filter_chunk(st) for st in starts]
    parts = [p for p in parts if p.size]
    A = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)
    return A, BSummary(lo=lo, hi=hi)


def implication_violations(config: ExperimentConfig,
                           primes: Optional[np.ndarray] = None) -> list[int]:
    """Primes in [X/2, X) passing the fractional condition but not PS-represented.

    The implication holds once X is large enough; at small X any violation is
    logged and returned rather than treated as an error.
    """
    s = derived_scales(config)
    if primes is None:
        primes = primes_array((config.X + 1) // 2, config.X)
    if primes.size == 0:
        return []
    d2 = frac_distance_power(primes, float(s.gamma), 2 * float(s.delta.value))
    cond = _filter_band(primes, d2, float(s.delta.value),
                        lambda v: fractional_condition(v, s))
    if cond.size == 0:
        return []
    flags = ps_prime_flags(cond, config.c)
    bad = [int(p) for p in cond[~flags]]
    for p in bad:
        logger.warning("membership implication violated at p=%d, X=%d", p, config.X)
    return bad
