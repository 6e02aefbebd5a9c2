"""Empirical comparison layer between the thin set A and the dense set B.

Type I sums weight only the outer factor m (window m <= X^(15/22)); type II
sums weight both factors (window X^(7/22) <= m <= X^(8/22)).  Each side is
evaluated by direct enumeration of factorizations mn with m in the window,
counting every valid (m, n) pair, and the A-side is compared against
lambda = 4*Delta*delta times the B-side.

The headline count reports two prime counts side by side: membership in A
(threshold Delta = X^-theta on the whole dyadic window) and the literal
statement threshold p^-theta with genuine [n^c] representability.  The two
differ exactly by the reduction step the analysis makes, so reporting both
makes that step observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, ParameterRange
from .expsums import CoefficientSequence
from .fastfrac import alpha_split, dist_to_int, frac_mod_one
from .precision import ceil_scaled_power, default_digits, floor_scaled_power
from .sieve import (
    FLOAT_MARGIN,
    BSummary,
    DerivedScales,
    ExperimentConfig,
    build_sets,
    derived_scales,
    diophantine_condition,
    fractional_condition,
    frac_distance_linear,
    is_ps_prime,
    primes_array,
    ps_prime_flags,
)

PAIR_BUDGET = 10 ** 9

COEFF_KINDS = ("all-ones", "divisor-capped-random", "prime-indicator",
               "scaled-detector-coeffs")


def divisor_count_table(limit: int) -> np.ndarray:
    """tau(n) for 0 <= n <= limit by the sieve of strided adds."""
    tau = np.zeros(limit + 1, dtype=np.int32)
    for d in range(1, limit + 1):
        tau[d:: d] += 1
    return tau


def coefficient_sequence(kind: str, lo: int, hi: int, role: str = "a",
                         seed: int = 0, epsilon: Optional[Fraction] = None,
                         tau: Optional[np.ndarray] = None,
                         detector_poly=None, scale: Optional[float] = None
                         ) -> CoefficientSequence:
    """Materialize a weight sequence over [lo, hi).

    divisor-capped-random draws uniformly in [0, tau(m)] from a generator
    seeded only by ``seed``, so reports are reproducible; prime-indicator is
    {0,1}; scaled-detector-coeffs wires actual approximant coefficients
    divided by their scale.
    """
    if kind not in COEFF_KINDS:
        raise ParameterRange(f"unknown coefficient kind {kind!r}")
    if hi <= lo:
        raise ParameterRange("empty index range")
    eps = float(epsilon) if epsilon is not None else 0.0

    if kind == "all-ones":
        raw_vals = np.ones(hi - lo, dtype=np.float64)
    elif kind == "prime-indicator":
        raw_vals = np.zeros(hi - lo, dtype=np.float64)
        ps = primes_array(max(lo, 2), hi)
        raw_vals[ps - lo] = 1.0
    elif kind == "divisor-capped-random":
        t = tau if tau is not None else divisor_count_table(hi - 1)
        rng = np.random.default_rng(seed)
        raw_vals = rng.random(hi - lo) * t[lo: hi]
    else:  # scaled-detector-coeffs
        if detector_poly is None or scale is None:
            raise ParameterRange("scaled-detector-coeffs needs a polynomial and scale")
        raw_vals = np.zeros(hi - lo, dtype=np.float64)
        for idx in range(lo, hi):
            k = abs(idx)
            if 1 <= k <= detector_poly.K:
                raw_vals[idx - lo] = float(detector_poly.coeffs[k - 1])

    def raw(indices: np.ndarray) -> np.ndarray:
        i = np.abs(np.asarray(indices, dtype=np.int64))
        if i.size and (i.min() < lo or i.max() >= hi):
            raise ParameterRange("index outside the materialized range")
        return raw_vals[i - lo]

    if kind == "scaled-detector-coeffs":
        s = float(scale)
        starred = lambda idx: raw(idx) / s
        max_star = float(np.max(np.abs(raw_vals))) / s if raw_vals.size else 0.0
    elif role in ("a", "b") and eps > 0:
        starred = lambda idx: raw(idx) * np.power(
            np.abs(np.asarray(idx, dtype=np.float64)), -eps)
        max_star = float(np.max(raw_vals)) if raw_vals.size else 0.0
    else:
        starred = raw
        max_star = float(np.max(np.abs(raw_vals))) if raw_vals.size else 0.0

    return CoefficientSequence(kind=kind, role=role, raw=raw, starred=starred,
                               max_abs_starred=max_star)


# ---------------------------------------------------------------------------
# type I / type II comparison


@dataclass(frozen=True)
class ComparisonReport:
    kind: str  # "typeI" | "typeII"
    lhs_A: float
    rhs_B_scaled: float
    deviation: float
    relative: float
    X: int
    coeff_kinds: tuple


def _type_window(kind: str, X: int) -> tuple[int, int]:
    if kind == "typeI":
        return 1, floor_scaled_power(X, Fraction(15, 22))
    if kind == "typeII":
        return (ceil_scaled_power(X, Fraction(7, 22)),
                floor_scaled_power(X, Fraction(8, 22)))
    raise ParameterRange(f"kind must be typeI or typeII, not {kind!r}")


def _isin_sorted(values: np.ndarray, table: np.ndarray) -> np.ndarray:
    if table.size == 0:
        return np.zeros(values.shape, dtype=bool)
    pos = np.searchsorted(table, values)
    pos = np.minimum(pos, table.size - 1)
    return table[pos] == values


def harman_compare(kind: str, config: ExperimentConfig,
                   a_kind: str = "all-ones", b_kind: Optional[str] = None,
                   A: Optional[np.ndarray] = None,
                   scales: Optional[DerivedScales] = None) -> ComparisonReport:
    """Exact evaluation of one comparison identity between A and B.

    Both sides enumerate every factorization mn with m in the window and
    mn in [X/2, X); the A side additionally requires membership of the
    product in A.  Non-negative coefficient kinds keep both sides >= 0.
    """
    X = config.X
    s = scales if scales is not None else derived_scales(config)
    if kind == "typeII" and b_kind is None:
        b_kind = "all-ones"
    m_lo, m_hi = _type_window(kind, X)
    if m_lo > m_hi:
        raise ParameterRange(f"empty m-window for {kind} at X={X}")
    est_pairs = 0.5 * X * (math.log(m_hi + 1) - math.log(m_lo))
    if est_pairs > PAIR_BUDGET:
        raise BudgetExceeded(f"{kind} needs ~{int(est_pairs)} pairs", int(est_pairs))

    if A is None:
        A, _ = build_sets(config)
    a_seq = coefficient_sequence(a_kind, 1, m_hi + 1, role="a",
                                 seed=config.seed)
    b_seq = None
    if b_kind is not None:
        n_max = (X + m_lo - 1) // m_lo  # largest n over the window
        b_seq = coefficient_sequence(b_kind, 1, n_max + 1, role="b",
                                     seed=config.seed + 1 if b_kind == a_kind
                                     else config.seed)

    m_arr = np.arange(m_lo, m_hi + 1, dtype=np.int64)
    a_vals = a_seq.raw(m_arr)
    lhs_terms = []
    rhs_terms = []
    for i, m in enumerate(m_arr.tolist()):
        am = float(a_vals[i])
        na = (X + 2 * m - 1) // (2 * m)
        nb = (X + m - 1) // m - 1
        if na > nb:
            continue
        n = np.arange(na, nb + 1, dtype=np.int64)
        prod = m * n
        inA = _isin_sorted(prod, A)
        if b_seq is None:
            lhs_terms.append(am * float(inA.sum()))
            rhs_terms.append(am * float(n.size))
        else:
            bn = b_seq.raw(n)
            lhs_terms.append(am * float(bn[inA].sum()))
            rhs_terms.append(am * float(bn.sum()))
    lhs = math.fsum(lhs_terms)
    rhs = math.fsum(rhs_terms)
    lam = float(s.lam.value)
    rhs_scaled = lam * rhs
    dev = abs(lhs - rhs_scaled)
    rel = dev / rhs_scaled if rhs_scaled != 0 else math.inf if dev else 0.0
    kinds = (a_kind,) if b_seq is None else (a_kind, b_kind)
    return ComparisonReport(kind=kind, lhs_A=lhs, rhs_B_scaled=rhs_scaled,
                            deviation=dev, relative=rel, X=X, coeff_kinds=kinds)


# ---------------------------------------------------------------------------
# headline counts


@dataclass(frozen=True)
class CountReport:
    count_A_primes: int
    count_theorem: int
    count_B_primes: int
    lam: float
    harman_threshold: float
    theorem_satisfied: bool
    harman_satisfied: bool
    X: int

    def as_dict(self) -> dict:
        return {
            "schema_version": 1,
            "X": self.X,
            "count_A_primes": self.count_A_primes,
            "count_theorem": self.count_theorem,
            "count_B_primes": self.count_B_primes,
            "lambda": self.lam,
            "harman_threshold": self.harman_threshold,
            "theorem_satisfied": self.theorem_satisfied,
            "harman_satisfied": self.harman_satisfied,
        }


def _theorem_condition_flags(primes: np.ndarray, config: ExperimentConfig,
                             digits: Optional[int] = None) -> np.ndarray:
    """||alpha*p + beta|| < p^-theta with certified handling of the margin band."""
    d = digits if digits is not None else default_digits()
    a_hi, a_lo = alpha_split(config.alpha, d)
    dist = frac_distance_linear(primes, a_hi, a_lo, float(config.beta))
    thr = np.power(primes.astype(np.float64), -float(config.theta))
    flags = dist < thr - FLOAT_MARGIN
    band = np.abs(dist - thr) <= FLOAT_MARGIN
    for i in np.flatnonzero(band):
        flags[i] = _theorem_condition_exact(int(primes[i]), config, digits)
    return flags


def _theorem_condition_exact(p: int, config: ExperimentConfig,
                             digits: Optional[int] = None) -> bool:
    import mpmath
    from mpmath import mpf

    from .precision import certified_decision, materialize

    def margin(dd):
        with mpmath.workdps(dd + 10):
            av, ae = materialize(config.alpha, dd)
            bv, be = materialize(config.beta, dd)
            x = av * p + bv
            dist = abs(x - mpmath.nint(x))
            t = config.theta
            thr = mpf(p) ** (-mpf(t.numerator) / t.denominator)
            err = ae * p + be + (abs(x) + 1) * mpf(10) ** (-(dd + 6))
            return thr - dist, err

    return certified_decision(margin, digits, witness=p,
                              what=f"theorem threshold at p={p}")


def headline_count(config: ExperimentConfig,
                   digits: Optional[int] = None) -> CountReport:
    """Count primes in A, primes meeting the literal statement, and all primes.

    count_A_primes:  p in [X/2, X) with ||alpha p + beta|| < Delta and
                     ||p^gamma + 2 delta|| < delta  (membership in A);
    count_theorem:   p in [X/2, X) that are [n^c] values and satisfy
                     ||alpha p + beta|| < p^-theta.
    """
    X = config.X
    s = derived_scales(config, digits)
    primes = primes_array((X + 1) // 2, X)
    count_B = int(primes.size)

    A, _ = build_sets(config, digits)
    count_A = int(_isin_sorted(primes, A).sum())

    if primes.size:
        theorem_flags = _theorem_condition_flags(primes, config, digits)
        cand = primes[theorem_flags]
        ps_flags = ps_prime_flags(cand, config.c) if cand.size else \
            np.zeros(0, dtype=bool)
        count_theorem = int(ps_flags.sum())
    else:
        count_theorem = 0

    lam = float(s.lam.value)
    threshold = lam / 10 * count_B
    return CountReport(count_A_primes=count_A, count_theorem=count_theorem,
                       count_B_primes=count_B, lam=lam,
                       harman_threshold=threshold,
                       theorem_satisfied=count_A > 0,
                       harman_satisfied=count_A > threshold, X=X)
