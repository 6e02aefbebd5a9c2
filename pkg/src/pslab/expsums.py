"""Direct evaluation of the tailored exponential sums over dyadic blocks,
plus every closed-form bound display as an executable comparator.

Six sum kinds are evaluated exactly (term by term, exact accumulation):

    S1: sum a*_m c*_l e(alpha l m n)            over mn ~ X, m <= X^(15/22)
    S2: sum a*_m d*_h e(h (mn)^gamma)
    S3: sum a*_m c*_l d*_h e(alpha l m n + h (mn)^gamma)
    T1..T3: the same shapes with an extra b*_n weight and the type-II window
            X^(7/22) <= m <= X^(8/22)

with l running over both signs up to L and h up to H.  A dyadic block
labelled (M, N, U, V) restricts m to [M, 2M), n to [N, 2N), |l| to [U, 2U),
|h| to [V, 2V); the grids are anchored so the blocks partition the index
space exactly, which together with exact accumulation makes the blockwise
total bit-identical to a monolithic pass.

Phase arithmetic uses the mod-1 identity frac(alpha*l*mn) =
frac(l * frac(alpha*mn)), so the split-alpha fractional part is formed once
per (m, n) and reused across l and h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import mpmath
import numpy as np
from mpmath import mpf

from .diophantine import select_denominator, verify_dirichlet
from .errors import BudgetExceeded, OutOfLemmaRange, ParameterRange, PrecisionExhausted
from .exactsum import ExactComplexSum
from .fastfrac import alpha_split, frac_mod_one
from .precision import (
    as_exact,
    ceil_scaled_power,
    default_digits,
    floor_scaled_power,
    materialize,
    nearest_int_distance,
)
from .sieve import ExperimentConfig, DerivedScales, derived_scales

S_KINDS = ("S1", "S2", "S3")
T_KINDS = ("T1", "T2", "T3")
ALL_KINDS = S_KINDS + T_KINDS

TERM_BUDGET = 10 ** 10

_N_CHUNK = 1 << 18


# ---------------------------------------------------------------------------
# coefficient sequences


@dataclass(frozen=True)
class CoefficientSequence:
    """Weights addressable by index, with the role-appropriate scaling baked in.

    ``starred`` returns the scaled values used inside the tailored sums
    (a_m/m^eps for the outer roles, c_l/Delta and d_h/delta for detector
    coefficients); ``raw`` returns the unscaled tau-capped values.
    """

    kind: str
    role: str  # one of "a", "b", "c", "d"
    raw: Callable[[np.ndarray], np.ndarray]
    starred: Callable[[np.ndarray], np.ndarray]
    max_abs_starred: float


def all_ones(role: str, epsilon: Optional[Fraction] = None) -> CoefficientSequence:
    """Unit weights; the starred view of the outer roles carries the m^-eps taper."""
    if role in ("a", "b") and epsilon is not None:
        e = float(epsilon)
        starred = lambda idx: np.power(np.abs(idx).astype(np.float64), -e)
    else:
        starred = lambda idx: np.ones(np.shape(idx), dtype=np.float64)
    return CoefficientSequence(
        kind="all-ones", role=role,
        raw=lambda idx: np.ones(np.shape(idx), dtype=np.float64),
        starred=starred, max_abs_starred=1.0)


def unit_coefficients(config: ExperimentConfig) -> "CoefficientSet":
    return CoefficientSet(a=all_ones("a", config.epsilon),
                          b=all_ones("b", config.epsilon),
                          c=all_ones("c"), d=all_ones("d"))


@dataclass(frozen=True)
class CoefficientSet:
    a: CoefficientSequence
    b: Optional[CoefficientSequence] = None
    c: Optional[CoefficientSequence] = None
    d: Optional[CoefficientSequence] = None

    def labels(self) -> tuple:
        return tuple(s.kind for s in (self.a, self.b, self.c, self.d)
                     if s is not None)


# ---------------------------------------------------------------------------
# dyadic blocks


@dataclass(frozen=True)
class DyadicBlock:
    """Index restriction m in [M, 2M), n in [N, 2N), |l| in [U, 2U), |h| in [V, 2V).

    U or V is None for the kinds that do not sum over l or h.
    """

    M: int
    N: int
    U: Optional[int] = None
    V: Optional[int] = None


def _family_m_range(config: ExperimentConfig, family: str) -> tuple[int, int]:
    X = config.X
    if family == "S":
        return 1, floor_scaled_power(X, Fraction(15, 22))
    if family == "T":
        return (ceil_scaled_power(X, Fraction(7, 22)),
                floor_scaled_power(X, Fraction(8, 22)))
    raise ParameterRange(f"unknown sum family {family!r}")


def _anchored_grid(lo: int, hi: int) -> list[int]:
    """Anchors lo*2^j whose blocks [anchor, 2*anchor) meet [lo, hi]."""
    out = []
    a = lo
    while a <= hi:
        out.append(a)
        a *= 2
    return out


def _n_bounds(m: int, X: int) -> tuple[int, int]:
    # X/2 <= mn < X
    return (X + 2 * m - 1) // (2 * m), (X + m - 1) // m - 1


def dyadic_blocks(config: ExperimentConfig, family: str,
                  scales: Optional[DerivedScales] = None,
                  with_l: bool = True, with_h: bool = True) -> list[DyadicBlock]:
    """All dyadic blocks for a family; O(log^4 X) of them."""
    s = scales if scales is not None else derived_scales(config)
    m_lo, m_hi = _family_m_range(config, family)
    if m_lo > m_hi:
        return []
    X = config.X
    out = []
    for M in _anchored_grid(m_lo, m_hi):
        ma, mb = max(M, m_lo), min(2 * M - 1, m_hi)
        if ma > mb:
            continue
        # the n-intervals shrink as m grows inside the block
        n_min = _n_bounds(mb, X)[0]
        n_max = _n_bounds(ma, X)[1]
        if n_min > n_max:
            continue
        for N in _anchored_grid(max(n_min, 1), n_max):
            if 2 * N - 1 < n_min:
                continue
            us = _anchored_grid(1, s.L) if with_l else [None]
            vs = _anchored_grid(1, s.H) if with_h else [None]
            for U in us:
                for V in vs:
                    out.append(DyadicBlock(M=M, N=N, U=U, V=V))
    return out


def blocks_for_kind(config: ExperimentConfig, kind: str,
                    scales: Optional[DerivedScales] = None) -> list[DyadicBlock]:
    if kind not in ALL_KINDS:
        raise ParameterRange(f"unknown sum kind {kind!r}")
    family = kind[0]
    idx = int(kind[1])
    return dyadic_blocks(config, family, scales,
                         with_l=idx in (1, 3), with_h=idx in (2, 3))


# ---------------------------------------------------------------------------
# direct evaluation


def _signed_values(lo: int, hi: int) -> list[int]:
    """[lo, hi] with both signs, in a fixed deterministic order."""
    pos = list(range(lo, hi + 1))
    return pos + [-v for v in pos]


def _count_terms(config: ExperimentConfig, kind: str, block: Optional[DyadicBlock],
                 scales: DerivedScales) -> int:
    m_lo, m_hi = _family_m_range(config, kind[0])
    idx = int(kind[1])
    X = config.X
    if block is not None:
        m_lo, m_hi = max(block.M, m_lo), min(2 * block.M - 1, m_hi)
    lcount = 1
    hcount = 1
    if idx in (1, 3):
        u_lo, u_hi = (block.U, min(2 * block.U - 1, scales.L)) if block else (1, scales.L)
        lcount = 2 * max(u_hi - u_lo + 1, 0)
    if idx in (2, 3):
        v_lo, v_hi = (block.V, min(2 * block.V - 1, scales.H)) if block else (1, scales.H)
        hcount = 2 * max(v_hi - v_lo + 1, 0)
    if m_hi - m_lo > 10 ** 6:
        # harmonic estimate is plenty for the budget guard
        pairs = 0.5 * X * (math.log(m_hi + 1) - math.log(max(m_lo, 1)))
        return int(pairs) * lcount * hcount
    total = 0
    for m in range(m_lo, m_hi + 1):
        na, nb = _n_bounds(m, X)
        if block is not None:
            na, nb = max(na, block.N), min(nb, 2 * block.N - 1)
        if na <= nb:
            total += (nb - na + 1)
    return total * lcount * hcount


def _sum_over(config: ExperimentConfig, kind: str, block: Optional[DyadicBlock],
              coeffs: CoefficientSet, scales: DerivedScales,
              digits: Optional[int] = None) -> tuple[ExactComplexSum, int]:
    """The exact accumulator and term count for one block (or the full range)."""
    X = config.X
    idx = int(kind[1])
    with_l = idx in (1, 3)
    with_h = idx in (2, 3)
    with_b = kind[0] == "T"
    if with_b and coeffs.b is None:
        raise ParameterRange(f"{kind} needs b-coefficients")
    if with_l and coeffs.c is None:
        raise ParameterRange(f"{kind} needs c-coefficients")
    if with_h and coeffs.d is None:
        raise ParameterRange(f"{kind} needs d-coefficients")

    estimated = _count_terms(config, kind, block, scales)
    if estimated > TERM_BUDGET:
        raise BudgetExceeded(f"{kind} needs ~{estimated} terms", estimated)

    m_lo, m_hi = _family_m_range(config, kind[0])
    if block is not None:
        m_lo, m_hi = max(block.M, m_lo), min(2 * block.M - 1, m_hi)

    # Coefficient sequences are indexed by |l| and |h|, so the (l, h) and
    # (-l, -h) branches are complex conjugates; they are folded pairwise into
    # 2*cos terms.  The sum is then exactly real and every branch is counted.
    ls_pos: list[int] = []
    if with_l:
        u_lo, u_hi = (block.U, min(2 * block.U - 1, scales.L)) if block else (1, scales.L)
        ls_pos = list(range(u_lo, u_hi + 1))
    hs_pos: list[int] = []
    if with_h:
        v_lo, v_hi = (block.V, min(2 * block.V - 1, scales.H)) if block else (1, scales.H)
        hs_pos = list(range(v_lo, v_hi + 1))

    if with_l and with_h:
        pairs = [(l, h) for l in ls_pos for h in hs_pos] + \
            [(l, -h) for l in ls_pos for h in hs_pos]
    elif with_l:
        pairs = [(l, None) for l in ls_pos]
    else:
        pairs = [(None, h) for h in hs_pos]

    d = digits if digits is not None else default_digits()
    a_hi, a_lo = alpha_split(config.alpha, d)
    gamma_f = float(scales.gamma)

    c_of = {l: float(v) for l, v in zip(
        ls_pos, coeffs.c.starred(np.array(ls_pos, dtype=np.int64)))} if ls_pos else {}
    d_of = {h: float(v) for h, v in zip(
        hs_pos, coeffs.d.starred(np.array(hs_pos, dtype=np.int64)))} if hs_pos else {}

    acc = ExactComplexSum()
    terms = 0
    for m in range(m_lo, m_hi + 1):
        na, nb = _n_bounds(m, X)
        if block is not None:
            na, nb = max(na, block.N), min(nb, 2 * block.N - 1)
        if na > nb:
            continue
        am = float(coeffs.a.starred(np.array([m], dtype=np.int64))[0])
        if am == 0.0:
            terms += 2 * (nb - na + 1) * len(pairs)
            continue
        for start in range(na, nb + 1, _N_CHUNK):
            stop = min(start + _N_CHUNK, nb + 1)
            n = np.arange(start, stop, dtype=np.int64)
            mn = m * n
            w = np.full(n.shape, am)
            if with_b:
                w = w * coeffs.b.starred(n)
            A = frac_mod_one(mn, a_hi, a_lo) if with_l else None
            if with_h:
                G = np.power(mn.astype(np.float64), gamma_f)
                Gf = G - np.floor(G)
            for l, h in pairs:
                weight = w
                if l is not None:
                    phase = l * A
                    weight = weight * c_of[l]
                    if h is not None:
                        phase = phase + h * Gf
                        weight = weight * d_of[abs(h)]
                else:
                    phase = h * Gf
                    weight = weight * d_of[abs(h)]
                ang = 2.0 * np.pi * (phase - np.floor(phase))
                acc.add(2.0 * weight * np.cos(ang), ())
                terms += 2 * n.size
    return acc, terms


@dataclass(frozen=True)
class SumReport:
    """One evaluated sum next to its closed-form bound and the common target."""

    kind: str
    block: Optional[DyadicBlock]
    exact_value: complex
    abs_value: float
    target: float
    lemma_bound: Optional[float]
    lemma_label: Optional[str]
    ratio_to_target: float
    term_count: int


def _target_value(config: ExperimentConfig) -> float:
    with mpmath.workdps(30):
        e = 1 - 2 * config.eta
        return float(mpf(config.X) ** (mpf(e.numerator) / e.denominator))


def direct_sum(kind: str, block: Optional[DyadicBlock], config: ExperimentConfig,
               coeffs: Optional[CoefficientSet] = None,
               scales: Optional[DerivedScales] = None,
               digits: Optional[int] = None) -> SumReport:
    """Evaluate one tailored sum exactly over a block (or monolithically)."""
    if kind not in ALL_KINDS:
        raise ParameterRange(f"unknown sum kind {kind!r}")
    s = scales if scales is not None else derived_scales(config)
    cs = coeffs if coeffs is not None else unit_coefficients(config)
    acc, terms = _sum_over(config, kind, block, cs, s, digits)
    value = acc.value()
    target = _target_value(config)
    bound = label = None
    if block is not None:
        try:
            tb = theoretical_target(kind, block, config, scales=s)
            bound, label = tb.value, tb.lemma
        except OutOfLemmaRange as exc:
            label = f"out-of-range: {exc}"
    absv = abs(value)
    return SumReport(kind=kind, block=block, exact_value=value, abs_value=absv,
                     target=target, lemma_bound=bound, lemma_label=label,
                     ratio_to_target=absv / target, term_count=terms)


def monolithic_sum(kind: str, config: ExperimentConfig,
                   coeffs: Optional[CoefficientSet] = None,
                   scales: Optional[DerivedScales] = None) -> SumReport:
    """The un-decomposed sum over the full ranges (block = None)."""
    return direct_sum(kind, None, config, coeffs, scales)


def blockwise_exact(kind: str, config: ExperimentConfig,
                    coeffs: Optional[CoefficientSet] = None,
                    scales: Optional[DerivedScales] = None) -> tuple[complex, int]:
    """Merge the exact per-block accumulators before the single rounding.

    The result is bit-identical to the monolithic pass: blocks partition the
    index space and accumulator merging is integer addition.
    """
    s = scales if scales is not None else derived_scales(config)
    cs = coeffs if coeffs is not None else unit_coefficients(config)
    total = ExactComplexSum()
    terms = 0
    for b in blocks_for_kind(config, kind, s):
        acc, t = _sum_over(config, kind, b, cs, s)
        total.merge(acc)
        terms += t
    return total.value(), terms


# ---------------------------------------------------------------------------
# closed-form estimates


def single_linear_bound(alpha, k: int, N: int,
                        digits: Optional[int] = None) -> float:
    """min(N, 1 / ||alpha*k||), with the distance certified away from zero."""
    if k < 1 or N < 1:
        raise ParameterRange("k and N must be positive")
    ex = as_exact(alpha)
    d = digits if digits is not None else default_digits()
    with mpmath.workdps(d + 10):
        av, ae = materialize(ex, d)
        dist = nearest_int_distance(av * k, d)
        err = dist.error_bound + ae * k
        if dist.value <= err:
            raise PrecisionExhausted(f"||alpha*{k}|| indistinguishable from 0")
        return float(min(mpf(N), 1 / dist.value))


def linear_sum_bound(alpha, K: int, N: int, q: int,
                     digits: Optional[int] = None) -> float:
    """(KN/q + K + q) * log(2KNq), valid when q is a Dirichlet denominator."""
    if K < 1 or N < 1:
        raise ParameterRange("K and N must be positive")
    if not verify_dirichlet(alpha, _nearest_numerator(alpha, q), q, digits):
        raise ParameterRange(f"q={q} fails the Dirichlet condition for alpha")
    return (K * N / q + K + q) * math.log(2 * K * N * q)


def _nearest_numerator(alpha, q: int) -> int:
    v, _ = materialize(as_exact(alpha), default_digits())
    return int(mpmath.nint(v * q))


def bilinear_bound(norm_a2: float, norm_b2: float, K: int, N: int, q: int) -> float:
    """(sum|a|^2 sum|b|^2)^(1/2) (KN/q + K + N + q)^(1/2) log(2KNq)^(1/2)."""
    if norm_a2 < 0 or norm_b2 < 0:
        raise ParameterRange("norms must be non-negative")
    return math.sqrt(norm_a2 * norm_b2) * math.sqrt(K * N / q + K + N + q) \
        * math.sqrt(math.log(2 * K * N * q))


def vdc_bound(range_len: float, Lambda: float) -> float:
    """(b - a) * Lambda^(1/2) + Lambda^(-1/2) for phases with f'' ~ Lambda."""
    if Lambda <= 0:
        raise ParameterRange("Lambda must be positive")
    return range_len * math.sqrt(Lambda) + 1.0 / math.sqrt(Lambda)


def eval_smooth_sum(h: int, m: int, gamma: float, n_lo: int, n_hi: int) -> complex:
    """sum_{n_lo < n <= n_hi} e(h*(m*n)^gamma), evaluated directly."""
    if n_lo >= n_hi:
        raise ParameterRange("need n_lo < n_hi")
    n = np.arange(n_lo + 1, n_hi + 1, dtype=np.float64)
    v = float(h) * np.power(float(m) * n, float(gamma))
    ang = 2.0 * np.pi * (v - np.floor(v))
    return complex(math.fsum(np.cos(ang).tolist()), math.fsum(np.sin(ang).tolist()))


# ---------------------------------------------------------------------------
# the bound displays and their admissible ranges


@dataclass(frozen=True)
class TargetBound:
    value: float
    lemma: str


def _xp(X: int, e: Fraction) -> mpf:
    return mpf(X) ** (mpf(e.numerator) / e.denominator)


def _mp(M: int, e: Fraction) -> mpf:
    return mpf(M) ** (mpf(e.numerator) / e.denominator)


def _m_between(M: int, X: int, lo: Optional[Fraction], hi: Optional[Fraction]) -> bool:
    """X^lo <= M <= X^hi by exact integer comparison (None = unbounded)."""
    if lo is not None:
        if lo <= 0:
            pass  # X^lo <= 1 <= M always
        elif M ** lo.denominator < X ** lo.numerator:
            return False
    if hi is not None:
        if hi <= 0:
            return False
        if M ** hi.denominator > X ** hi.numerator:
            return False
    return True


def _t2_display(X: int, M: int, gamma: Fraction, eps: Fraction, eta: Fraction) -> float:
    F = Fraction
    sq = (_xp(X, F(5, 2) - gamma)
          + _xp(X, 3 - 2 * gamma)
          + _xp(X, 2 - gamma) * M
          + _xp(X, (11 - 5 * gamma) / 3) * _mp(M, F(-1, 3))
          + _xp(X, (10 - 4 * gamma) / 3) * _mp(M, F(-2, 3))
          + _xp(X, (14 - 8 * gamma) / 3) * _mp(M, F(-4, 3)))
    sq *= _xp(X, 2 * (eps + eta))
    return float(mpmath.sqrt(sq))


def _s22_display(X: int, M: int, gamma: Fraction, eps: Fraction, eta: Fraction) -> float:
    F = Fraction
    v = (_xp(X, F(7, 4) - gamma) * _mp(M, F(1, 4))
         + _xp(X, 2 - gamma) * _mp(M, F(-1, 2))
         + _xp(X, F(15, 8) - gamma) * _mp(M, F(-1, 8)))
    return float(v * _xp(X, eps + eta))


def _s23_display(X: int, M: int, gamma: Fraction, eta: Fraction) -> float:
    return float(_xp(X, Fraction(3, 2) - gamma + 2 * eta) * M)


def _t3_display(X: int, M: int, gamma: Fraction, theta: Fraction,
                eps: Fraction, eta: Fraction) -> float:
    F = Fraction
    v = (_xp(X, F(9, 4) + 3 * theta / 2 - 5 * gamma / 4) * _mp(M, F(-1, 4))
         + _xp(X, F(3, 2) - gamma / 2) * _mp(M, F(-1, 2))
         + _xp(X, F(7, 4) + theta / 2 - 3 * gamma / 4) * _mp(M, F(-1, 4)))
    v = v * _xp(X, 2 * eps + 3 * eta)
    return float(_xp(X, 1 - 2 * eta) + v)


def _s32_display(X: int, M: int, gamma: Fraction, theta: Fraction,
                 eps: Fraction, eta: Fraction) -> float:
    F = Fraction
    v = (_xp(X, F(7, 4) + theta - gamma) * _mp(M, F(1, 4))
         + _xp(X, F(15, 8) + theta - gamma) * _mp(M, F(-1, 8)))
    return float(v * _xp(X, eps + 3 * eta))


def _s33_display(X: int, M: int, gamma: Fraction, theta: Fraction,
                 eta: Fraction) -> float:
    return float(_xp(X, Fraction(3, 2) - gamma + theta + 3 * eta) * M)


def theoretical_target(kind: str, block: DyadicBlock, config: ExperimentConfig,
                       q: Optional[int] = None,
                       scales: Optional[DerivedScales] = None) -> TargetBound:
    """The closed-form bound display covering this block, with its range gate.

    Every candidate lemma whose M-range admits the block is evaluated and the
    smallest bound is returned together with a label saying which lemma
    admitted it; OutOfLemmaRange if none does.
    """
    if kind not in ALL_KINDS:
        raise ParameterRange(f"unknown sum kind {kind!r}")
    s = scales if scales is not None else derived_scales(config)
    g, th = config.gamma, config.theta
    ep, et = config.epsilon, config.eta
    X, M = config.X, block.M
    F = Fraction
    candidates: list[tuple[str, Optional[Fraction], Optional[Fraction], Callable[[], float]]] = []
    if kind == "S1" or kind == "T1":
        sel = q
        if sel is None:
            approx = select_denominator(config.alpha, X, th, et)
            if approx is None:
                raise OutOfLemmaRange(
                    f"no convergent denominator admissible for X={X}")
            sel = approx.q
        U = block.U or 1
        xe = float(_xp(X, ep))
        if kind == "S1":
            val = (U * X / sel + M * U + sel) * xe
            return TargetBound(value=float(val), lemma=f"S1-linear(q={sel})")
        val = math.sqrt(U * X) * math.sqrt(U * X / sel + M * U + X / M + sel) * xe
        return TargetBound(value=float(val), lemma=f"T1-bilinear(q={sel})")
    if kind == "S2":
        candidates = [
            ("S2-small-M", None, g - F(1, 2) - 4 * et,
             lambda: _s23_display(X, M, g, et)),
            ("S2-medium-M", 2 - 2 * g + 2 * ep + 6 * et,
             min(F(2, 3), 4 * g - 3 - 4 * ep - 12 * et),
             lambda: _s22_display(X, M, g, ep, et)),
            ("S2-large-M", 5 - 5 * g + 6 * ep + 18 * et, g - 2 * ep - 6 * et,
             lambda: _t2_display(X, M, g, ep, et)),
        ]
    elif kind == "T2":
        N_eff = block.N
        candidates = [
            ("T2-direct", 5 - 5 * g + 6 * ep + 18 * et, g - 2 * ep - 6 * et,
             lambda: _t2_display(X, M, g, ep, et)),
            ("T2-swapped", 1 - g + 2 * ep + 6 * et, 5 * g - 4 - 6 * ep - 18 * et,
             lambda: _t2_display(X, N_eff, g, ep, et)),
        ]
    elif kind == "S3":
        candidates = [
            ("S3-small-M", None, g - F(1, 2) - th - 5 * et,
             lambda: _s33_display(X, M, g, th, et)),
            ("S3-medium-M", 7 - 8 * g + 8 * th + 8 * ep + 40 * et,
             4 * g - 3 - 4 * th - 4 * ep - 20 * et,
             lambda: _s32_display(X, M, g, th, ep, et)),
            ("S3-large-M", 5 - 5 * g + 6 * th + 8 * ep + 20 * et,
             g - 2 * th - 2 * ep - 7 * et,
             lambda: _t3_display(X, M, g, th, ep, et)),
        ]
    elif kind == "T3":
        N_eff = block.N
        candidates = [
            ("T3-direct", 5 - 5 * g + 6 * th + 8 * ep + 20 * et,
             g - 2 * th - 2 * ep - 7 * et,
             lambda: _t3_display(X, M, g, th, ep, et)),
            ("T3-swapped", 1 - g + 2 * th + 2 * ep + 7 * et,
             5 * g - 4 - 6 * th - 8 * ep - 20 * et,
             lambda: _t3_display(X, N_eff, g, th, ep, et)),
        ]
    admitted = [(label, fn()) for label, lo, hi, fn in candidates
                if _m_between(M, X, lo, hi)]
    if not admitted:
        raise OutOfLemmaRange(
            f"{kind}: no lemma M-range admits M={M} at X={X}")
    label, value = min(admitted, key=lambda t: t[1])
    return TargetBound(value=value, lemma=label)


# ---------------------------------------------------------------------------
# range algebra (exact rational arithmetic)


def coverage_gate(intervals: list[tuple[Fraction, Fraction]],
                  upto: Fraction = Fraction(15, 22)) -> bool:
    """Whether the union of open intervals covers the open interval (0, upto)."""
    reach = Fraction(0)
    progress = True
    while reach < upto and progress:
        progress = False
        for a, b in intervals:
            ok = (a <= 0) if reach == 0 else (a < reach)
            if ok and b > reach:
                reach = b
                progress = True
    return reach >= upto


def power_phase_coverage(gamma) -> bool:
    """The three pure-power-phase lemma ranges cover (0, 15/22) iff gamma > 8/9."""
    g = Fraction(as_exact(gamma))
    intervals = [(Fraction(0), g - Fraction(1, 2)),
                 (2 - 2 * g, min(Fraction(2, 3), 4 * g - 3)),
                 (5 - 5 * g, g)]
    return coverage_gate(intervals)


def mixed_phase_coverage(gamma, theta) -> bool:
    """The mixed-phase ranges cover (0, 15/22) iff theta < (9*gamma - 8)/10."""
    g = Fraction(as_exact(gamma))
    t = Fraction(as_exact(theta))
    intervals = [(Fraction(0), g - Fraction(1, 2) - t),
                 (7 - 8 * g + 8 * t, 4 * g - 3 - 4 * t),
                 (5 - 5 * g + 6 * t, g - 2 * t)]
    return coverage_gate(intervals)
