"""Desk-scale laboratory for Diophantine approximation by Piatetski-Shapiro primes.

Subpackages:
    precision    certified extended-precision arithmetic
    diophantine  convergents and the admissible X-window
    sieve        primes, represented values, the thin set A
    detector     one-sided trigonometric approximants to interval indicators
    expsums      tailored exponential sums and their bound comparators
    harness      type I/II comparisons and headline counts
    cli          the ``pslab`` command-line tool
"""

from .errors import (
    BudgetExceeded,
    OutOfLemmaRange,
    ParameterRange,
    ParseError,
    PrecisionExhausted,
    PSLabError,
    RangeTooLarge,
    RationalInput,
    ValidationError,
)
from .precision import PreciseReal, nearest_int_distance, power_floor, unit_circle_exp
from .diophantine import RationalApprox, XWindow, convergents, verify_dirichlet, x_window
from .sieve import (
    DerivedScales,
    ExperimentConfig,
    build_sets,
    derived_scales,
    experiment_config,
    is_ps_prime,
    primes_in_range,
)
from .detector import ApproximantPolynomial, build_approximant, eval_approximant
from .expsums import DyadicBlock, SumReport, direct_sum, dyadic_blocks, theoretical_target
from .harness import ComparisonReport, CountReport, harman_compare, headline_count

__version__ = "0.1.0"

__all__ = [
    "ApproximantPolynomial", "BudgetExceeded", "ComparisonReport", "CountReport",
    "DerivedScales", "DyadicBlock", "ExperimentConfig", "OutOfLemmaRange",
    "PSLabError", "ParameterRange", "ParseError", "PreciseReal",
    "PrecisionExhausted", "RangeTooLarge", "RationalApprox", "RationalInput",
    "SumReport", "ValidationError", "XWindow", "build_approximant", "build_sets",
    "convergents", "derived_scales", "direct_sum", "dyadic_blocks",
    "eval_approximant", "experiment_config", "harman_compare", "headline_count",
    "is_ps_prime", "nearest_int_distance", "power_floor", "primes_in_range",
    "theoretical_target", "unit_circle_exp", "verify_dirichlet", "x_window",
]
