"""Command-line entry point binding all modules behind one executable.

Config files are plain ``key = value`` text with ``#`` comments.  Outputs are
CSV (comma separated, '.' decimal point) or JSON (stable key order, always
carrying schema_version).  Runs with the same config and seed are
byte-identical regardless of thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import detector, expsums, harness
from .diophantine import convergents
from .errors import (
    BudgetExceeded,
    ParameterRange,
    ParseError,
    PrecisionExhausted,
    PSLabError,
    RangeTooLarge,
    RationalInput,
    ValidationError,
)
from .precision import as_exact, parse_constant
from .sieve import (
    ExperimentConfig,
    build_sets,
    derived_scales,
    frac_distance_linear,
    frac_distance_power,
    primes_in_range,
    ps_prime_flags,
    primes_array,
)
from .fastfrac import alpha_split

SCHEMA_VERSION = 1

_CONFIG_KEYS = {
    "alpha", "beta", "c", "theta", "eta", "epsilon", "X", "seed",
    "coeff_a", "coeff_b", "output_dir", "precision_digits",
}
_REQUIRED_KEYS = ("alpha", "c", "theta", "X")
_DEFAULTS = {
    "beta": "0", "eta": "0.01", "epsilon": "0.001", "seed": "0",
    "coeff_a": "all-ones", "coeff_b": "all-ones",
}


@dataclass(frozen=True)
class RunSettings:
    coeff_a: str
    coeff_b: str
    output_dir: Optional[str]
    precision_digits: Optional[int]


def parse_config(path: str) -> tuple[ExperimentConfig, RunSettings]:
    """Parse and validate a config file; diagnostics carry line numbers."""
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ParseError(f"cannot read config: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value'", line=lineno)
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ParseError(f"line {lineno}: unknown key {key!r}", line=lineno)
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}", line=lineno)
        if not val:
            raise ParseError(f"line {lineno}: empty value for {key!r}", line=lineno)
        values[key] = val
    for key in _REQUIRED_KEYS:
        if key not in values:
            raise ParseError(f"missing required key {key!r}")
    merged = dict(_DEFAULTS)
    merged.update(values)
    try:
        config = ExperimentConfig(
            alpha=parse_constant(merged["alpha"]),
            beta=Fraction(as_exact(merged["beta"])),
            c=Fraction(as_exact(merged["c"])),
            theta=Fraction(as_exact(merged["theta"])),
            eta=Fraction(as_exact(merged["eta"])),
            epsilon=Fraction(as_exact(merged["epsilon"])),
            X=int(merged["X"].replace("_", "")),
            seed=int(merged["seed"]),
        )
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad value: {exc}") from exc
    digits = None
    if "precision_digits" in merged:
        digits = int(merged["precision_digits"])
    env = os.environ.get("PSLAB_PRECISION")
    if env:
        digits = int(env)
    settings = RunSettings(coeff_a=merged["coeff_a"], coeff_b=merged["coeff_b"],
                           output_dir=merged.get("output_dir"),
                           precision_digits=digits)
    return config, settings


def _emit(text: str, subcommand: str, ext: str, settings: Optional[RunSettings],
          out: Optional[str]) -> None:
    sys.stdout.write(text)
    path = out
    if path is None and settings is not None and settings.output_dir:
        os.makedirs(settings.output_dir, exist_ok=True)
        path = os.path.join(settings.output_dir, f"{subcommand}.{ext}")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _json_text(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_convergents(args) -> int:
    alpha = parse_constant(args.alpha)
    rows = ["a,q,error"]
    for r in convergents(alpha, max_q=args.max_q):
        rows.append(f"{r.a},{r.q},{r.error.to_decimal(30)}")
    _emit("\n".join(rows) + "\n", "convergents", "csv", None, args.out)
    return 0


def _cmd_ps_list(args) -> int:
    c = Fraction(as_exact(args.c))
    ps = primes_array(args.lo, args.hi)
    flags = ps_prime_flags(ps, c) if ps.size else np.zeros(0, dtype=bool)
    text = "".join(f"{int(p)}\n" for p in ps[flags])
    _emit(text, "ps-list", "txt", None, args.out)
    return 0


def _cmd_build_a(args) -> int:
    config, settings = parse_config(args.config)
    A, _ = build_sets(config, digits=settings.precision_digits,
                      threads=args.threads)
    s = derived_scales(config, settings.precision_digits)
    a_hi, a_lo = alpha_split(config.alpha)
    rows = ["a,dist_alpha,dist_gamma"]
    if A.size:
        d1 = frac_distance_linear(A, a_hi, a_lo, float(config.beta))
        d2 = frac_distance_power(A, float(s.gamma), 2 * float(s.delta.value))
        for a, x, y in zip(A.tolist(), d1.tolist(), d2.tolist()):
            rows.append(f"{a},{x:.12f},{y:.12f}")
    _emit("\n".join(rows) + "\n", "build-a", "csv", settings, args.out)
    return 0


def _cmd_detector_check(args) -> int:
    xi = as_exact(args.xi)
    rng = np.random.default_rng(0)
    xs = np.concatenate([np.arange(args.grid) / args.grid,
                         rng.random(args.random_points)])
    rows = ["xi,K,side,max_sandwich_violation,max_coefficient_slack"]
    from .precision import materialize
    xi_f = float(materialize(xi, 40)[0])
    ind = (np.abs(xs - np.round(xs)) < xi_f).astype(np.float64)
    for side in (detector.MINORANT, detector.MAJORANT):
        poly = detector.build_approximant(xi, args.K, side)
        vals = detector.evaluate_many(poly, xs)
        if side == detector.MINORANT:
            viol = float(np.max(vals - ind, initial=0.0))
        else:
            viol = float(np.max(ind - vals, initial=0.0))
        slack = 0.0
        for k in range(1, poly.K + 1):
            slack = max(slack, abs(float(poly.coeffs[k - 1])) - poly.coefficient_cap(k))
        rows.append(f"{args.xi},{args.K},{side},{max(viol, 0.0):.3e},{slack:.3e}")
    _emit("\n".join(rows) + "\n", "detector-check", "csv", None, args.out)
    return 0


def _cmd_expsum(args) -> int:
    config, settings = parse_config(args.config)
    if args.X is not None:
        config = ExperimentConfig(alpha=config.alpha, beta=config.beta,
                                  c=config.c, theta=config.theta,
                                  eta=config.eta, epsilon=config.epsilon,
                                  X=args.X, seed=config.seed)
    scales = derived_scales(config, settings.precision_digits)
    coeffs = expsums.unit_coefficients(config)
    if args.block:
        parts = [int(v) for v in args.block.split(",")]
        if len(parts) != 4:
            raise ParameterRange("--block wants M,N,U,V (0 for unused)")
        blocks = [expsums.DyadicBlock(M=parts[0], N=parts[1],
                                      U=parts[2] or None, V=parts[3] or None)]
    else:
        blocks = expsums.blocks_for_kind(config, args.kind, scales)
    rows = ["kind,M,N,U,V,abs_value,target,lemma_bound,ratio_to_target,term_count"]
    for b in blocks:
        rep = expsums.direct_sum(args.kind, b, config, coeffs, scales)
        lemma = "" if rep.lemma_bound is None else f"{rep.lemma_bound:.6e}"
        rows.append(
            f"{rep.kind},{b.M},{b.N},{b.U or ''},{b.V or ''},"
            f"{rep.abs_value:.6e},{rep.target:.6e},{lemma},"
            f"{rep.ratio_to_target:.6e},{rep.term_count}")
    _emit("\n".join(rows) + "\n", "expsum", "csv", settings, args.out)
    return 0


def _cmd_harman_compare(args) -> int:
    config, settings = parse_config(args.config)
    kind = {"I": "typeI", "II": "typeII"}[args.kind]
    b_kind = settings.coeff_b if kind == "typeII" else None
    rep = harness.harman_compare(kind, config, a_kind=settings.coeff_a,
                                 b_kind=b_kind)
    obj = {
        "schema_version": SCHEMA_VERSION,
        "kind": rep.kind,
        "X": rep.X,
        "lhs_A": rep.lhs_A,
        "rhs_B_scaled": rep.rhs_B_scaled,
        "deviation": rep.deviation,
        "relative": rep.relative,
        "coeff_kinds": list(rep.coeff_kinds),
    }
    _emit(_json_text(obj), "harman-compare", "json", settings, args.out)
    return 0


def _cmd_verify_theorem(args) -> int:
    config, settings = parse_config(args.config)
    rep = harness.headline_count(config, digits=settings.precision_digits)
    _emit(_json_text(rep.as_dict()), "verify-theorem", "json", settings, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser plumbing


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 with usage, not argparse's default 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _build_parser() -> _Parser:
    p = _Parser(prog="pslab", description=__doc__)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads for range partitioning")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convergents", help="continued-fraction convergents")
    c.add_argument("--alpha", required=True)
    c.add_argument("--max-q", dest="max_q", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_convergents)

    c = sub.add_parser("ps-list", help="represented primes in a range")
    c.add_argument("--c", required=True)
    c.add_argument("--lo", type=int, required=True)
    c.add_argument("--hi", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_ps_list)

    c = sub.add_parser("build-a", help="materialize the thin set A")
    c.add_argument("--config", required=True)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_build_a)

    c = sub.add_parser("detector-check", help="sandwich and coefficient audit")
    c.add_argument("--xi", required=True)
    c.add_argument("--K", type=int, required=True)
    c.add_argument("--grid", type=int, default=100000)
    c.add_argument("--random-points", dest="random_points", type=int, default=10000)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_detector_check)

    c = sub.add_parser("expsum", help="evaluate tailored sums over dyadic blocks")
    c.add_argument("--kind", required=True, choices=expsums.ALL_KINDS)
    c.add_argument("--config", required=True)
    c.add_argument("--X", type=int, default=None)
    c.add_argument("--block", default=None, help="M,N,U,V (0 = unused)")
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_expsum)

    c = sub.add_parser("harman-compare", help="type I/II comparison identity")
    c.add_argument("--kind", required=True, choices=["I", "II"])
    c.add_argument("--config", required=True)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_harman_compare)

    c = sub.add_parser("verify-theorem", help="headline prime counts")
    c.add_argument("--config", required=True)
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_verify_theorem)
    return p


_EXIT_VALIDATION = (ParseError, ValidationError, ParameterRange, RationalInput)
_EXIT_RESOURCE = (BudgetExceeded, PrecisionExhausted, RangeTooLarge)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    except _EXIT_RESOURCE as exc:
        _report_error(exc)
        return 2
    except _EXIT_VALIDATION as exc:
        _report_error(exc)
        return 1
    except PSLabError as exc:
        _report_error(exc)
        return 1


def _report_error(exc: Exception) -> None:
    obj = {"schema_version": SCHEMA_VERSION,
           "error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(obj) + "\n")


if __name__ == "__main__":
    sys.exit(main())
