import numpy as np
import pytest

import oracles
from pslab import detector as dt
from pslab.errors import ParameterRange
from pslab.harness import (
    ComparisonReport,
    coefficient_sequence,
    divisor_count_table,
    harman_compare,
    headline_count,
)
from pslab.sieve import build_sets, derived_scales, experiment_config, raw_scales

CFG4 = experiment_config(X=10 ** 4, seed=7)


class TestDivisorTable:
    def test_first_values(self):
        assert divisor_count_table(6)[1:].tolist() == [1, 2, 2, 3, 2, 4]

    def test_spot_larger(self):
        tau = divisor_count_table(360)
        assert tau[360] == 24
        assert tau[97] == 2


class TestCoefficientSequence:
    def test_all_ones(self):
        seq = coefficient_sequence("all-ones", 1, 6)
        assert seq.raw(np.arange(1, 6)).tolist() == [1, 1, 1, 1, 1]

    def test_prime_indicator(self):
        seq = coefficient_sequence("prime-indicator", 1, 11)
        got = seq.raw(np.arange(1, 11)).tolist()
        assert got == [0, 1, 1, 0, 1, 0, 1, 0, 0, 0]

    def test_divisor_cap_honored(self):
        tau = divisor_count_table(500)
        seq = coefficient_sequence("divisor-capped-random", 1, 501, seed=99, tau=tau)
        idx = np.arange(1, 501)
        vals = seq.raw(idx)
        assert np.all(vals >= 0)
        assert np.all(vals <= tau[1:501])

    def test_seed_reproducibility(self):
        a = coefficient_sequence("divisor-capped-random", 1, 100, seed=5)
        b = coefficient_sequence("divisor-capped-random", 1, 100, seed=5)
        c = coefficient_sequence("divisor-capped-random", 1, 100, seed=6)
        idx = np.arange(1, 100)
        assert np.array_equal(a.raw(idx), b.raw(idx))
        assert not np.array_equal(a.raw(idx), c.raw(idx))

    def test_detector_scaling(self):
        s = derived_scales(experiment_config(X=10 ** 6))
        poly = dt.build_approximant(s.delta.value, s.H, dt.MAJORANT)
        seq = coefficient_sequence("scaled-detector-coeffs", -s.H, s.H + 1,
                                   role="d", detector_poly=poly,
                                   scale=float(s.delta.value))
        got = seq.starred(np.array([3, -3]))
        want = float(poly.coeffs[2]) / float(s.delta.value)
        assert got.tolist() == [want, want]
        # c*_l = c_l / delta stays within the lemma-cap ratio
        assert seq.max_abs_starred <= 3.0

    def test_unknown_kind(self):
        with pytest.raises(ParameterRange):
            coefficient_sequence("white-noise", 1, 10)


class TestHarmanCompare:
    def test_type1_against_oracle_1e4(self):
        rep = harman_compare("typeI", CFG4)
        want = oracles.type1_sides("sqrt2", "0", "1.05", "0.05", "0.01", 10 ** 4)
        assert rep.lhs_A == want["lhs"]
        assert rep.rhs_B_scaled == pytest.approx(want["rhs_scaled"], rel=1e-12)
        assert rep.relative == pytest.approx(want["relative"], rel=1e-9)

    def test_hand_enumerated_x16(self):
        # X=16: m <= 16^(15/22) = 6.6 -> m in 1..6; n with mn in [8, 16)
        cfg = experiment_config(X=16)
        A, _ = build_sets(cfg)
        A_set = set(A.tolist())
        lhs = rhs = 0
        for m in range(1, 7):
            for n in range((16 + 2 * m - 1) // (2 * m), (15 // m) + 1):
                if 8 <= m * n < 16:
                    rhs += 1
                    lhs += 1 if m * n in A_set else 0
        rep = harman_compare("typeI", cfg)
        s = derived_scales(cfg)
        assert rep.lhs_A == lhs
        assert rep.rhs_B_scaled == pytest.approx(float(s.lam.value) * rhs)

    def test_empty_A_annihilates_lhs(self):
        rep = harman_compare("typeI", CFG4, A=np.empty(0, dtype=np.int64))
        assert rep.lhs_A == 0.0
        assert rep.deviation == rep.rhs_B_scaled

    def test_collapse_when_A_equals_B(self):
        # vacuous thresholds make A = B, so lhs equals the unscaled rhs and
        # the relative deviation is |1 - lambda| / lambda
        cfg = experiment_config(X=200)
        s = raw_scales(cfg.gamma, "0.9", "0.9", X=200)
        A = np.arange(100, 200, dtype=np.int64)
        rep = harman_compare("typeI", cfg, A=A, scales=s)
        lam = float(s.lam.value)
        assert rep.relative == pytest.approx(abs(1 - lam) / lam, rel=1e-9)

    def test_type2_requires_window(self):
        with pytest.raises(ParameterRange):
            harman_compare("typeII", experiment_config(X=16))

    def test_nonnegative_sides(self):
        for kind, b in (("typeI", None), ("typeII", "divisor-capped-random")):
            rep = harman_compare(kind, CFG4, a_kind="divisor-capped-random",
                                 b_kind=b)
            assert rep.lhs_A >= 0
            assert rep.rhs_B_scaled >= 0


class TestHeadline:
    def test_oracle_equality_1e4(self):
        rep = headline_count(CFG4)
        want = oracles.headline_counts("sqrt2", "0", "1.05", "0.05", "0.01", 10 ** 4)
        assert rep.count_A_primes == want["count_A_primes"]
        assert rep.count_theorem == want["count_theorem"]
        assert rep.count_B_primes == want["count_B_primes"]

    def test_b_count_is_prime_count(self):
        rep = headline_count(CFG4)
        assert rep.count_B_primes == len(oracles.primes_between(5000, 10 ** 4))

    def test_a_subset_of_b(self):
        rep = headline_count(CFG4)
        assert rep.count_A_primes <= rep.count_B_primes

    def test_theorem_threshold_dominates_A_version(self):
        # p^-theta >= X^-theta for p < X, and the fractional condition
        # implies representability here, so the theorem count dominates
        rep = headline_count(experiment_config(X=4000))
        assert rep.count_theorem >= rep.count_A_primes

    def test_harman_implies_theorem(self):
        rep = headline_count(CFG4)
        if rep.harman_satisfied and rep.count_B_primes > 0:
            assert rep.theorem_satisfied

    def test_report_fields(self):
        rep = headline_count(CFG4)
        d = rep.as_dict()
        assert d["schema_version"] == 1
        assert d["harman_threshold"] == pytest.approx(rep.lam / 10 * rep.count_B_primes)
