import math
from fractions import Fraction

import pytest

from pslab.diophantine import (
    convergents,
    select_denominator,
    verify_dirichlet,
    x_window,
)
from pslab.errors import ParameterRange, RationalInput


class TestConvergents:
    def test_sqrt2_up_to_12(self):
        got = [(r.a, r.q) for r in convergents("sqrt2", max_q=12)]
        assert got == [(1, 1), (3, 2), (7, 5), (17, 12)]

    def test_golden_up_to_8(self):
        got = [(r.a, r.q) for r in convergents("golden", max_q=8)]
        # the fibonacci ratios; 13/8 sits exactly on the q <= 8 boundary
        assert got[:4] == [(2, 1), (3, 2), (5, 3), (8, 5)]
        assert got[4:] == [(13, 8)]

    def test_empty_for_nonpositive_max_q(self):
        assert convergents("sqrt2", max_q=0) == []

    def test_all_pass_dirichlet(self):
        for name in ("sqrt2", "golden", "pi", "e"):
            for r in convergents(name, count=15):
                assert math.gcd(r.a, r.q) == 1
                assert verify_dirichlet(name, r.a, r.q)

    def test_denominators_strictly_increasing(self):
        for name in ("sqrt2", "golden", "pi"):
            qs = [r.q for r in convergents(name, count=15)]
            assert all(q2 > q1 for q1, q2 in zip(qs, qs[1:]))

    def test_terminating_decimal_raises(self):
        with pytest.raises(RationalInput):
            convergents("1.41421356", max_q=10 ** 9)

    def test_long_decimal_certifies_early_terms(self):
        dec = "1.41421356237309504880168872420969807856967187537694"
        got = [(r.a, r.q) for r in convergents(dec, max_q=12)]
        assert got == [(1, 1), (3, 2), (7, 5), (17, 12)]

    def test_error_field_matches_truth(self):
        r = convergents("sqrt2", max_q=2)[-1]
        assert abs(float(r.error) - abs(math.sqrt(2) - 1.5)) < 1e-12


class TestVerifyDirichlet:
    def test_good_pair(self):
        assert verify_dirichlet("sqrt2", 3, 2) is True

    def test_gcd_failure(self):
        assert verify_dirichlet("sqrt2", 4, 2) is False
        assert verify_dirichlet("sqrt2", 14, 10) is False

    def test_far_fraction(self):
        assert verify_dirichlet("sqrt2", 1, 3) is False

    def test_rejects_bad_q(self):
        with pytest.raises(ParameterRange):
            verify_dirichlet("sqrt2", 1, 0)


class TestXWindow:
    def test_q70_reference(self):
        w = x_window(70, "0.05", "0.01")
        assert (w.lo, w.hi) == (149, 70 ** 5)

    def test_q1_degenerate(self):
        w = x_window(1, "0.05", "0.01")
        assert (w.lo, w.hi) == (1, 1)

    def test_q2_small_theta(self):
        w = x_window(2, "0.09", "0.001")
        assert (w.lo, w.hi) == (3, 38)

    def test_endpoints_certified(self):
        for q in (7, 29, 70, 169):
            w = x_window(q, "0.05", "0.01")
            e1 = 2 * Fraction(1, 20) + 10 * Fraction(1, 100)
            e2 = 1 - Fraction(1, 20) - 10 * Fraction(1, 100)
            for X in (w.lo, w.hi):
                assert X ** e1.numerator <= q ** e1.denominator
                assert X ** e2.numerator >= q ** e2.denominator
            # one step outside fails on the relevant side
            assert (w.lo - 1) ** e2.numerator < q ** e2.denominator or w.lo == 1
            assert (w.hi + 1) ** e1.numerator > q ** e1.denominator

    def test_monotone_hi_in_q(self):
        his = [x_window(q, "0.05", "0.01").hi for q in (3, 5, 8, 13, 21)]
        assert all(b >= a for a, b in zip(his, his[1:]))

    def test_parameter_gates(self):
        with pytest.raises(ParameterRange):
            x_window(5, "0.2", "0.01")  # theta >= 1/10
        with pytest.raises(ParameterRange):
            x_window(5, "0.05", "0")  # eta must be positive


class TestSelectDenominator:
    def test_reference_selection(self):
        r = select_denominator("sqrt2", 4096, "0.05", "0.01")
        assert (r.a, r.q) == (99, 70)

    def test_respects_window(self):
        X = 10 ** 6
        r = select_denominator("sqrt2", X, "0.05", "0.01")
        # X^(1/5) <= q <= X^(17/20), checked exactly
        assert r.q ** 5 >= X
        assert r.q ** 20 <= X ** 17
