import numpy as np
import pytest
from mpmath import mpf

from pslab import detector as dt
from pslab.errors import ParameterRange, PrecisionExhausted


def sandwich_violation(xi: float, K: int, xs: np.ndarray) -> float:
    mn, mj = dt.detector_pair(str(xi), K)
    ind = (np.abs(xs - np.round(xs)) < xi).astype(np.float64)
    v1 = np.max(dt.evaluate_many(mn, xs) - ind, initial=0.0)
    v2 = np.max(ind - dt.evaluate_many(mj, xs), initial=0.0)
    return max(v1, v2)


class TestIndicator:
    def test_outside(self):
        assert dt.indicator("0.25", "0.3") == 0

    def test_inside_shifted(self):
        assert dt.indicator("0.25", "1.1") == 1

    def test_half_width_accepts_everything(self):
        for x in ("0.1", "0.37", "3.49"):
            assert dt.indicator("0.5", x) == 1

    def test_exact_boundary_raises(self):
        with pytest.raises(PrecisionExhausted):
            dt.indicator("0.25", "0.25")


class TestConstruction:
    def test_majorant_constant_term(self):
        p = dt.build_approximant("0.01", 99, dt.MAJORANT)
        assert float(p.constant_term) == pytest.approx(0.03, abs=1e-30)

    def test_minorant_constant_term(self):
        p = dt.build_approximant("0.1", 10, dt.MINORANT)
        assert float(p.constant_term) == pytest.approx(0.2 - 1 / 11, abs=1e-16)

    def test_coefficient_cap_at_k3(self):
        for side in (dt.MINORANT, dt.MAJORANT):
            p = dt.build_approximant("0.2", 40, side)
            assert abs(p.coefficient(3)) <= 0.5

    def test_coefficient_bounds_everywhere(self):
        for xi in ("0.25", "0.1", "0.01"):
            for K in (10, 100, 1000):
                for side in (dt.MINORANT, dt.MAJORANT):
                    p = dt.build_approximant(xi, K, side)
                    cap_flat = 2 * float(p.xi) + 1 / (K + 1)
                    for k in range(1, K + 1):
                        cap = min(cap_flat, 1.5 / k)
                        assert abs(float(p.coeffs[k - 1])) <= cap * (1 + 1e-15)

    def test_conjugate_symmetry_real(self):
        p = dt.build_approximant("0.1", 25, dt.MAJORANT)
        for k in (1, 7, 25):
            assert p.coefficient(-k) == p.coefficient(k).conjugate()

    def test_xi_gates(self):
        with pytest.raises(ParameterRange):
            dt.build_approximant("0.5", 10, dt.MAJORANT)
        with pytest.raises(ParameterRange):
            dt.build_approximant("1.0", 10, dt.MAJORANT)
        with pytest.raises(ParameterRange):
            dt.build_approximant("0.9", 10, dt.MINORANT)  # mean would pass 1

    def test_degenerate_wide_interval(self):
        p = dt.build_approximant("0.501187", 2, dt.MINORANT)
        assert not p.coeffs.any()
        assert float(p.constant_term) == pytest.approx(2 * 0.501187 - 1 / 3)

    def test_cache_returns_same_object(self):
        a = dt.build_approximant("0.1", 10, dt.MAJORANT)
        b = dt.build_approximant("0.1", 10, dt.MAJORANT)
        assert a is b


class TestEvaluation:
    def test_empty_sum_is_constant(self):
        p = dt.build_approximant("0.6", 3, dt.MINORANT)  # degenerate: no coeffs
        v = dt.eval_approximant(p, "0.37")
        assert float(v.value) == pytest.approx(2 * 0.6 - 0.25, abs=1e-25)

    def test_periodicity(self):
        p = dt.build_approximant("0.1", 30, dt.MAJORANT)
        a = dt.eval_approximant(p, "0.321")
        b = dt.eval_approximant(p, "1.321")
        assert abs(a.value - b.value) < mpf(10) ** -30

    def test_majorant_at_origin_dominates_one(self):
        p = dt.build_approximant("0.1", 100, dt.MAJORANT)
        assert float(dt.eval_approximant(p, 0).value) >= 1.0

    def test_scalar_matches_batch(self):
        p = dt.build_approximant("0.17", 60, dt.MINORANT)
        xs = np.array([0.0, 0.05, 0.21, 0.7, 0.96])
        batch = dt.evaluate_many(p, xs)
        for x, b in zip(xs.tolist(), batch.tolist()):
            assert float(dt.eval_approximant(p, str(x)).value) == pytest.approx(b, abs=1e-12)

    def test_equispaced_matches_direct(self):
        p = dt.build_approximant("0.23", 17, dt.MAJORANT)
        n = 64
        fft_vals = dt.evaluate_equispaced(p, n)
        direct = dt.evaluate_many(p, np.arange(n) / n)
        assert np.max(np.abs(fft_vals - direct)) < 1e-12


class TestSandwich:
    @pytest.mark.parametrize("xi", [0.25, 0.1, 0.01])
    @pytest.mark.parametrize("K", [10, 100])
    def test_no_violations(self, xi, K):
        rng = np.random.default_rng(int(xi * 1000) + K)
        xs = np.concatenate([np.arange(20001) / 20001.0, rng.random(2000)])
        assert sandwich_violation(xi, K, xs) <= 1e-12

    def test_mean_value_extracts_constant(self):
        p = dt.build_approximant("0.1", 100, dt.MAJORANT)
        vals = dt.evaluate_equispaced(p, 10 ** 6)
        assert abs(vals.mean() - float(p.constant_term)) < 1e-6


class TestProductBounds:
    def test_collapse_when_sides_agree(self):
        # same polynomial used for both sides collapses the lower combination
        p = dt.build_approximant("0.1", 20, dt.MAJORANT)
        lo, up = dt.product_bounds("0.03", "0.31", (p, p), (p, p))
        assert abs(lo.value - up.value) < mpf(10) ** -25

    def test_pointwise_sandwich(self):
        dpair = dt.detector_pair("0.3", 12)
        spair = dt.detector_pair("0.05", 25)
        for x, y, want in (("0.31", "0.4", 0), ("0.1", "0.01", 1),
                           ("0.45", "0.02", 0)):
            lo, up = dt.product_bounds(x, y, dpair, spair)
            ind = dt.indicator("0.3", x) * dt.indicator("0.05", y)
            assert want == ind
            assert float(lo.value) <= ind + 1e-12
            assert ind <= float(up.value) + 1e-12

    def test_grid_sandwich_small(self):
        dpair = dt.detector_pair("0.3", 12)
        spair = dt.detector_pair("0.05", 25)
        xs = np.arange(101) / 101.0
        ys = np.arange(97) / 97.0
        lo, up = dt.product_bounds_grid(xs, ys, dpair, spair)
        ind = np.outer((np.abs(xs - np.round(xs)) < 0.3),
                       (np.abs(ys - np.round(ys)) < 0.05)).astype(float)
        assert np.max(lo - ind, initial=0) <= 1e-12
        assert np.max(ind - up, initial=0) <= 1e-12
