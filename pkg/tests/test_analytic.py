import math

import numpy as np
import pytest

from pdx import analytic
from pdx.analytic import (
    asymptotic_max_degree,
    build_model,
    hilhorst_pmf,
    integral_pmf_mc,
    interpolate,
    l_d,
    one_value_windows,
    predictor_i,
    predictor_j,
    tail_scaling_diagnostics,
)
from pdx.degree_stats import Histogram
from pdx.errors import ModelBuildError


@pytest.fixture(scope="module")
def model():
    return build_model("hilhorst")


@pytest.fixture(scope="module")
def tail(model):
    return interpolate(model)


class TestHilhorstPmf:
    def test_remark_value_k16(self):
        # the source text evaluates its formula at k=16 as ~7.6e-8 with the
        # two-digit constant 0.34; allow for that rounding
        assert hilhorst_pmf(16) == pytest.approx(7.6e-8, rel=0.05)

    def test_remark_value_k14(self):
        assert hilhorst_pmf(14) == pytest.approx(1.0e-5, rel=0.05)

    def test_value_k15(self):
        # frozen from an independent log-gamma evaluation (mpmath, 50 digits)
        assert hilhorst_pmf(15) == pytest.approx(9.382208739726733e-07,
                                                 rel=1e-12)

    def test_k_below_three_rejected(self):
        with pytest.raises(ValueError):
            hilhorst_pmf(2)

    def test_mpmath_cross_check(self):
        import mpmath

        mpmath.mp.dps = 50
        for k in (10, 16, 40, 100):
            exact = (mpmath.mpf("0.34") / (4 * mpmath.pi ** 2)
                     * (8 * mpmath.pi ** 2) ** k / mpmath.factorial(2 * k))
            assert hilhorst_pmf(k) == pytest.approx(float(exact), rel=1e-10)


class TestModel:
    def test_tail_value(self, model):
        assert model.G(15) == pytest.approx(8.03e-8, rel=0.01)

    def test_tail_is_dominated_by_first_term(self, model):
        # G(k)/q(k+1) - 1 ~ q(k+2)/q(k+1) = 8 pi^2/((2k+3)(2k+4)): about
        # 4.3% at k=20, under 1% from k=45 on, vanishing like k^-2
        prev = None
        for k in range(20, 120):
            excess = model.G(k) / model.q(k + 1) - 1.0
            expected = 8 * math.pi ** 2 / ((2 * k + 3) * (2 * k + 4))
            assert excess == pytest.approx(expected, rel=0.05)
            if prev is not None:
                assert excess < prev
            prev = excess
        assert model.G(45) / model.q(46) - 1.0 < 0.01

    def test_q_ratio_vanishes(self, model):
        r = [model.q(k) / model.q(k - 1) for k in (20, 50, 100)]
        assert r[0] > r[1] > r[2]
        assert r[2] == pytest.approx(8 * math.pi ** 2 / (199 * 200), rel=1e-9)

    def test_out_of_range(self, model):
        with pytest.raises(ValueError):
            model.G(model.k_max + 5)

    def test_parametric_model(self):
        m = build_model("parametric", dim=3, c=1.0)
        t = interpolate(m)
        assert predictor_i(t, 1e12) >= m.k_min

    def test_parametric_needs_constant(self):
        with pytest.raises(ValueError):
            build_model("parametric", dim=3)

    def test_empirical_model(self):
        h = Histogram({5: 500, 6: 1000, 7: 300, 8: 120, 9: 40, 10: 12, 11: 4,
                       12: 1}, 1977)
        m = build_model(h, dim=2, k_min=7)
        assert m.q(8) == pytest.approx(120 / 1977)
        assert m.G(8) == pytest.approx((40 + 12 + 4 + 1) / 1977)

    def test_empirical_non_monotone_rejected(self):
        h = Histogram({7: 10, 8: 20, 9: 5}, 35)
        with pytest.raises(ModelBuildError):
            build_model(h, dim=2, k_min=7)


class TestInterpolation:
    def test_anchored_at_integers(self, model, tail):
        for k in range(model.k_min, 30):
            assert tail.gc(k) == pytest.approx(model.G(k), rel=1e-12)

    def test_geometric_mean_at_half_integers(self, model, tail):
        for k in range(model.k_min, 25):
            expected = math.sqrt(model.G(k) * model.G(k + 1))
            assert tail.gc(k + 0.5) == pytest.approx(expected, rel=1e-12)

    def test_h_c_strictly_increasing(self, tail):
        xs = np.linspace(tail.k_min, 60, 700)
        hs = [tail.h_c(float(x)) for x in xs]
        assert all(b > a for a, b in zip(hs, hs[1:]))

    def test_gc_inverse_roundtrip(self, model, tail):
        for k in range(model.k_min, 40):
            assert tail.gc_inverse(model.G(k)) == pytest.approx(k, abs=1e-9)
        for x in (12.25, 17.75, 33.5):
            p = tail.gc(x)
            assert tail.gc_inverse(p) == pytest.approx(x, abs=1e-9)

    def test_gc_inverse_monotone(self, model, tail):
        k = 14
        p = model.G(k)
        assert tail.gc_inverse(p * 1.0001) < k

    def test_gc_inverse_domain(self, model, tail):
        with pytest.raises(ValueError):
            tail.gc_inverse(model.G(model.k_min) * 1.1)
        with pytest.raises(ValueError):
            tail.gc_inverse(0.0)


class TestPredictor:
    def test_i_at_1e6(self, tail):
        assert predictor_i(tail, 1e6) == 14

    def test_a_rho_matches_anchor(self, tail):
        assert analytic.a_rho(tail, 1e6) == pytest.approx(14.0, abs=0.05)

    def test_j_and_ld(self, tail):
        assert l_d(2) == 2 and l_d(3) == 3 and l_d(4) == 3
        assert predictor_j(tail, 1e6, 2) == 13

    def test_nondecreasing_in_rho(self, tail):
        rhos = np.logspace(4, 40, 120)
        vals = [predictor_i(tail, float(r)) for r in rhos]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_rho_out_of_range(self, tail):
        with pytest.raises(ValueError):
            predictor_i(tail, 50.0)  # 1/rho above G(k_min)


class TestAsymptotic:
    def test_d2_value(self):
        assert asymptotic_max_degree(1e6, 2) == pytest.approx(2.63, abs=0.01)

    def test_d3_doubles(self):
        assert asymptotic_max_degree(1e6, 3) == pytest.approx(
            2 * asymptotic_max_degree(1e6, 2)
        )

    def test_domain(self):
        with pytest.raises(ValueError):
            asymptotic_max_degree(math.e ** math.e, 2)


class TestOneValueWindows:
    def test_roundtrip(self, tail):
        for i in range(tail.k_min + 1, tail.k_min + 10):
            rho_i = one_value_windows(tail, i)
            assert predictor_i(tail, rho_i) == i
            assert predictor_i(tail, rho_i - 1) == i - 1

    def test_strictly_increasing(self, tail):
        vals = [one_value_windows(tail, i)
                for i in range(tail.k_min + 1, tail.k_min + 12)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_ratio_matches_interpolated_tail(self, tail):
        r14 = one_value_windows(tail, 14)
        r15 = one_value_windows(tail, 15)
        expected = tail.gc(13.5) / tail.gc(14.5)
        assert r15 / r14 == pytest.approx(expected, rel=1e-9)

    def test_domain(self, tail):
        with pytest.raises(ValueError):
            one_value_windows(tail, tail.k_min)


class TestTailScaling:
    def test_upper_product_below_one(self, tail):
        for rho in (1e6, 1e10, 1e20, 1e40, 1e60):
            d = tail_scaling_diagnostics(tail, rho)
            assert d["rho_G_upper"] <= 1.0

    def test_lower_product_at_least_one(self, tail):
        for rho in (1e6, 1e10, 1e20, 1e40, 1e60):
            d = tail_scaling_diagnostics(tail, rho)
            assert d["rho_G_lower"][0] >= 1.0

    def test_point_value_at_1e6(self, tail, model):
        d = tail_scaling_diagnostics(tail, 1e6)
        assert 1e6 * model.G(14) == pytest.approx(1.0, abs=0.05)

    def test_smooth_product_increases(self, tail):
        vals = [tail_scaling_diagnostics(tail, rho)["rho_Gc_smooth"]
                for rho in (1e6, 1e10, 1e20, 1e40, 1e60)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestEnvelopeExponent:
    def test_literal_ratio_increases_toward_two(self):
        # -log q(k)/(k log k) = 2 - (log(8 pi^2) + 2 - 2 log 2)/log k + o(1):
        # far from 2 at accessible k, strictly increasing toward it
        drag = math.log(8 * math.pi ** 2) + 2.0 - 2.0 * math.log(2.0)
        ratios = {}
        for k in (50, 100, 200, 400):
            r = -analytic.hilhorst_log_pmf(k) / (k * math.log(k))
            ratios[k] = r
            assert r == pytest.approx(2.0 - drag / math.log(k), abs=0.06)
        assert ratios[50] < ratios[100] < ratios[200] < ratios[400] < 2.0

    def test_fitted_klogk_coefficient_near_two(self):
        # least squares of -log q(k) = a*(k log k) + b*k over k in [50, 200]
        ks = np.arange(50, 201, 10)
        y = np.array([-analytic.hilhorst_log_pmf(int(k)) for k in ks])
        X = np.stack([ks * np.log(ks), ks], axis=1)
        a, b = np.linalg.lstsq(X, y, rcond=None)[0]
        assert abs(a - 2.0) < 0.2


class TestIntegralPmfMc:
    def test_bad_args(self):
        with pytest.raises(ValueError):
            integral_pmf_mc(6, n=10)
        with pytest.raises(ValueError):
            integral_pmf_mc(3, n=0)

    def test_k3_matches_reference(self):
        # P(D = 3) ~ 0.0112 (known typical-cell value); MC with 4e5 samples
        # has se ~ 0.004, keep a wide but meaningful window
        est = integral_pmf_mc(3, n=400_000, seed=1)
        assert est.hits > 0
        assert abs(est.value - 0.0112) < 4 * est.stderr + 0.002
        assert not est.boundary_warning

    @pytest.mark.slow
    def test_doubling_r_keeps_estimate(self):
        a = integral_pmf_mc(3, R=2.0, n=2_000_000, seed=5)
        b = integral_pmf_mc(3, R=4.0, n=32_000_000, seed=6)
        comb = math.hypot(a.stderr, b.stderr)
        assert abs(a.value - b.value) < 3 * comb
