"""Moment contracts: integrability, closed form vs quadrature, ratio
bounds, truncation growth.

The frozen moment references were computed through the Gamma
representations of both special-function factors at 25-digit precision
and independently confirmed by adaptive 2D quadrature of the raw
r-coordinate integral (agreement ~5e-11).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergsob import measure
from bergsob.errors import DomainError
from bergsob.geometry import DomainParams
from bergsob.measure import MomentArgs

LAM_1_2_03_MU2 = 808.844188090424271
LAM_M1_1_02_MU25 = 1306.67775891974908

TWO_PI_CUBED = 2.0 * math.pi**3


class TestIntegrability:
    def test_mu3_examples(self):
        p = DomainParams(3.0)
        assert measure.is_integrable(MomentArgs(-2.0, 0.0, 0.0, p))
        assert not measure.is_integrable(MomentArgs(-2.0, 0.0, 1.0 / 3.0 + 1e-12, p))

    def test_half_cap(self):
        p = DomainParams(2.0)
        for x in (-1.0, 0.0, 10.0):
            assert not measure.is_integrable(MomentArgs(x, 0.0, 0.5, p))

    def test_named_violations(self):
        p = DomainParams(2.0)
        v = measure.lambda_closed(MomentArgs(0.0, 0.0, 0.7, p))
        assert v.kind == "divergent" and "s < 1/2" in v.violated_condition
        v = measure.lambda_closed(MomentArgs(-3.0, 0.0, 0.0, p))
        assert v.kind == "divergent" and "x/mu + 1 - s > 0" in v.violated_condition

    def test_exact_borderline_is_divergent(self):
        # x = mu (s - 1) with dyadic values: the margin is exactly zero
        p = DomainParams(2.0)
        m = MomentArgs(-1.5, 0.0, 0.25, p)
        assert measure.integrability_margin(m) == 0.0
        assert not measure.is_integrable(m)


class TestClosedForm:
    @pytest.mark.parametrize("mu", [1.5, 2.0, 3.0])
    def test_base_moment(self, mu):
        v = measure.lambda_closed(MomentArgs(0.0, 0.0, 0.0, DomainParams(mu)))
        assert v.is_finite
        assert v.value == pytest.approx(TWO_PI_CUBED * mu, rel=1e-10)

    def test_frozen_references(self):
        v = measure.lambda_closed(MomentArgs(1.0, 2.0, 0.3, DomainParams(2.0)))
        assert v.value == pytest.approx(LAM_1_2_03_MU2, rel=1e-11)
        v = measure.lambda_closed(MomentArgs(-1.0, 1.0, 0.2, DomainParams(2.5)))
        assert v.value == pytest.approx(LAM_M1_1_02_MU25, rel=1e-11)


class TestQuadratureCross:
    def test_base_moment(self):
        m = MomentArgs(0.0, 0.0, 0.0, DomainParams(2.0))
        q = measure.lambda_quadrature(m, tol=1e-10)
        assert q.value == pytest.approx(TWO_PI_CUBED * 2.0, rel=1e-8)

    def test_generic_point(self):
        m = MomentArgs(1.0, 2.0, 0.3, DomainParams(2.0))
        c = measure.lambda_closed(m)
        q = measure.lambda_quadrature(m)
        assert abs(c.value - q.value) / c.value <= 1e-8

    def test_near_threshold(self):
        # margin x/mu + 1 - s = 0.05: looser tolerance still binds
        p = DomainParams(2.0)
        m = MomentArgs(2.0 * (0.05 - 1.0 + 0.3), 1.0, 0.3, p)
        assert measure.integrability_margin(m) == pytest.approx(0.05, abs=1e-12)
        c = measure.lambda_closed(m)
        q = measure.lambda_quadrature(m)
        assert abs(c.value - q.value) / c.value <= 1e-6

    def test_divergent_rejected(self):
        with pytest.raises(DomainError):
            measure.lambda_quadrature(MomentArgs(0.0, 0.0, 0.6, DomainParams(2.0)))

    def test_sweep(self):
        rng = np.random.default_rng(7)
        count = 0
        for mu in (1.5, 2.0, 3.0):
            p = DomainParams(mu)
            while count < 60 * (1 + (mu > 1.5) + (mu > 2.0)):
                s = float(rng.uniform(0.0, 0.45))
                y = float(rng.uniform(-4.0, 4.0))
                x = float(rng.uniform(mu * (s - 0.9), 3.0))
                m = MomentArgs(x, y, s, p)
                if measure.integrability_margin(m) < 0.1:
                    continue
                c = measure.lambda_closed(m)
                q = measure.lambda_quadrature(m)
                assert abs(c.value - q.value) / c.value <= 1e-8, m
                count += 1


class TestRatio:
    def test_unweighted_ratio_is_one(self):
        assert measure.lambda_ratio(1.0, 0.0, 0.0, DomainParams(2.0)) == 1.0

    def test_cauchy_schwarz_floor(self):
        p = DomainParams(2.0)
        for (x, y, s) in [(1.0, 0.0, 0.25), (-0.5, 2.0, 0.1), (3.0, -1.0, 0.45)]:
            assert measure.lambda_ratio(x, y, s, p) >= 1.0 - 1e-12

    def test_spec_point_under_bound(self):
        # bound expression (3*2*4)/(2.5*0.5*3) at mu=2, x=1, s=1/4
        p = DomainParams(2.0)
        r = measure.lambda_ratio(1.0, 0.0, 0.25, p)
        bound = measure.lambda_ratio_bound(1.0, 0.25, p)
        assert bound == pytest.approx((3.0 * 2.0 * 4.0) / (2.5 * 0.5 * 3.0), rel=1e-14)
        assert 1.0 <= r <= bound

    def test_lattice_sandwich(self):
        p = DomainParams(2.0)
        for s in (0.1, 0.2, 0.3, 0.4):
            jmin = math.floor((s - 1.0) * p.mu) + 1
            for j in range(jmin, 7):
                ratios = measure.lambda_ratio_family(
                    float(j), np.arange(-6.0, 7.0), s, p
                )
                bound = measure.lambda_ratio_bound(float(j), s, p)
                assert np.all(ratios >= 1.0 - 1e-9)
                assert np.all(ratios <= bound + 1e-9)

    def test_divergent_weight_rejected(self):
        with pytest.raises(DomainError):
            measure.lambda_ratio(-1.9, 0.0, 0.4, DomainParams(2.0))


class TestTruncation:
    def test_monotone_convergence(self):
        m = MomentArgs(0.5, 1.0, 0.2, DomainParams(2.0))
        full = measure.lambda_closed(m).value
        vals = [measure.lambda_truncated(m, 2.0**-k) for k in (2, 4, 8, 12, 16)]
        assert all(a <= b + 1e-9 * full for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(full, rel=1e-8)

    def test_log_mode(self):
        # 2x/mu + 2 - 2s = 0: truncations grow linearly in |log eps|
        m = MomentArgs(-2.0, 0.0, 0.2, DomainParams(2.5))
        fit = measure.truncation_growth_fit(m)
        assert fit.kind == "log"
        assert fit.residual <= 1e-3

    def test_power_mode(self):
        m = MomentArgs(-2.2, 0.0, 0.2, DomainParams(2.5))
        fit = measure.truncation_growth_fit(m)
        assert fit.kind == "power"
        assert fit.exponent == pytest.approx(-0.16, abs=0.05)

    def test_mixed_mode_power_survives_log(self):
        # exponent -0.1 with a simultaneous logarithmic component
        m = MomentArgs(-1.5, 0.0, 0.45, DomainParams(2.5))
        fit = measure.truncation_growth_fit(m)
        assert fit.kind == "power"
        assert fit.exponent == pytest.approx(-0.1, abs=0.05)

    def test_agrees_with_predicate(self):
        p = DomainParams(2.5)
        for (x, s) in [(-2.0, 0.2), (-2.2, 0.2), (-1.5, 0.45)]:
            m = MomentArgs(x, 0.0, s, p)
            assert not measure.is_integrable(m)
            fit = measure.truncation_growth_fit(m)
            # certified growth means the values kept increasing
            assert fit.values[-1] > fit.values[0]

    def test_eps_range_checked(self):
        m = MomentArgs(0.0, 0.0, 0.0, DomainParams(2.0))
        with pytest.raises(DomainError):
            measure.lambda_truncated(m, 1.5)


class TestToleranceSchedule:
    def test_endpoints_and_interior(self):
        assert measure.default_quadrature_tol(0.2) == 1e-8
        assert measure.default_quadrature_tol(0.02) == 1e-6
        mid = measure.default_quadrature_tol(0.06)
        assert 1e-8 < mid < 1e-6


@settings(max_examples=120, deadline=None)
@given(
    mu=st.floats(1.01, 6.0),
    x=st.floats(-6.0, 6.0),
    y=st.floats(-4.0, 4.0),
    s=st.floats(-0.5, 0.8),
)
def test_closed_form_totalizes(mu, x, y, s):
    m = MomentArgs(x, y, s, DomainParams(mu))
    v = measure.lambda_closed(m)
    if measure.is_integrable(m):
        assert v.is_finite and v.value > 0.0
    else:
        assert v.kind == "divergent" and v.violated_condition
