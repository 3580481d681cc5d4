"""Threshold arithmetic, certificates, witnesses, counterexamples."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bergsob import bergman, measure, regularity
from bergsob.errors import DomainError
from bergsob.geometry import DomainParams


class TestThreshold:
    def test_integer_mu_function_case(self):
        rep = regularity.threshold(DomainParams(3.0), 0)
        assert rep.r == pytest.approx(1.0 / 3.0, abs=1e-15)
        assert rep.binding == "mu_clause"

    def test_half_cap_binds_for_forms_at_two(self):
        rep = regularity.threshold(DomainParams(2.0), 1)
        assert rep.r == 0.5
        assert rep.binding == "both"

    def test_fractional_mu_function_case(self):
        rep = regularity.threshold(DomainParams(2.5), 0)
        assert rep.r == 0.5
        assert rep.binding == "one_half"
        assert rep.clause_value == pytest.approx(0.6, abs=1e-15)

    def test_invalid_p(self):
        with pytest.raises(DomainError):
            regularity.threshold(DomainParams(2.0), 3)


class TestMuForThreshold:
    def test_function_case(self):
        mu = regularity.mu_for_threshold(0.3, 0)
        assert mu == pytest.approx(30.0 / 7.0, rel=1e-15)
        assert regularity.threshold(DomainParams(mu), 0).r == pytest.approx(
            0.3, abs=1e-12
        )

    def test_form_case(self):
        assert regularity.mu_for_threshold(0.25, 1) == pytest.approx(4.0, rel=1e-15)

    def test_half_limit(self):
        assert regularity.mu_for_threshold(0.499999, 2) == pytest.approx(
            2.0, rel=1e-5
        )

    def test_range_errors(self):
        for bad in (0.0, 0.5, 0.7):
            with pytest.raises(DomainError):
                regularity.mu_for_threshold(bad, 0)

    def test_round_trip_grid(self):
        for r in np.arange(0.05, 0.46, 0.05):
            for p in (0, 1, 2):
                mu = regularity.mu_for_threshold(float(r), p)
                back = regularity.threshold(DomainParams(mu), p).r
                assert abs(back - r) <= 1e-12
                if p == 0:
                    assert math.floor(mu) == math.ceil(1.0 / r)


class TestDiscontinuity:
    def test_function_threshold_jumps(self):
        for m in (2, 3, 4):
            lo = regularity.threshold(DomainParams(m - 1e-9), 0).r
            hi = regularity.threshold(DomainParams(m + 1e-9), 0).r
            predicted = min(0.5, 2.0 / m) - min(0.5, 1.0 / m)
            assert abs((lo - hi) - predicted) <= 1e-8

    def test_top_degree_threshold_continuous(self):
        for m in (2, 3, 4):
            lo = regularity.threshold(DomainParams(m - 1e-9), 2).r
            hi = regularity.threshold(DomainParams(m + 1e-9), 2).r
            assert abs(lo - hi) <= 1e-8


class TestContinuityCertificate:
    def test_unweighted_sup_is_one(self):
        cert = regularity.continuity_certificate(DomainParams(3.0), 0, 0.0, (10, 10))
        assert cert.sup_ratio == pytest.approx(1.0, abs=1e-12)

    def test_function_case_below_threshold(self):
        cert = regularity.continuity_certificate(DomainParams(3.0), 0, 0.3, (20, 20))
        assert cert.sup_attained_at.j >= -2
        assert cert.sup_ratio <= cert.bound_used + 1e-9

    def test_form_case_shifted_exponent(self):
        cert = regularity.continuity_certificate(DomainParams(2.0), 1, 0.4, (20, 20))
        assert cert.sup_ratio <= cert.bound_used + 1e-9
        assert math.isfinite(cert.sup_ratio)

    def test_monotone_in_s(self):
        params = DomainParams(3.0)
        sups = [
            regularity.continuity_certificate(params, 0, s, (12, 12)).sup_ratio
            for s in (0.0, 0.1, 0.2, 0.3)
        ]
        assert all(a <= b + 1e-12 for a, b in zip(sups, sups[1:]))

    def test_refuses_at_threshold(self):
        params = DomainParams(3.0)
        thr = regularity.threshold(params, 0).r
        with pytest.raises(DomainError, match="divergence_witness"):
            regularity.continuity_certificate(params, 0, thr)

    def test_empty_lattice_rejected(self):
        with pytest.raises(DomainError):
            regularity.continuity_certificate(DomainParams(3.0), 0, 0.1, (0, 5))


class TestDivergenceWitness:
    def test_log_mode_at_threshold(self):
        params = DomainParams(3.0)
        w = regularity.divergence_witness(params, 0, 1.0 / 3.0 + 1e-9)
        assert w.index.j == -2 and w.index.k == 0
        assert w.lambda0.is_finite and w.lambda_s.kind == "divergent"

    def test_exact_threshold_witness(self):
        params = DomainParams(3.0)
        thr = regularity.threshold(params, 0).r
        w = regularity.divergence_witness(params, 0, thr)
        assert w.lambda_s.kind == "divergent"
        assert w.growth.kind == "log"

    def test_power_mode_above_threshold(self):
        # mu = 2.5, p = 1, s = 0.45: exponent 2(1-mu)/mu + 2 - 2s = -0.1
        params = DomainParams(2.5)
        w = regularity.divergence_witness(params, 1, 0.45)
        assert w.analytic_exponent == pytest.approx(-0.1, abs=1e-12)
        assert w.growth.kind == "power"
        assert w.growth.exponent == pytest.approx(-0.1, abs=0.05)

    def test_below_threshold_refused(self):
        with pytest.raises(DomainError, match="below the threshold"):
            regularity.divergence_witness(DomainParams(3.0), 0, 0.2)

    def test_witness_is_unique_borderline_row_index(self):
        # every j above the witness stays admissible just below threshold
        params = DomainParams(30.0 / 7.0)
        thr = regularity.threshold(params, 0).r
        witness = regularity.witness_index(params, 0)
        s = thr - 0.02
        for j in range(witness.j, witness.j + 8):
            idx = bergman.BasisIndex(j, 0, 0, bergman.Component.FUNCTION)
            assert idx.admissible(s, params)
        assert not witness.admissible(thr, params)


class TestSmoothCounterexample:
    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_transport_is_single_witness_coefficient(self, p):
        params = DomainParams(3.0)
        f = regularity.smooth_counterexample(params, p)
        res = bergman.project(f, params)
        witness = regularity.witness_index(params, p)
        assert set(res.coefficients) == {witness}
        assert res.coefficients[witness].real > 0.0

    def test_profile_vanishes_at_inner_edge(self):
        params = DomainParams(3.0)
        f = regularity.smooth_counterexample(params, 0)
        prof = f.terms[0].profile
        r = np.array([1e-3, 1e-2, 0.1])
        vals = prof(r, np.ones_like(r)) * r ** f.terms[0].a
        assert np.all(np.isfinite(vals))
        assert vals[0] == 0.0  # exponential beats any monomial pole

    def test_wedge_preserves_coefficient(self):
        params = DomainParams(3.0)
        c1 = bergman.project(regularity.smooth_counterexample(params, 1), params)
        c2 = bergman.project(regularity.smooth_counterexample(params, 2), params)
        v1 = c1.coefficients[regularity.witness_index(params, 1)]
        v2 = c2.coefficients[regularity.witness_index(params, 2)]
        assert v1 == v2

    def test_projection_coefficient_value(self):
        # mu = 3, p = 0: coefficient is the exp-profile moment over lam(-2,0,0)
        params = DomainParams(3.0)
        res = bergman.project(regularity.smooth_counterexample(params, 0), params)
        witness = regularity.witness_index(params, 0)
        num, den = res.ratios[witness]

        def prof(r1, r2):
            with np.errstate(over="ignore", under="ignore"):
                return np.exp(-np.asarray(r1, dtype=float) ** -3.0) * np.ones(
                    np.broadcast(np.asarray(r1), np.asarray(r2)).shape
                )

        oracle = measure.radial_moment(prof, 2 * (-2.0), 0.0, params)
        lam = measure.lambda_closed(measure.MomentArgs(-2.0, 0.0, 0.0, params))
        assert num == pytest.approx(oracle.value, rel=1e-10)
        assert den == pytest.approx(lam.value, rel=1e-14)


class TestSharpnessSandwich:
    @pytest.mark.parametrize("r", [0.2, 0.4])
    @pytest.mark.parametrize("p", [0, 1, 2])
    def test_both_sides_hold(self, r, p):
        mu = regularity.mu_for_threshold(r, p)
        params = DomainParams(mu)
        cert = regularity.continuity_certificate(params, p, r - 0.02, (20, 20))
        assert cert.sup_ratio <= cert.bound_used + 1e-9
        wit = regularity.divergence_witness(params, p, r)
        if abs(wit.analytic_exponent) <= 1e-9:
            assert wit.growth.kind == "log"
        else:
            assert abs(wit.growth.exponent - wit.analytic_exponent) <= 0.05


@settings(max_examples=80, deadline=None)
@given(r=st.floats(0.01, 0.499), p=st.sampled_from([0, 1, 2]))
def test_threshold_inversion_property(r, p):
    mu = regularity.mu_for_threshold(r, p)
    assert mu > 1.0
    assert regularity.threshold(DomainParams(mu), p).r == pytest.approx(r, abs=1e-12)
