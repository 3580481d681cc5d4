"""Acceptance gate: the package's exit criteria, one test per criterion.

Each criterion prints one PASS/FAIL line (run with ``pytest -s`` to see
them inline).  Tolerances are pinned here, not configurable.
"""

import json
import math
import time
from contextlib import contextmanager

import numpy as np

from bergsob import bergman, cli, geometry, measure, regularity, special, suites
from bergsob.geometry import DomainParams

MU_GEOMETRY = (1.5, 2.0, 2.5, 3.0, 4.2857142857142856)
MU_MOMENTS = (1.5, 2.0, 3.0)


@contextmanager
def criterion(number, label, budget=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} ({label}): FAIL "
              f"[{time.perf_counter() - start:.1f}s]")
        raise
    elapsed = time.perf_counter() - start
    print(f"ACCEPTANCE {number} ({label}): PASS [{elapsed:.1f}s]")
    if budget is not None:
        assert elapsed < budget, f"criterion {number} exceeded {budget}s budget"


def test_criterion_1_special_function_suite():
    with criterion(1, "special-function suite", budget=10.0):
        grid = np.exp(np.linspace(math.log(1e-2), math.log(50.0), 6))
        for x in grid:
            for y in grid:
                assert special.alpha_recursion_residual(float(x), float(y)) <= 1e-10
        for x in grid:
            for y in (-3.0, 0.0, 2.0):
                assert special.beta_recursion_residual(float(x), y) <= 1e-10
        for s in (0.0, 0.1, 0.2, 0.3, 0.4, 0.49):
            for x in np.linspace(2.0 * s + 0.05, 12.0, 5):
                for y in np.linspace(2.0 * s + 0.05, 12.0, 5):
                    assert special.alpha_holder_margin(float(x), float(y), s) >= -1e-9
            for x in np.linspace(4.0 * s + 0.05, 12.0, 5):
                for y in (-3.0, 0.0, 0.5, 4.0):
                    assert special.beta_holder_margin(float(x), y, s) >= -1e-9
        for x in np.exp(np.linspace(math.log(0.05), math.log(40.0), 5)):
            for y in np.exp(np.linspace(math.log(0.05), math.log(40.0), 5)):
                a = special.alpha_eval(float(x), float(y), method="lgamma")
                b = special.alpha_eval(float(x), float(y), method="quadrature")
                assert abs(a - b) / a <= 1e-10


def test_criterion_2_moment_cross_validation():
    with criterion(2, "closed form vs quadrature, 500+ triples", budget=60.0):
        rng = np.random.default_rng(20240902)
        checked = 0
        per_mu = 168
        for mu in MU_MOMENTS:
            params = DomainParams(mu)
            done = 0
            while done < per_mu:
                s = float(rng.uniform(0.0, 0.45))
                y = float(rng.uniform(-4.0, 4.0))
                x = float(rng.uniform(mu * (s - 0.9), 3.0))
                m = measure.MomentArgs(x, y, s, params)
                if measure.integrability_margin(m) < 0.1:
                    continue
                c = measure.lambda_closed(m)
                q = measure.lambda_quadrature(m)
                assert abs(c.value - q.value) / c.value <= 1e-8, m
                done += 1
                checked += 1
        assert checked >= 500


def test_criterion_3_base_moment_desk_check():
    with criterion(3, "lam(0,0,0) = 2 pi^3 mu"):
        for mu in MU_MOMENTS:
            v = measure.lambda_closed(measure.MomentArgs(0.0, 0.0, 0.0, DomainParams(mu)))
            expected = 2.0 * math.pi**3 * mu
            assert abs(v.value - expected) / expected <= 1e-10


def test_criterion_4_geometry_suite():
    with criterion(4, "geometry residuals on seeded samples"):
        rng = np.random.default_rng(20240903)
        for mu in MU_GEOMETRY:
            params = DomainParams(mu)
            for w in geometry.sample_interior(params, 1000, rng):
                k = int(rng.integers(-2, 3))
                z = geometry.inverse_map(params, w, k)
                v = geometry.forward_map(params, z)
                assert abs(v.w1 - w.w1) <= 1e-12 and abs(v.w2 - w.w2) <= 1e-12
                rho = geometry.rho_tilde(z)
                t = abs(v.w1) ** mu
                transported = 4.0 * t * (t - math.cos(math.log(abs(v.w2) ** 2)))
                assert abs(rho - transported) <= 1e-12
                assert abs(geometry.delta0(params, v) + rho / 4.0) <= 1e-12
                t1, t2 = rng.uniform(-math.pi, math.pi, size=2)
                zz = geometry.isometry_apply(params, t1, t2, z)
                vv = geometry.forward_map(params, zz)
                assert abs(vv.w1 - np.exp(1j * t1) * w.w1) <= 1e-12
                assert abs(vv.w2 - np.exp(1j * t2) * w.w2) <= 1e-12
                assert geometry.frame_at(params, w).duality_residual() <= 1e-12
        boundary = geometry.sample_boundary_cover(1000, rng)
        assert sum(1 for z in boundary if z.z1 == 0) > 0
        for z in boundary:
            levi = geometry.levi_form_boundary(z)
            assert levi >= -1e-10
            if z.z1 == 0:
                assert levi == 0.0


def test_criterion_5_orthonormality():
    with criterion(5, "Gram matrices are the identity"):
        params = DomainParams(3.0)
        for p in (0, 1, 2):
            for s in (0.0, 0.2, 0.4):
                idx = bergman.basis_indices(p, s, params, 25)
                G = bergman.gram_matrix(idx, s, params)
                off = np.abs(G - np.diag(np.diag(G)))
                assert np.max(off) <= 1e-8, (p, s)
                assert np.max(np.abs(np.diag(G) - 1.0)) <= 1e-6, (p, s)


def test_criterion_6_threshold_sharpness():
    with criterion(6, "sharpness sandwich over (r, p)", budget=300.0):
        for r in (0.1, 0.2, 0.3, 0.4):
            for p in (0, 1, 2):
                mu = regularity.mu_for_threshold(r, p)
                params = DomainParams(mu)
                cert = regularity.continuity_certificate(params, p, r - 0.02)
                assert math.isfinite(cert.sup_ratio)
                assert cert.sup_ratio <= cert.bound_used + 1e-9, (r, p)
                wit = regularity.divergence_witness(params, p, r)
                if abs(wit.analytic_exponent) <= 1e-9:
                    assert wit.growth.kind == "log", (r, p, wit.growth)
                else:
                    assert abs(wit.growth.exponent - wit.analytic_exponent) <= 0.05


def test_criterion_7_counterexample_transport():
    with criterion(7, "smooth counterexample hits the witness"):
        params = DomainParams(3.0)
        for p in (0, 1, 2):
            f = regularity.smooth_counterexample(params, p)
            res = bergman.project(f, params)
            witness = regularity.witness_index(params, p)
            assert set(res.coefficients) == {witness}, (p, res.coefficients)
            assert res.coefficients[witness].real > 0.0
            thr = regularity.threshold(params, p)
            assert bergman.basis_norm_sq(witness, thr.r, params).kind == "divergent"


def test_criterion_8_threshold_discontinuity():
    with criterion(8, "threshold jumps in mu at degree 0 only"):
        for m in (2, 3, 4):
            lo = regularity.threshold(DomainParams(m - 1e-9), 0).r
            hi = regularity.threshold(DomainParams(m + 1e-9), 0).r
            predicted = min(0.5, 2.0 / m) - min(0.5, 1.0 / m)
            assert abs((lo - hi) - predicted) <= 1e-8, m
            lo2 = regularity.threshold(DomainParams(m - 1e-9), 2).r
            hi2 = regularity.threshold(DomainParams(m + 1e-9), 2).r
            assert abs(lo2 - hi2) <= 1e-8, m


def test_criterion_9_verify_determinism(tmp_path):
    with criterion(9, "verify is byte-deterministic"):
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        assert cli.main(["verify", "--seed", "20240904", "--output", str(first)]) == 0
        assert cli.main(["verify", "--seed", "20240904", "--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        payload = json.loads(first.read_text())
        assert payload["all_passed"] is True
        assert {s["name"] for s in payload["suites"]} == set(suites.SUITES)
