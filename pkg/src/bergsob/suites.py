"""Named invariant suites behind the ``verify`` command.

Each suite replays a module's mathematical contracts on the configured
grids with seeded sampling and reports structured pass/fail results.
The suites mirror the pytest property tests at certification scale; they
are deterministic for a fixed seed and configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bergman, geometry, measure, regularity, special
from .config import Config
from .geometry import DomainParams, ModelPoint

__all__ = ["SuiteResult", "SUITES", "run_suites"]


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(message)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
        }


def _log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


def suite_special(cfg: Config, rng, *, recursion_scale: float = 1.0) -> SuiteResult:
    """Recursion residuals, Hölder margins and the two-path oracle.

    ``recursion_scale`` deliberately perturbs the beta recursion constant
    for the self-test mode; any value other than 1 must make the suite
    fail."""
    res = SuiteResult("special")
    tol = cfg.tolerances
    g = cfg.grids
    grid = _log_grid(g.special_lo, g.special_hi, g.special_points)
    for x in grid:
        for y in grid:
            r = special.alpha_recursion_residual(float(x), float(y))
            res.check(
                r <= tol.recursion_residual,
                f"alpha recursion residual {r:.2e} at ({x:.3g}, {y:.3g})",
            )
    for x in grid:
        for y in (-2.0, 0.0, 1.5):
            lhs = special.beta_eval(float(x) + 2.0, y, method="quadrature")
            rhs = (
                recursion_scale
                * special.beta_eval(float(x), y, method="quadrature")
                * x
                * (x + 1.0)
                / ((x + 1.0) ** 2 + y * y)
            )
            r = abs(lhs - rhs) / lhs
            res.check(
                r <= tol.recursion_residual,
                f"beta recursion residual {r:.2e} at ({x:.3g}, {y})",
            )
    for s in g.holder_s:
        for x in np.linspace(2.0 * s + 0.05, 10.0, 5):
            for y in np.linspace(2.0 * s + 0.05, 10.0, 5):
                m = special.alpha_holder_margin(float(x), float(y), float(s))
                res.check(
                    m >= -tol.holder_slack,
                    f"alpha margin {m:.2e} at ({x:.3g}, {y:.3g}, s={s})",
                )
        for x in np.linspace(4.0 * s + 0.05, 10.0, 5):
            for y in (-3.0, 0.0, 0.5, 4.0):
                m = special.beta_holder_margin(float(x), float(y), float(s))
                res.check(
                    m >= -tol.holder_slack,
                    f"beta margin {m:.2e} at ({x:.3g}, {y}, s={s})",
                )
    for x in _log_grid(0.05, 40.0, 5):
        for y in _log_grid(0.05, 40.0, 5):
            a = special.alpha_eval(float(x), float(y), method="lgamma")
            b = special.alpha_eval(float(x), float(y), method="quadrature")
            r = abs(a - b) / a
            res.check(
                r <= tol.oracle_agreement,
                f"alpha two-path disagreement {r:.2e} at ({x:.3g}, {y:.3g})",
            )
    return res


def suite_geometry(cfg: Config, rng) -> SuiteResult:
    """Biholomorphism round trips, defining-function transport, isometry
    push-forward, frame duality, boundary-weight identity, Levi form."""
    res = SuiteResult("geometry")
    tol = cfg.tolerances
    g = cfg.grids
    n = g.geometry_samples
    for mu in g.mu_samples:
        params = DomainParams(mu)
        pts = geometry.sample_interior(params, n, rng)
        worst_rt = worst_def = worst_iso = worst_frame = worst_d0 = 0.0
        for w in pts:
            k = int(rng.integers(-2, 3))
            z = geometry.inverse_map(params, w, k)
            v = geometry.forward_map(params, z)
            worst_rt = max(worst_rt, abs(v.w1 - w.w1), abs(v.w2 - w.w2))
            rho = geometry.rho_tilde(z)
            lhs = 4.0 * abs(v.w1) ** mu * (
                abs(v.w1) ** mu - math.cos(math.log(abs(v.w2) ** 2))
            )
            worst_def = max(worst_def, abs(rho - lhs), abs(abs(z.z1) - 2.0 * abs(v.w1) ** mu))
            worst_d0 = max(worst_d0, abs(geometry.delta0(params, v) + rho / 4.0))
            t1, t2 = rng.uniform(-math.pi, math.pi, size=2)
            zz = geometry.isometry_apply(params, t1, t2, z)
            vv = geometry.forward_map(params, zz)
            worst_iso = max(
                worst_iso,
                abs(vv.w1 - np.exp(1j * t1) * w.w1),
                abs(vv.w2 - np.exp(1j * t2) * w.w2),
                abs(geometry.rho_tilde(zz) - rho),
            )
            fr = geometry.frame_at(params, w)
            worst_frame = max(worst_frame, fr.duality_residual())
        res.check(worst_rt <= tol.geometry_residual, f"mu={mu}: round trip {worst_rt:.2e}")
        res.check(worst_def <= tol.geometry_residual, f"mu={mu}: transport {worst_def:.2e}")
        res.check(worst_iso <= tol.geometry_residual, f"mu={mu}: isometry {worst_iso:.2e}")
        res.check(worst_frame <= tol.geometry_residual, f"mu={mu}: frame duality {worst_frame:.2e}")
        res.check(worst_d0 <= tol.geometry_residual, f"mu={mu}: delta0 vs rho {worst_d0:.2e}")
    boundary = geometry.sample_boundary_cover(n, rng)
    worst_levi = 0.0
    torus_exact = True
    for z in boundary:
        levi = geometry.levi_form_boundary(z)
        worst_levi = min(worst_levi, levi)
        if z.z1 == 0 and levi != 0.0:
            torus_exact = False
    res.check(worst_levi >= -tol.levi_floor, f"Levi form dips to {worst_levi:.2e}")
    res.check(torus_exact, "Levi form not exactly zero on the torus")
    return res


def suite_measure(cfg: Config, rng) -> SuiteResult:
    """Closed form vs independent quadrature, ratio sandwich, truncation
    growth certification, and integrability agreement."""
    res = SuiteResult("measure")
    tol = cfg.tolerances
    g = cfg.grids
    for mu in g.moment_mu:
        params = DomainParams(mu)
        for _ in range(12):
            s = float(rng.uniform(0.0, g.moment_s_hi))
            y = float(rng.uniform(-g.moment_y_hi, g.moment_y_hi))
            x = float(rng.uniform(mu * (s - 0.9), 3.0))
            m = measure.MomentArgs(x, y, s, params)
            if measure.integrability_margin(m) < 0.1:
                continue
            c = measure.lambda_closed(m)
            q = measure.lambda_quadrature(m)
            rel = abs(c.value - q.value) / c.value
            res.check(
                rel <= tol.moment_cross,
                f"mu={mu} ({x:.3g},{y:.3g},{s:.3g}): paths differ by {rel:.2e}",
            )
    params = DomainParams(2.0)
    for s in (0.1, 0.2, 0.3, 0.4):
        for j in range(math.ceil(2.0 * (s - 1.0)) + 1, 5):
            ratios = measure.lambda_ratio_family(float(j), np.arange(-6.0, 7.0), s, params)
            bound = measure.lambda_ratio_bound(float(j), s, params)
            res.check(
                bool(np.all(ratios >= 1.0 - tol.ratio_slack)),
                f"ratio below 1 at j={j}, s={s}",
            )
            res.check(
                bool(np.all(ratios <= bound + tol.ratio_slack)),
                f"ratio above bound at j={j}, s={s}",
            )
    cases = [
        (measure.MomentArgs(-2.0, 0.0, 0.2, DomainParams(2.5)), 0.0),
        (measure.MomentArgs(-2.2, 0.0, 0.2, DomainParams(2.5)), -0.16),
        (measure.MomentArgs(-1.5, 0.0, 0.45, DomainParams(2.5)), -0.1),
    ]
    for m, expected in cases:
        res.check(not measure.is_integrable(m), f"{m} should be divergent")
        fit = measure.truncation_growth_fit(m, m_lo=g.eps_fit_lo, m_hi=g.eps_fit_hi)
        if expected == 0.0:
            ok = fit.kind == "log"
        else:
            ok = fit.kind == "power" and abs(fit.exponent - expected) <= tol.growth_exponent
        res.check(ok, f"growth fit {fit.kind}/{fit.exponent:+.4f} vs {expected:+.3f}")
    m = measure.MomentArgs(0.5, 1.0, 0.2, params)
    full = measure.lambda_closed(m).value
    seq = [measure.lambda_truncated(m, 2.0 ** (-k)) for k in (2, 5, 8, 11)]
    res.check(
        all(a <= b + 1e-9 * full for a, b in zip(seq, seq[1:])),
        "truncated moments not monotone",
    )
    res.check(abs(seq[-1] - full) <= 1e-8 * full, "truncated moments do not converge")
    return res


def suite_bergman(cfg: Config, rng) -> SuiteResult:
    """Gram identities, reproducing property, selection rule, kernel
    symmetry and positivity."""
    res = SuiteResult("bergman")
    tol = cfg.tolerances
    g = cfg.grids
    params = DomainParams(3.0)
    for p in (0, 1, 2):
        for s in (0.0, 0.2, 0.4):
            idx = bergman.basis_indices(p, s, params, g.gram_count)
            G = bergman.gram_matrix(idx, s, params)
            off = float(np.max(np.abs(G - np.diag(np.diag(G)))))
            diag = float(np.max(np.abs(np.diag(G) - 1.0)))
            res.check(off <= tol.gram_offdiag, f"p={p} s={s}: offdiag {off:.2e}")
            res.check(diag <= tol.gram_diag, f"p={p} s={s}: diag dev {diag:.2e}")
    ones = lambda r1, r2: np.ones(np.broadcast(np.asarray(r1), np.asarray(r2)).shape)
    for j in range(-2, 4):
        for k in (-2, 0, 3):
            f = bergman.RadialTermFunction(
                0, (bergman.RadialTerm(ones, j, k, bergman.Component.FUNCTION),)
            )
            out = bergman.project(f, params)
            target = bergman.BasisIndex(j, k, 0, bergman.Component.FUNCTION)
            c = out.coefficients.get(target, 0.0)
            res.check(
                len(out.coefficients) == 1 and abs(c - 1.0) <= 1e-10,
                f"reproducing failure at ({j}, {k}): {c}",
            )
    w = ModelPoint(0.5 + 0.1j, 1.02)
    u = ModelPoint(0.3 - 0.2j, 0.95 + 0.1j)
    K_wu = bergman.kernel_eval(w, u, params, (8, 8))
    K_uw = bergman.kernel_eval(u, w, params, (8, 8))
    K_ww = bergman.kernel_eval(w, w, params, (8, 8))
    res.check(K_wu.value == K_uw.value.conjugate(), "kernel Hermitian symmetry broken")
    res.check(
        K_ww.value.imag == 0.0 and K_ww.value.real > 0.0, "kernel diagonal not positive"
    )
    return res


def suite_regularity(cfg: Config, rng) -> SuiteResult:
    """Sharpness sandwich, threshold inversion round trip, witness
    minimality, discontinuity in mu, counterexample transport."""
    res = SuiteResult("regularity")
    tol = cfg.tolerances
    g = cfg.grids
    for r in g.sharpness_r:
        for p in (0, 1, 2):
            mu = regularity.mu_for_threshold(r, p)
            params = DomainParams(mu)
            cert = regularity.continuity_certificate(
                params, p, r - 0.02, (g.lattice_jmax, g.lattice_kmax)
            )
            res.check(
                cert.sup_ratio <= cert.bound_used + tol.ratio_slack,
                f"r={r} p={p}: sup {cert.sup_ratio:.4g} above bound {cert.bound_used:.4g}",
            )
            wit = regularity.divergence_witness(params, p, r)
            if abs(wit.analytic_exponent) <= 1e-9:
                ok = wit.growth.kind == "log"
            else:
                ok = abs(wit.growth.exponent - wit.analytic_exponent) <= tol.growth_exponent
            res.check(ok, f"r={r} p={p}: witness growth fit mismatch")
    for r in np.arange(0.05, 0.46, 0.05):
        for p in (0, 1, 2):
            mu = regularity.mu_for_threshold(float(r), p)
            back = regularity.threshold(DomainParams(mu), p).r
            res.check(
                abs(back - r) <= tol.threshold_roundtrip,
                f"threshold inversion drift {abs(back - r):.2e} at r={r}, p={p}",
            )
    for m in (2, 3, 4):
        lo = regularity.threshold(DomainParams(m - 1e-9), 0).r
        hi = regularity.threshold(DomainParams(m + 1e-9), 0).r
        predicted = min(0.5, 2.0 / m) - min(0.5, 1.0 / m)
        res.check(
            abs((lo - hi) - predicted) <= 1e-8,
            f"degree-0 jump at mu={m}: {lo - hi:.3g} vs predicted {predicted:.3g}",
        )
        lo2 = regularity.threshold(DomainParams(m - 1e-9), 2).r
        hi2 = regularity.threshold(DomainParams(m + 1e-9), 2).r
        res.check(
            abs(lo2 - hi2) <= 1e-8, f"degree-2 threshold jumps at mu={m}"
        )
    params = DomainParams(3.0)
    for p in (0, 1, 2):
        out = bergman.project(regularity.smooth_counterexample(params, p), params)
        witness = regularity.witness_index(params, p)
        thr = regularity.threshold(params, p)
        ok = (
            set(out.coefficients) == {witness}
            and out.coefficients[witness].real > 0.0
            and bergman.basis_norm_sq(witness, thr.r, params).kind == "divergent"
        )
        res.check(ok, f"counterexample transport failed at p={p}")
    return res


SUITES = {
    "special": suite_special,
    "geometry": suite_geometry,
    "measure": suite_measure,
    "bergman": suite_bergman,
    "regularity": suite_regularity,
}


def run_suites(cfg: Config, seed: int, names=None, *, self_test: bool = False):
    """Run the selected suites with one seeded generator.

    Self-test mode injects a wrong beta recursion constant into the
    special suite, which must then fail.
    """
    if names is None:
        names = list(SUITES)
    rng = np.random.default_rng(seed)
    results = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
        if name == "special" and self_test:
            results.append(suite_special(cfg, rng, recursion_scale=1.0 + 1e-3))
        else:
            results.append(SUITES[name](cfg, rng))
    return results
