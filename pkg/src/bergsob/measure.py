"""Weighted moments of the model domain.

The central object is

    lam(x, y, s) = ∫_D |w1|^(2x) |w2|^(2y) delta0(w)^(-2s) dV_D,

finite iff x/mu + 1 - s > 0 and s < 1/2.  Under the delta0 convention
the change of variables u = (r1^mu / cos(log r2^2), log r2^2) collapses
the moment to an exact product of the two special-function integrals:

    lam(x, y, s) = 8 pi^2 mu * alpha(2x/mu + 2 - 2s, 1 - 2s)
                             * beta(2x/mu + 3 - 4s, y).

``lambda_closed`` evaluates that product; ``lambda_quadrature``
integrates the separable u-coordinate integrand

    u1^(2x/mu + 1 - 2s) (1 - u1)^(-2s) (cos u2)^(2x/mu + 2 - 4s) e^(y u2)

directly with two independent singular-endpoint quadratures, giving a
genuinely independent cross-check of the closed form.

``lambda_truncated`` restricts the moment to |w1| > eps, which is always
finite for s < 1/2; its growth as eps -> 0 certifies divergence: the
values grow like eps^(mu e) when e = 2x/mu + 2 - 2s < 0 and like
mu |log eps| when e = 0.  ``truncation_growth_fit`` extracts the growth
mode from second differences over a dyadic eps grid (second differencing
cancels both the convergent part and any additive logarithmic mode, so
the power exponent survives mixed-mode divergence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import quadrature, special
from .errors import DomainError
from .geometry import DomainParams

__all__ = [
    "MomentArgs",
    "MomentValue",
    "GrowthFit",
    "S_CLAUSE",
    "X_CLAUSE",
    "integrability_margin",
    "is_integrable",
    "lambda_closed",
    "lambda_quadrature",
    "lambda_ratio",
    "lambda_ratio_bound",
    "lambda_ratio_family",
    "lambda_truncated",
    "truncation_growth_fit",
    "radial_moment",
]

_HALF_PI = 0.5 * math.pi

S_CLAUSE = "s < 1/2"
X_CLAUSE = "x/mu + 1 - s > 0"


@dataclass(frozen=True)
class MomentArgs:
    x: float
    y: float
    s: float
    params: DomainParams


@dataclass(frozen=True)
class MomentValue:
    """Outcome of a moment evaluation: a positive value with an error
    estimate, or a certified divergence naming the violated clause."""

    kind: str  # "finite" | "divergent"
    value: Optional[float] = None
    err_estimate: Optional[float] = None
    violated_condition: Optional[str] = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @classmethod
    def finite(cls, value: float, err_estimate: float) -> "MomentValue":
        return cls("finite", value=value, err_estimate=err_estimate)

    @classmethod
    def divergent(cls, condition: str) -> "MomentValue":
        return cls("divergent", violated_condition=f"{condition} violated")


def integrability_margin(m: MomentArgs) -> float:
    return m.x / m.params.mu + 1.0 - m.s


def is_integrable(m: MomentArgs) -> bool:
    return m.s < 0.5 and integrability_margin(m) > 0.0


def _violated(m: MomentArgs) -> str:
    return S_CLAUSE if m.s >= 0.5 else X_CLAUSE


def _exponents(m: MomentArgs) -> tuple[float, float]:
    base = 2.0 * m.x / m.params.mu
    return base + 2.0 - 2.0 * m.s, base + 3.0 - 4.0 * m.s


def lambda_closed(m: MomentArgs) -> MomentValue:
    """Closed-form moment 8 pi^2 mu alpha(...) beta(...); divergent args
    are totalized, naming the violated clause."""
    if not is_integrable(m):
        return MomentValue.divergent(_violated(m))
    X, Y = _exponents(m)
    val = (
        8.0
        * math.pi**2
        * m.params.mu
        * special.alpha_eval(X, 1.0 - 2.0 * m.s, method="lgamma")
        * special.beta_eval(Y, m.y, tol=1e-13)
    )
    return MomentValue.finite(val, 1e-11 * val)


def default_quadrature_tol(margin: float) -> float:
    """Relative tolerance schedule: 1e-8 for margin >= 0.1, loosened
    linearly (in the exponent) to 1e-6 as the margin drops to 0.02."""
    if margin >= 0.1:
        return 1e-8
    if margin <= 0.02:
        return 1e-6
    frac = (0.1 - margin) / 0.08
    return 10.0 ** (-8.0 + 2.0 * frac)


def lambda_quadrature(m: MomentArgs, tol: Optional[float] = None) -> MomentValue:
    """Independent evaluation as a product of two 1D singular-endpoint
    quadratures in the u coordinates, times 8 pi^2 mu."""
    if not is_integrable(m):
        raise DomainError(f"moment diverges ({_violated(m)}); see is_integrable")
    if tol is None:
        tol = default_quadrature_tol(integrability_margin(m))
    X, Y = _exponents(m)
    s = m.s

    def f1(u, da, db):
        return da ** (X - 1.0) * db ** (-2.0 * s)

    def f2(t, da, db):
        return np.sin(np.minimum(da, db)) ** (Y - 1.0) * np.exp(m.y * t)

    r1 = quadrature.integrate(f1, 0.0, 1.0, rtol=0.1 * tol)
    r2 = quadrature.integrate(f2, -_HALF_PI, _HALF_PI, rtol=0.1 * tol)
    if not (r1.converged and r2.converged):
        raise quadrature.QuadratureError(f"moment quadrature failed for {m}")
    val = 8.0 * math.pi**2 * m.params.mu * r1.value * r2.value
    rel = r1.err_estimate / r1.value + r2.err_estimate / r2.value
    return MomentValue.finite(val, abs(rel) * val)


def lambda_ratio(x: float, y: float, s: float, params: DomainParams) -> float:
    """Normalized second moment lam(x,y,s) lam(x,y,-s) / lam(x,y,0)^2.

    Always >= 1 (Cauchy-Schwarz) and bounded by lambda_ratio_bound.
    """
    if not 0.0 <= s < 0.5:
        raise DomainError(f"need 0 <= s < 1/2, got {s}")
    for sign in (s, -s):
        if not is_integrable(MomentArgs(x, y, sign, params)):
            raise DomainError(f"moment at weight {sign} diverges for x = {x}")
    return float(lambda_ratio_family(x, np.array([y]), s, params)[0])


def lambda_ratio_bound(x: float, s: float, params: DomainParams) -> float:
    """Closed-form bound for lambda_ratio, independent of y:

    (X (1+4s) Y) / ((X-2s)(1-2s)(Y-4s)),  X = 2x/mu + 2, Y = 2x/mu + 3.
    """
    X = 2.0 * x / params.mu + 2.0
    Y = X + 1.0
    if not (0.0 <= s < 0.5 and X > 2.0 * s):
        raise DomainError(f"bound needs 0 <= s < 1/2 and 2x/mu + 2 > 2s")
    return (X * (1.0 + 4.0 * s) * Y) / ((X - 2.0 * s) * (1.0 - 2.0 * s) * (Y - 4.0 * s))


def lambda_ratio_family(
    x: float, ys: np.ndarray, s: float, params: DomainParams
) -> np.ndarray:
    """lambda_ratio at fixed (x, s) for a vector of y, on shared nodes."""
    X = 2.0 * x / params.mu + 2.0
    Y = X + 1.0
    if s == 0.0:
        return np.ones_like(np.asarray(ys, dtype=float))
    a = lambda u, v: special.alpha_eval(u, v, method="lgamma")
    a_part = a(X - 2 * s, 1.0 - 2 * s) * a(X + 2 * s, 1.0 + 2 * s) / a(X, 1.0) ** 2
    b0 = special.beta_family(Y, ys, tol=1e-12)
    bm = special.beta_family(Y - 4 * s, ys, tol=1e-12)
    bp = special.beta_family(Y + 4 * s, ys, tol=1e-12)
    return a_part * bm * bp / b0**2


def lambda_truncated(m: MomentArgs, eps: float, *, rtol: float = 1e-9) -> float:
    """The moment restricted to |w1| > eps (u1 > eps^mu / cos u2, clipped).

    Finite for every eps in (0, 1) as long as s < 1/2; nondecreasing as
    eps decreases, converging to the full moment in the integrable case.
    """
    if not 0.0 < eps < 1.0:
        raise DomainError(f"need eps in (0, 1), got {eps}")
    if not m.s < 0.5:
        raise DomainError("truncation only tames the w1 singularity; need s < 1/2")
    mu = m.params.mu
    X, Y = _exponents(m)
    s = m.s
    emu = eps**mu
    C = math.acos(emu)

    p_in_lo, p_in_hi, w_in = quadrature.nodes(6)
    log_w_in = np.log(w_in)
    log_p_hi = np.log(p_in_hi)

    def outer(u2, da, db):
        # cos u2 - eps^mu = 2 sin(da/2) sin(db/2) exactly (da, db are the
        # distances to the interval ends +-C); keeps the u1 span accurate
        # as the fiber collapses.
        cos_u2 = np.cos(u2)
        span = 2.0 * np.sin(0.5 * da) * np.sin(0.5 * db) / cos_u2
        out = np.zeros_like(u2)
        # spans below ~1e-250 contribute < span^(1-2s) <= 1e-25 and their
        # inner node offsets would underflow; drop them.
        ok = span > 1e-250
        spn = span[ok]
        lo = emu / cos_u2[ok]
        u1 = lo[:, None] + np.outer(spn, p_in_lo)
        # (1-u1)^(-2s) = (span * p_hi)^(-2s), summed in log space so the
        # singular factor never overflows before its weight tames it
        log_term = (
            log_w_in[None, :]
            + (X - 1.0) * np.log(u1)
            - 2.0 * s * (np.log(spn)[:, None] + log_p_hi[None, :])
        )
        inner = spn * np.exp(log_term).sum(axis=1)
        out[ok] = cos_u2[ok] ** (Y - 1.0) * np.exp(m.y * u2[ok]) * inner
        return out

    res = quadrature.integrate(outer, -C, C, rtol=rtol, min_level=5, max_level=9)
    if not res.converged and res.err_estimate > 1e-6 * abs(res.value):
        raise quadrature.QuadratureError(f"truncated moment did not converge for {m}")
    return 8.0 * math.pi**2 * mu * res.value


@dataclass(frozen=True)
class GrowthFit:
    """Fitted divergence mode of eps -> lambda_truncated(eps).

    kind "power": values ~ eps^(mu * exponent); kind "log": values grow
    linearly in |log eps| (exponent 0).  residual is the RMS misfit of
    the defining linear regression in its own scale.
    """

    kind: str  # "power" | "log"
    exponent: float
    residual: float
    eps_grid: tuple[float, ...]
    values: tuple[float, ...]


def truncation_growth_fit(
    m: MomentArgs, *, m_lo: int = 4, m_hi: int = 16, rtol: float = 1e-9
) -> GrowthFit:
    """Certify the divergence mode of a moment from truncated values on
    eps = 2^-m, m = m_lo..m_hi.

    Second differences with respect to m cancel constants and any
    logarithmic mode exactly, so a surviving geometric trend identifies
    the power eps^(mu e); its slope against log eps recovers mu e.  When
    the second differences are negligible against the first differences,
    the growth is logarithmic.
    """
    ms = np.arange(m_lo, m_hi + 1)
    eps = 2.0 ** (-ms.astype(float))
    vals = np.array([lambda_truncated(m, float(e), rtol=rtol) for e in eps])
    d1 = np.diff(vals)
    d2 = np.diff(d1)
    scale1 = float(np.median(np.abs(d1)))
    scale2 = float(np.median(np.abs(d2)))
    if scale1 <= 0.0:
        raise DomainError("truncated moments are constant; nothing diverges")
    if scale2 <= 0.05 * scale1:
        # logarithmic: values = a + b m to numerical precision
        slope, intercept = np.polyfit(ms.astype(float), vals, 1)
        fitted = intercept + slope * ms
        residual = float(np.sqrt(np.mean((vals - fitted) ** 2)) / np.mean(np.abs(vals)))
        return GrowthFit("log", 0.0, residual, tuple(eps), tuple(vals))
    pos = d2 > 0
    log_eps = np.log(eps[:-2][pos])
    log_d2 = np.log(d2[pos])
    slope, intercept = np.polyfit(log_eps, log_d2, 1)
    fitted = intercept + slope * log_eps
    residual = float(np.sqrt(np.mean((log_d2 - fitted) ** 2)))
    return GrowthFit(
        "power", slope / m.params.mu, residual, tuple(eps), tuple(vals)
    )


def radial_moment(
    profile: Callable,
    p1: float,
    p2: float,
    params: DomainParams,
    *,
    rtol: float = 1e-10,
    min_level: int = 5,
    max_level: int = 9,
) -> quadrature.QuadResult:
    """∫_D g(|w1|, |w2|) |w1|^p1 |w2|^p2 dV_D for a radial profile g.

    Computed as the iterated integral (u2 = log r2^2)

        8 pi^2 mu^2 ∫_0^1 r1^(p1 + 2mu - 1)
            ∫_{-c(r1)}^{c(r1)} e^(p2 u2 / 2) g(r1, e^(u2/2)) du2 dr1.

    The profile must be vectorized over numpy arrays.
    """
    mu = params.mu
    prev = None
    total = math.nan
    err = math.inf
    for level in range(min_level, max_level + 1):
        p_lo, p_hi, w = quadrature.nodes(level)
        with np.errstate(divide="ignore"):
            c = np.arccos(np.exp(mu * np.log1p(-p_hi)))
        keep = c > 0.0  # collapsed fibers at r1 -> 1 contribute nothing
        r1 = p_lo[keep]
        c = c[keep]
        w1 = w[keep]
        xhat = p_lo - p_hi
        u2 = np.outer(c, xhat)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            g = np.asarray(profile(r1[:, None], np.exp(0.5 * u2)), dtype=float)
            mesh = g * np.exp((0.5 * p2) * u2)
            inner = 2.0 * c * (mesh @ w)
            # rows whose profile underflowed to zero contribute nothing even
            # where the bare power diverges
            pw = r1 ** (p1 + 2.0 * mu - 1.0)
            vals = np.where(inner == 0.0, 0.0, pw * inner)
        if not np.all(np.isfinite(vals)):
            return quadrature.QuadResult(math.inf, math.inf, level, False)
        total = 8.0 * math.pi**2 * mu * mu * float(w1 @ vals)
        if prev is not None:
            err = abs(total - prev)
            if err <= max(1e-300, rtol * abs(total)):
                return quadrature.QuadResult(total, err, level, True)
        prev = total
    return quadrature.QuadResult(total, err, max_level, False)
