"""Orthonormal bases of the weighted Bergman spaces and the projection
calculus for radially decomposable inputs.

For weight exponent s < 1/2 the Bergman space of functions is spanned by
the Laurent monomials w1^j w2^k with j > (s-1) mu, normalized by the
moments lam(j, k, s); for (1,0)-forms the basis splits into the
dw1-family 2 mu w1^(j-1) w2^k dw1 with j > s mu (squared norm
lam(j - mu, k, s)) and the theta2-family w1^j w2^k theta2 with
j > (s-1) mu; the (2,0)-forms take the dw1-family wedged with theta2.

Because rotations in each variable are isometries, a term
g(|w1|, |w2|) w1^a w2^b pairs nonzero with exactly one basis element, so
projections of finite sums of such terms are exact finite sums: the
coefficient against each (unnormalized) basis element is a ratio of one
radial quadrature to one moment.  Both numerator and denominator are
retained on the result for error propagation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from . import measure, quadrature
from .config import SCHEMA_VERSION
from .errors import DomainError, NonIntegrableTermError
from .geometry import DomainParams, ModelPoint, contains

__all__ = [
    "Component",
    "BasisIndex",
    "RadialTerm",
    "RadialTermFunction",
    "ProjectionResult",
    "KernelValue",
    "basis_norm_sq",
    "membership_min_j",
    "basis_indices",
    "project",
    "kernel_eval",
    "gram_matrix",
]


class Component(str, Enum):
    """Which frame component a basis element or input term lives in.

    FUNCTION is the single p = 0 component; THETA2 and DW1 are the two
    p = 1 families; p = 2 has only the DW1 (wedge theta2) family.
    """

    FUNCTION = "function"
    THETA2 = "theta2"
    DW1 = "dw1"


_ALLOWED = {0: {Component.FUNCTION}, 1: {Component.THETA2, Component.DW1}, 2: {Component.DW1}}


@dataclass(frozen=True)
class BasisIndex:
    j: int
    k: int
    p: int
    component: Component

    def __post_init__(self):
        if self.p not in _ALLOWED or self.component not in _ALLOWED[self.p]:
            raise DomainError(f"component {self.component} invalid for p = {self.p}")

    def moment_x(self, params: DomainParams) -> float:
        """The w1-moment exponent of this element's squared norm."""
        if self.component is Component.DW1:
            return self.j - params.mu
        return float(self.j)

    def admissible(self, s: float, params: DomainParams) -> bool:
        """Membership of the element in the weight-s Bergman space.

        j > s mu (dw1) resp. j > (s-1) mu, evaluated as s < j/mu (+ 1) so
        the comparison at s exactly equal to a threshold value resolves
        without cancellation (thresholds are computed in the same form).
        """
        if self.component is Component.DW1:
            return s < self.j / params.mu
        return s < self.j / params.mu + 1.0


def membership_min_j(component: Component, s: float, params: DomainParams) -> int:
    """Smallest integer j admissible for the component at weight s."""
    bound = s * params.mu if component is Component.DW1 else (s - 1.0) * params.mu
    return math.floor(bound) + 1


def basis_norm_sq(idx: BasisIndex, s: float, params: DomainParams) -> measure.MomentValue:
    """Squared norm of the basis monomial at weight s: lam(j, k, s) for
    function/theta2 elements, lam(j - mu, k, s) for dw1 elements.
    Divergent exactly when the membership predicate fails (the moment
    integrability condition coincides with membership)."""
    if not 0.0 <= s < 0.5:
        raise DomainError(f"need 0 <= s < 1/2, got {s}")
    if not idx.admissible(s, params):
        return measure.MomentValue.divergent(measure.X_CLAUSE)
    return measure.lambda_closed(
        measure.MomentArgs(idx.moment_x(params), float(idx.k), s, params)
    )


def basis_indices(
    p: int, s: float, params: DomainParams, count: int, k_halfwidth: int = 2
) -> list[BasisIndex]:
    """The leading ``count`` basis elements at weight s, enumerated per
    family by increasing j then k in [-k_halfwidth, k_halfwidth].  For
    p = 1 the theta2 family contributes the extra element when count is
    odd."""
    families: list[Component]
    if p == 0:
        families = [Component.FUNCTION]
        quota = [count]
    elif p == 1:
        families = [Component.THETA2, Component.DW1]
        quota = [(count + 1) // 2, count // 2]
    else:
        families = [Component.DW1]
        quota = [count]
    out: list[BasisIndex] = []
    for comp, n in zip(families, quota):
        j = membership_min_j(comp, s, params)
        taken = 0
        while taken < n:
            for k in range(-k_halfwidth, k_halfwidth + 1):
                if taken == n:
                    break
                out.append(BasisIndex(j, k, p, comp))
                taken += 1
            j += 1
    return out


@dataclass(frozen=True)
class RadialTerm:
    """One input term g(|w1|, |w2|) * w1^a * w2^b against a frame component.

    The profile must be real-valued and vectorized over numpy arrays.
    """

    profile: Callable
    a: int
    b: int
    component: Component
    label: str = ""

    def describe(self) -> str:
        return self.label or f"(a={self.a}, b={self.b}, {self.component.value})"


@dataclass(frozen=True)
class RadialTermFunction:
    """A finite sum of radial-profile terms at a fixed form degree p."""

    p: int
    terms: tuple[RadialTerm, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.component not in _ALLOWED[self.p]:
                raise DomainError(
                    f"term {t.describe()} has component invalid for p = {self.p}"
                )


@dataclass
class ProjectionResult:
    p: int
    coefficients: dict[BasisIndex, complex]
    ratios: dict[BasisIndex, tuple[float, float]]  # (numerator, denominator)
    tail_report: str

    def to_dict(self) -> dict:
        """Serialize to the machine-readable schema used by the CLI:
        coefficients in deterministic (j, k, component) order, each with
        its numerator/denominator quadrature pair retained."""
        entries = []
        for idx in sorted(
            self.coefficients, key=lambda i: (i.j, i.k, i.component.value)
        ):
            c = self.coefficients[idx]
            num, den = self.ratios[idx]
            entries.append(
                {
                    "j": idx.j,
                    "k": idx.k,
                    "component": idx.component.value,
                    "real": c.real,
                    "imag": c.imag,
                    "numerator": num,
                    "denominator": den,
                }
            )
        return {
            "schema_version": SCHEMA_VERSION,
            "p": self.p,
            "coefficients": entries,
            "tail_report": self.tail_report,
        }


def _term_moment(
    term: RadialTerm, params: DomainParams, *, square: bool, rtol: float
) -> quadrature.QuadResult:
    """Radial quadrature of the term against itself (square) or against
    its selected basis monomial (not square)."""
    mu = params.mu
    if term.component is Component.DW1:
        # |dw1|^2 = |w1|^(2-2mu)/(4 mu^2); the pairing against
        # 2 mu w1^j w2^k dw1 carries one factor 2 mu.
        shift = 2.0 - 2.0 * mu
        if square:
            g = lambda r1, r2: np.asarray(term.profile(r1, r2)) ** 2 / (4.0 * mu * mu)
        else:
            g = lambda r1, r2: np.asarray(term.profile(r1, r2)) / (2.0 * mu)
    else:
        shift = 0.0
        if square:
            g = lambda r1, r2: np.asarray(term.profile(r1, r2)) ** 2
        else:
            g = term.profile
    return measure.radial_moment(
        g, 2.0 * term.a + shift, 2.0 * term.b, params, rtol=rtol
    )


def _target_index(term: RadialTerm, p: int) -> BasisIndex:
    if term.component is Component.DW1:
        return BasisIndex(term.a + 1, term.b, p, term.component)
    return BasisIndex(term.a, term.b, p, term.component)


def project(
    f: RadialTermFunction,
    params: DomainParams,
    truncation: tuple[int, int] = (40, 40),
    tol: float = 1e-10,
) -> ProjectionResult:
    """Bergman projection of a radially decomposable input.

    Each term selects at most one basis index; its coefficient against
    the unnormalized basis element (w1^j w2^k, w1^j w2^k theta2, or
    2 mu w1^(j-1) w2^k dw1, wedged with theta2 when p = 2) is the ratio
    of the term's radial pairing integral to the element's squared norm.
    Terms whose selected monomial is not square-integrable contribute
    nothing (they lie in the orthogonal complement); terms that are
    themselves not square-integrable raise NonIntegrableTermError.
    """
    jmax, kmax = truncation
    numerators: dict[BasisIndex, float] = {}
    warnings: list[str] = []
    for term in f.terms:
        sq = _term_moment(term, params, square=True, rtol=max(tol, 1e-9))
        if not sq.converged or not math.isfinite(sq.value):
            raise NonIntegrableTermError(term.describe(), "L2 norm quadrature diverges")
        idx = _target_index(term, f.p)
        if not idx.admissible(0.0, params):
            continue  # selected monomial outside the Bergman space
        if abs(idx.j) > jmax or abs(idx.k) > kmax:
            warnings.append(f"selected index {(idx.j, idx.k)} outside the truncation")
            continue
        num = _term_moment(term, params, square=False, rtol=tol)
        if not num.converged or not math.isfinite(num.value):
            raise NonIntegrableTermError(term.describe(), "pairing quadrature diverges")
        numerators[idx] = numerators.get(idx, 0.0) + num.value
    coefficients: dict[BasisIndex, complex] = {}
    ratios: dict[BasisIndex, tuple[float, float]] = {}
    for idx, num in numerators.items():
        den = basis_norm_sq(idx, 0.0, params)
        assert den.is_finite  # admissibility was checked
        coefficients[idx] = complex(num / den.value)
        ratios[idx] = (num, den.value)
    if not coefficients and not f.terms:
        warnings.append("empty input")
    if not coefficients and f.terms:
        warnings.append("no selected index inside the truncation; empty result")
    report = "; ".join(warnings) if warnings else (
        "selection rule is exact for radial-term inputs; no truncation tail"
    )
    return ProjectionResult(f.p, coefficients, ratios, report)


def _const_profile(value: float) -> Callable:
    def profile(r1, r2, _v=value):
        return np.full(np.broadcast(np.asarray(r1), np.asarray(r2)).shape, _v)

    return profile


def expand_to_terms(result: ProjectionResult, params: DomainParams) -> RadialTermFunction:
    """Re-express a (real-coefficient) projection as a RadialTermFunction,
    suitable for idempotence checks.  A coefficient c against the dw1
    element 2 mu w1^(j-1) w2^k dw1 becomes the dw1-term with constant
    profile 2 mu c at (a, b) = (j - 1, k)."""
    terms = []
    for idx, coeff in result.coefficients.items():
        if abs(coeff.imag) > 1e-12 * max(1.0, abs(coeff)):
            raise DomainError("only real-coefficient expansions are re-expressible")
        if idx.component is Component.DW1:
            term = RadialTerm(
                _const_profile(2.0 * params.mu * coeff.real),
                idx.j - 1,
                idx.k,
                Component.DW1,
                label=f"reexpanded ({idx.j}, {idx.k})",
            )
        else:
            term = RadialTerm(
                _const_profile(coeff.real),
                idx.j,
                idx.k,
                idx.component,
                label=f"reexpanded ({idx.j}, {idx.k})",
            )
        terms.append(term)
    return RadialTermFunction(result.p, tuple(terms))


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail_estimate: float


def kernel_eval(
    w: ModelPoint,
    u: ModelPoint,
    params: DomainParams,
    truncation: tuple[int, int] = (20, 20),
) -> KernelValue:
    """Truncated Bergman kernel of the function space at s = 0:

        K(w, u) = sum over admissible (j, k), |j| <= Jmax, |k| <= Kmax of
                  w1^j w2^k conj(u1^j u2^k) / lam(j, k, 0),

    summed in a fixed (j, k) order so Hermitian symmetry is exact in
    floating point.  The tail estimate is the summed magnitude of the
    outermost included shell."""
    if not (contains(params, w) and contains(params, u)):
        raise DomainError("kernel points must lie inside the model domain")
    jmax, kmax = truncation
    jmin = max(-jmax, membership_min_j(Component.FUNCTION, 0.0, params))
    total = 0.0 + 0.0j
    tail = 0.0
    for j in range(jmin, jmax + 1):
        wj = w.w1**j
        uj = u.w1**j
        for k in range(-kmax, kmax + 1):
            lam = basis_norm_sq(BasisIndex(j, k, 0, Component.FUNCTION), 0.0, params)
            term = (wj * w.w2**k) * (uj * u.w2**k).conjugate() / lam.value
            total += term
            if j == jmax or abs(k) == kmax:
                tail += abs(term)
    return KernelValue(total, tail)


_ANGULAR_CACHE: dict[int, float] = {}


def _angular_factor(m: int, n_nodes: int = 256) -> float:
    """(1/2 pi) ∫_0^{2 pi} cos(m phi) d phi by composite trapezoid; the
    imaginary part vanishes by symmetry.  Exact to roundoff for |m| < n."""
    m = abs(m)
    if m not in _ANGULAR_CACHE:
        phi = np.linspace(0.0, 2.0 * math.pi, n_nodes, endpoint=False)
        _ANGULAR_CACHE[m] = float(np.mean(np.cos(m * phi)))
    return _ANGULAR_CACHE[m]


def gram_matrix(
    indices: list[BasisIndex],
    s: float,
    params: DomainParams,
    *,
    level: int = 6,
) -> np.ndarray:
    """Pairwise weight-s inner products of normalized basis elements.

    Each entry is (angular factor in phi1) x (angular factor in phi2) x
    (2D radial quadrature) / sqrt of the two closed-form norms, so the
    orthogonality content (vanishing angular integrals, radial moments
    matching the closed form) is computed rather than assumed.  Mixed
    theta2/dw1 entries vanish pointwise by frame orthogonality and are
    returned as exact zeros.  Contract: the result is the identity matrix
    to the module tolerances.
    """
    if not 0.0 <= s < 0.5:
        raise DomainError(f"need 0 <= s < 1/2, got {s}")
    for idx in indices:
        if not idx.admissible(s, params):
            raise DomainError(f"index {idx} is not admissible at weight s = {s}")
    mu = params.mu

    p_lo, p_hi, wq = quadrature.nodes(level)
    with np.errstate(divide="ignore"):
        c_all = np.arccos(np.exp(mu * np.log1p(-p_hi)))
    keep = c_all > 0.0  # collapsed fibers at r1 -> 1 contribute nothing
    r1 = p_lo[keep]
    c = c_all[keep]
    xhat = p_lo - p_hi
    u2 = np.outer(c, xhat)
    # cos u2 - r1^mu = 2 sin(c p_lo) sin(c p_hi), stable at the fiber ends
    gap = 2.0 * np.sin(np.outer(c, p_lo)) * np.sin(np.outer(c, p_hi))
    log_r1 = np.log(r1)
    base_outer = 8.0 * math.pi**2 * mu * mu * wq[keep] * 2.0 * c
    gap_pow = gap ** (-2.0 * s) if s != 0.0 else np.ones_like(gap)

    inner_cache: dict[float, np.ndarray] = {}
    radial_cache: dict[tuple[float, float], float] = {}

    def radial(e1: float, e2: float) -> float:
        # ∫ r1^e1 r2^e2 delta0^(-2s) dV with the r1^(-2 s mu) part of
        # delta0 folded into the r1 exponent before exponentiation
        key = (e1, e2)
        if key not in radial_cache:
            if e2 not in inner_cache:
                inner_cache[e2] = (np.exp((0.5 * e2) * u2) * gap_pow) @ wq
            expo = e1 + 2.0 * mu - 1.0 - 2.0 * s * mu
            radial_cache[key] = float(
                base_outer @ (np.exp(expo * log_r1) * inner_cache[e2])
            )
        return radial_cache[key]

    norms = np.array(
        [basis_norm_sq(idx, s, params).value for idx in indices], dtype=float
    )
    n = len(indices)
    out = np.zeros((n, n), dtype=complex)
    for a_i in range(n):
        A = indices[a_i]
        for b_i in range(a_i, n):
            B = indices[b_i]
            if A.component is not B.component:
                entry = 0.0  # theta1-theta2 frame orthogonality, pointwise
            else:
                shift = -2.0 * mu if A.component is Component.DW1 else 0.0
                ang = _angular_factor(A.j - B.j) * _angular_factor(A.k - B.k)
                entry = ang * radial(A.j + B.j + shift, float(A.k + B.k))
                entry /= math.sqrt(norms[a_i] * norms[b_i])
            out[a_i, b_i] = entry
            out[b_i, a_i] = entry
    return out
