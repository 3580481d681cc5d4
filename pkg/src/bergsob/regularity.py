"""Sharp Sobolev-regularity thresholds as executable certificates.

For each form degree p the projection is continuous in the weighted-L2
surrogate norm below a sharp exponent and fails at it:

    r(mu, 0)      = min(1/2, (1 - floor(mu))/mu + 1),
    r(mu, 1 or 2) = min(1/2, 1/mu).

Below threshold, continuity is certified by scanning the normalized
moment ratio lam(x,y,s) lam(x,y,-s)/lam(x,y,0)^2 over the basis lattice
and checking it stays under the closed-form bound; at or above threshold
(when that is < 1/2), divergence is witnessed by a single borderline
basis element whose unweighted moment is finite while its weighted one
diverges, certified numerically by the truncation growth fit.  The
witness monomial is reached by projecting a counterexample input that is
smooth up to the boundary: exp(-1/|w1|^mu) times the witness monomial
(times dw1 / dw1 wedge theta2 for p = 1, 2).

Inverting the threshold: given a target r in (0, 1/2), mu = 1/r realizes
it for p in {1, 2}; for p = 0 take l = ceil(1/r) and mu = (l-1)/(1-r),
which lands floor(mu) = l and threshold exactly r.

For p = 0 the scan starts at j = 1 - floor(mu), the first index the
threshold formula protects; for the dw1 families it starts at j = 1.
Certificates report the lattice sup together with the analytic bound at
the worst admissible exponent, which dominates the un-scanned tail since
the bound decreases in x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import measure
from .bergman import BasisIndex, Component, RadialTerm, RadialTermFunction, basis_norm_sq
from .errors import DomainError
from .geometry import DomainParams
from .measure import GrowthFit, MomentArgs, MomentValue

__all__ = [
    "ThresholdReport",
    "ContinuityCertificate",
    "DivergenceWitness",
    "threshold",
    "mu_for_threshold",
    "continuity_certificate",
    "divergence_witness",
    "smooth_counterexample",
    "witness_index",
]

_HALF = "one_half"
_MU_CLAUSE = "mu_clause"
_BOTH = "both"


@dataclass(frozen=True)
class ThresholdReport:
    mu: float
    p: int
    r: float
    binding: str  # which clause of the min was active
    clause_value: float  # the mu-dependent clause before the min


def _check_p(p: int) -> None:
    if p not in (0, 1, 2):
        raise DomainError(f"form degree must be 0, 1 or 2, got {p}")


def threshold(params: DomainParams, p: int) -> ThresholdReport:
    _check_p(p)
    mu = params.mu
    clause = (1.0 - math.floor(mu)) / mu + 1.0 if p == 0 else 1.0 / mu
    r = min(0.5, clause)
    if clause < 0.5:
        binding = _MU_CLAUSE
    elif clause > 0.5:
        binding = _HALF
    else:
        binding = _BOTH
    return ThresholdReport(mu, p, r, binding, clause)


def mu_for_threshold(r: float, p: int) -> float:
    """The parameter whose degree-p threshold is exactly r in (0, 1/2).

    For p = 0 the construction takes l = ceil(1/r) and mu = (l-1)/(1-r),
    which satisfies floor(mu) = l.  When r sits one rounding step below
    1/integer, the floating ceil under-estimates l and the floor condition
    breaks; l + 1 is then equally valid (mu - l stays in [0, 1)) and is
    used instead, keeping the threshold round trip exact.
    """
    _check_p(p)
    if not 0.0 < r < 0.5:
        raise DomainError(f"need 0 < r < 1/2, got {r}")
    if p != 0:
        return 1.0 / r
    ell = math.ceil(1.0 / r)
    for candidate in (ell, ell + 1):
        mu = (candidate - 1.0) / (1.0 - r)
        if math.floor(mu) == candidate:
            return mu
    raise AssertionError(f"no admissible floor for r = {r!r}")


def witness_index(params: DomainParams, p: int) -> BasisIndex:
    """The borderline basis element that realizes the failure at threshold:
    (1 - floor(mu), 0) for functions, the dw1 element (1, 0) for forms."""
    _check_p(p)
    if p == 0:
        return BasisIndex(1 - math.floor(params.mu), 0, 0, Component.FUNCTION)
    return BasisIndex(1, 0, p, Component.DW1)


@dataclass(frozen=True)
class ContinuityCertificate:
    mu: float
    p: int
    s: float
    sup_ratio: float
    sup_attained_at: BasisIndex
    bound_used: float
    lattice_bounds: tuple[int, int]


def _families(p: int, params: DomainParams) -> list[tuple[Component, int]]:
    """(component, minimal lattice j) per family scanned at degree p."""
    jmin0 = 1 - math.floor(params.mu)
    if p == 0:
        return [(Component.FUNCTION, jmin0)]
    if p == 1:
        return [(Component.THETA2, jmin0), (Component.DW1, 1)]
    return [(Component.DW1, 1)]


def continuity_certificate(
    params: DomainParams,
    p: int,
    s: float,
    lattice: tuple[int, int] = (40, 40),
) -> ContinuityCertificate:
    """Scan the normalized ratio over the degree-p basis lattice.

    Returns the sup, its argmax (ties broken toward the lowest j, then
    the lowest k) and the analytic bound at the worst admissible moment
    exponent.  Contract: sup_ratio <= bound_used, and the bound dominates
    the tail beyond the lattice.  Refuses s at or above threshold, where
    a divergence witness exists instead.
    """
    _check_p(p)
    thr = threshold(params, p)
    if not 0.0 <= s < thr.r:
        raise DomainError(
            f"s = {s} is not below the threshold {thr.r}; "
            "use divergence_witness for s at or above it"
        )
    jmax, kmax = lattice
    if jmax < 1 or kmax < 0:
        raise DomainError(f"empty lattice {lattice}")
    mu = params.mu
    ks = np.arange(-kmax, kmax + 1, dtype=float)
    sup = -math.inf
    argmax = None
    bound = -math.inf
    for comp, jmin in _families(p, params):
        shift = mu if comp is Component.DW1 else 0.0
        bound = max(bound, measure.lambda_ratio_bound(jmin - shift, s, params))
        for j in range(jmin, jmax + 1):
            x = j - shift
            ratios = measure.lambda_ratio_family(x, ks, s, params)
            i = int(np.argmax(ratios))
            if ratios[i] > sup:
                sup = float(ratios[i])
                argmax = BasisIndex(j, int(ks[i]), p, comp)
    return ContinuityCertificate(mu, p, s, sup, argmax, bound, lattice)


@dataclass(frozen=True)
class DivergenceWitness:
    mu: float
    p: int
    s: float
    index: BasisIndex
    lambda0: MomentValue
    lambda_s: MomentValue
    growth: GrowthFit
    analytic_exponent: float


def divergence_witness(params: DomainParams, p: int, s: float) -> DivergenceWitness:
    """Certify failure at weight s >= threshold via the witness element.

    The witness's unweighted moment is finite while its weight-s moment
    violates the integrability predicate; the truncation growth fit
    certifies the divergence numerically, with analytic growth exponent
    2x/mu + 2 - 2s (a logarithmic mode when it vanishes).
    """
    _check_p(p)
    thr = threshold(params, p)
    if not thr.r <= s < 0.5:
        raise DomainError(
            f"no witness exists for s = {s} below the threshold {thr.r}; "
            "that is the content of the continuity certificate"
        )
    idx = witness_index(params, p)
    x = idx.moment_x(params)
    lam0 = basis_norm_sq(idx, 0.0, params)
    lam_s = basis_norm_sq(idx, s, params)
    if not lam0.is_finite or lam_s.is_finite:
        raise AssertionError("witness must be finite at s = 0 and divergent at s")
    growth = measure.truncation_growth_fit(MomentArgs(x, 0.0, s, params))
    exponent = 2.0 * x / params.mu + 2.0 - 2.0 * s
    return DivergenceWitness(params.mu, p, s, idx, lam0, lam_s, growth, exponent)


def smooth_counterexample(params: DomainParams, p: int) -> RadialTermFunction:
    """The boundary-smooth input whose projection is the witness monomial:
    exp(-1/|w1|^mu) times w1^(1 - floor(mu)) for functions, times dw1
    (wedge theta2 at degree 2) for forms.  Its projection coefficient is
    strictly positive."""
    _check_p(p)
    mu = params.mu

    def profile(r1, r2):
        r1 = np.asarray(r1, dtype=float)
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(-(r1**-mu)) + 0.0 * np.asarray(r2, dtype=float)

    idx = witness_index(params, p)
    if p == 0:
        term = RadialTerm(profile, idx.j, 0, Component.FUNCTION, label="smooth counterexample")
    else:
        term = RadialTerm(profile, idx.j - 1, 0, Component.DW1, label="smooth counterexample")
    return RadialTermFunction(p, (term,))
