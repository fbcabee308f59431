"""Audits of the bilateral bounds, the comparison lemmas, and the existence
criteria.

All the theory's constants are existential (they depend only on the exponent
tuple), so every audit reports empirical constants and their stability across
a measure corpus and under refinement, never asserting particular values.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .embedding import KappaProfile
from .intrinsic import intrinsic_potential, intrinsic_tail_finite
from .measure import Measure, PointSet, as_atomic, restrict, ball_mass
from .params import Params
from .quadrature import QuadratureConfig
from .solver import SolveReport
from .wolff import (AtomicWolffOperator, GrowthProfile, PotentialField,
                    tail_exists, wolff_potential)


@dataclasses.dataclass(frozen=True)
class BilateralReport:
    """Empirical sandwich constants for u against
    R = (W sigma)^gamma + K sigma + W mu."""

    R: PotentialField
    ratios: np.ndarray
    c1_emp: float
    c2_emp: float
    terms: dict
    kappa_direction: str = "lower_bound"
    flagged: list[int] = dataclasses.field(default_factory=list)


@dataclasses.dataclass(frozen=True)
class PhiReport:
    phi_values: np.ndarray
    best_nu_tag: list[str]
    candidates: list[str]


def phi_nu(pr: Params, sigma: Measure, nu: Measure, x,
           cfg: QuadratureConfig | None = None) -> float:
    """The comparison quantity
    W nu(x) * (W[(W nu)^q dsigma](x) / W nu(x))^{(p-1)/(p-1-q)}.

    Invariant under scaling of nu (the homogeneity powers cancel exactly).
    Rejects W nu(x) = 0 or +inf.
    """
    cfg = cfg or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    wnu_x = wolff_potential(pr, nu, x, cfg)
    if wnu_x == 0.0:
        raise ValueError("phi_nu undefined: W nu(x) = 0")
    if not math.isfinite(wnu_x):
        raise ValueError("phi_nu undefined: W nu(x) = +inf")
    inner = _wolff_of_wnu_q_dsigma(pr, sigma, nu, x, cfg)
    if inner == 0.0:
        return 0.0
    return wnu_x * (inner / wnu_x) ** pr.gamma


def _wolff_of_wnu_q_dsigma(pr: Params, sigma: Measure, nu: Measure, x,
                           cfg: QuadratureConfig) -> float:
    """W[(W nu)^q dsigma](x): W nu evaluated at sigma's atoms defines the
    inner atomic measure."""
    sa = as_atomic(sigma)
    if sa.weights.sum() == 0.0:
        return 0.0
    t_min_nu = cfg.resolve_t_min(nu.cell_size)
    wnu_at_atoms = np.array(
        [wolff_potential(pr, nu, a, cfg, t_min=t_min_nu) for a in sa.points])
    if np.any(~np.isfinite(wnu_at_atoms) & (sa.weights > 0)):
        return math.inf
    weights = wnu_at_atoms ** pr.q * sa.weights
    t_min_s = cfg.resolve_t_min(sa.cell_size)
    op = AtomicWolffOperator(pr, sa.points, np.asarray(x, dtype=float)[None, :],
                             t_min=t_min_s)
    return float(op.apply(weights)[0])


def phi_sup(pr: Params, sigma: Measure, x, family: list[tuple[str, Measure]],
            cfg: QuadratureConfig | None = None) -> tuple[float, str]:
    """Pointwise sup of phi_nu over a tagged candidate family; returns
    (value, winning tag).  Candidates where phi_nu is undefined are skipped;
    if all are, the value is nan."""
    cfg = cfg or QuadratureConfig()
    if not family:
        raise ValueError("candidate family must be non-empty")
    best, tag = -math.inf, "undefined"
    for name, nu in family:
        try:
            val = phi_nu(pr, sigma, nu, x, cfg)
        except ValueError:
            continue
        if val > best:
            best, tag = val, name
    if best == -math.inf:
        return math.nan, "undefined"
    return best, tag


def default_phi_family(pr: Params, sigma: Measure,
                       u: PotentialField | None = None,
                       probe_points: np.ndarray | None = None,
                       truncation_radii=(0.5, 1.0, 2.0)) -> list[tuple[str, Measure]]:
    """The proof-guided candidate family: sigma itself, point masses on a
    probe grid, the solver measure u^q dsigma, and truncations
    sigma|_{B(0,R)}."""
    from .measure import atomic

    family: list[tuple[str, Measure]] = []
    if sigma.total_mass > 0:
        family.append(("sigma", sigma))
    if probe_points is not None:
        for i, y in enumerate(np.atleast_2d(probe_points)):
            family.append((f"delta_{i}", atomic(y[None, :], [1.0])))
    if u is not None:
        sa = as_atomic(sigma)
        idx = _match_atoms(sa.points, u.points.points)
        w = u.values[idx] ** pr.q * sa.weights
        if np.all(np.isfinite(w)) and w.sum() > 0:
            family.append(("u^q dsigma",
                           atomic(sa.points, w, cell_size=sa.cell_size)))
    R0 = sigma.support_radius
    for r in truncation_radii:
        try:
            trunc = restrict(sigma, np.zeros(sigma.dim), r * max(R0, 1e-9))
        except ValueError:
            continue
        if trunc.total_mass > 0:
            family.append((f"sigma|B(0,{r:g}R)", trunc))
    return family


def _match_atoms(atoms: np.ndarray, points: np.ndarray) -> np.ndarray:
    idx = []
    for a in atoms:
        hits = np.nonzero(np.all(np.isclose(points, a), axis=1))[0]
        if len(hits) == 0:
            raise ValueError("field does not cover every sigma atom")
        idx.append(hits[0])
    return np.asarray(idx)


def phi_sup_report(pr: Params, sigma: Measure, points: PointSet,
                   family: list[tuple[str, Measure]],
                   cfg: QuadratureConfig | None = None) -> PhiReport:
    vals, tags = [], []
    for x in points.points:
        v, t = phi_sup(pr, sigma, x, family, cfg)
        vals.append(v)
        tags.append(t)
    return PhiReport(phi_values=np.asarray(vals), best_nu_tag=tags,
                     candidates=[name for name, _ in family])


def check_lemma_34(pr: Params, sigma: Measure, nu: Measure, x,
                   Ksigma_value: float, cfg: QuadratureConfig | None = None) -> float:
    """Ratio of W[(W nu)^q dsigma](x) to
    (W nu(x))^{q/(p-1)} [W sigma(x) + (K sigma(x))^{(p-1-q)/(p-1)}].
    The comparison lemma asserts this is bounded by a constant depending only
    on the exponent tuple; corpora of draws audit boundedness and stability.
    """
    cfg = cfg or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    wnu = wolff_potential(pr, nu, x, cfg)
    wsig = wolff_potential(pr, sigma, x, cfg)
    if not (math.isfinite(wnu) and math.isfinite(wsig)
            and math.isfinite(Ksigma_value)):
        raise ValueError("lemma audit requires finite W nu, W sigma, K sigma")
    denom = wnu ** (pr.q / (pr.p - 1.0)) * (
        wsig + Ksigma_value ** ((pr.p - 1.0 - pr.q) / (pr.p - 1.0)))
    if denom == 0.0:
        raise ValueError("degenerate lemma audit: zero denominator")
    num = _wolff_of_wnu_q_dsigma(pr, sigma, nu, x, cfg)
    return num / denom


def default_bound_ladder(sigma: Measure, x, n_ladder: int = 10,
                         span: float = 30.0,
                         max_factor: float = 1.2) -> np.ndarray:
    """Radius ladder for the kappa profile feeding the bilateral bound.

    Starts no lower than the measure's cell scale: below it kappa reflects
    only the truncated point-mass floor of the discrete surrogate, and power
    extrapolation of that plateau corrupts the intrinsic head.
    """
    sat = float(np.linalg.norm(np.asarray(x, dtype=float))) + sigma.support_radius
    if sat <= 0.0:
        raise ValueError("degenerate ladder: measure and center at the origin")
    lo = sat / span
    if sigma.cell_size:
        lo = max(lo, float(sigma.cell_size))
    lo = min(lo, sat / 2.0)  # keep part of the ladder below saturation
    return np.geomspace(lo, sat * max_factor, n_ladder)


def bilateral_bound(pr: Params, sigma: Measure, mu: Measure, x,
                    profile: KappaProfile, cfg: QuadratureConfig | None = None
                    ) -> tuple[float, dict]:
    """R(x) = (W sigma(x))^gamma + K sigma(x) + W mu(x), with the three terms
    reported separately (the responsible term is identifiable when R = inf)."""
    cfg = cfg or QuadratureConfig()
    x = np.asarray(x, dtype=float)
    wsig = wolff_potential(pr, sigma, x, cfg)
    wterm = wsig ** pr.gamma if math.isfinite(wsig) else math.inf
    kterm = intrinsic_potential(pr, profile, cfg) if sigma.total_mass > 0 else 0.0
    mterm = wolff_potential(pr, mu, x, cfg)
    terms = {"wolff_term": wterm, "intrinsic_term": kterm, "mu_term": mterm}
    return wterm + kterm + mterm, terms


def verify_sandwich(pr: Params, sigma: Measure, mu: Measure,
                    solve_report: SolveReport, bound_field: PotentialField,
                    plausibility_window: tuple[float, float] = (1e-6, 1e6)
                    ) -> BilateralReport:
    """Ratios u/R per point with empirical sandwich constants c1 = min,
    c2 = max.  The theory guarantees both are positive and finite with
    values depending only on the exponents; stability across a corpus is the
    assertable invariant, not particular numbers."""
    u = solve_report.u
    if len(u.points) != len(bound_field.points) or not np.allclose(
            u.points.points, bound_field.points.points):
        raise ValueError("solution and bound fields must share a point set")
    uv, rv = u.values, bound_field.values
    ok = np.isfinite(uv) & np.isfinite(rv) & (rv > 0)
    ratios = np.full(len(uv), math.nan)
    ratios[ok] = uv[ok] / rv[ok]
    finite = ratios[np.isfinite(ratios)]
    if len(finite) == 0:
        raise ValueError("no finite ratios to audit")
    c1, c2 = float(finite.min()), float(finite.max())
    lo, hi = plausibility_window
    flagged = [int(i) for i in np.nonzero(
        np.isfinite(ratios) & ((ratios < lo) | (ratios > hi)))[0]]
    return BilateralReport(R=bound_field, ratios=ratios, c1_emp=c1, c2_emp=c2,
                           terms={}, flagged=flagged)


def existence_check(pr: Params, sigma_profile, mu_profile,
                    kappa_growth: GrowthProfile | None = None) -> str:
    """Existence classifier: conjunction of the three tail conditions (sigma
    Wolff tail, intrinsic tail, mu Wolff tail).  The alpha = 1 scale with
    n <= p has no nontrivial solutions regardless."""
    if pr.no_nontrivial_solutions or (pr.alpha == 1.0 and pr.n <= pr.p):
        return "not_exists"
    checks = [tail_exists(pr, sigma_profile)]
    if kappa_growth is not None:
        checks.append(intrinsic_tail_finite(pr, kappa_growth))
    elif isinstance(sigma_profile, Measure):
        # compactly supported sigma: kappa(B(0,t)) is eventually constant
        checks.append(intrinsic_tail_finite(pr, GrowthProfile(d=0.0)))
    if mu_profile is not None:
        checks.append(tail_exists(pr, mu_profile))
    return "exists" if all(c == "finite" for c in checks) else "not_exists"


@dataclasses.dataclass(frozen=True)
class CapacityCheckResult:
    verdict: str  # "passes" | "fails"
    constant: float
    ratios: np.ndarray
    radii: np.ndarray
    inequality_constant: float | None = None


def ball_capacity_check(pr: Params, sigma: Measure, radii,
                        u: PotentialField | None = None,
                        blowup_factor: float = 4.0) -> CapacityCheckResult:
    """Audit sigma(B(0,r)) <= C cap_p(B_r) on a ball ladder, with
    cap_p(B_r) proportional to r^{n-p} (alpha = 1 scale, p < n only).

    Fails when the ratio sigma(B_r)/r^{n-p} blows up as r -> 0 (probed on a
    refined sub-ladder), the signature of an atom violating capacity
    absolute continuity.  When a solution field u is supplied, the
    subsolution mass inequality
    sigma(B_r) <= (c r^{n-p})^{q/(p-1)} (int_{B_r} u^q dsigma)^{(p-1-q)/(p-1)}
    is audited and its empirical constant reported.
    """
    if pr.alpha != 1.0:
        raise ValueError("capacity check applies to the alpha = 1 scale only")
    if pr.p >= pr.n:
        raise ValueError("capacity check requires p < n")
    radii = np.asarray(radii, dtype=float)
    origin = np.zeros(sigma.dim)
    probe = np.unique(np.concatenate(
        [radii, radii.min() / 2 ** np.arange(1, 8)]))
    ratios = np.array([ball_mass(sigma, origin, r) / r ** (pr.n - pr.p)
                       for r in probe])
    sup = float(np.nanmax(ratios))
    # blow-up probe: mass persisting at vanishing radius
    small = ratios[probe <= radii.min()]
    verdict = "passes"
    if len(small) >= 2 and small[0] > blowup_factor * max(ratios[probe >= radii.min()].max(), 1e-300):
        verdict = "fails"
        sup = float(small[0])
    ineq_c = None
    if u is not None and verdict == "passes":
        sa = as_atomic(sigma)
        idx = _match_atoms(sa.points, u.points.points)
        uq = u.values[idx] ** pr.q * sa.weights
        d = np.linalg.norm(sa.points, axis=1)
        consts = []
        for r in radii:
            mass = ball_mass(sigma, origin, float(r))
            integral = float(uq[d <= r].sum())
            if mass == 0.0 or integral == 0.0:
                continue
            # solve mass = (c r^{n-p})^{q/(p-1)} integral^{(p-1-q)/(p-1)}
            c = (mass / integral ** ((pr.p - 1.0 - pr.q) / (pr.p - 1.0))) \
                ** ((pr.p - 1.0) / pr.q) / r ** (pr.n - pr.p)
            consts.append(c)
        if consts:
            ineq_c = float(np.max(consts))
    keep = np.isin(probe, radii)
    return CapacityCheckResult(verdict=verdict, constant=sup,
                               ratios=ratios[keep], radii=probe[keep],
                               inequality_constant=ineq_c)
