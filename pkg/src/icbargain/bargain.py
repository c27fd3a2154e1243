"""Nash bargaining over 2-D rate regions.

The solution concept is the maximizer of the Nash product
(R1 - R1_0)*(R2 - R2_0) over the feasible region intersected with
{R >= R_0}. For a polytope feasible set the maximizer is found exactly by
enumerating candidate active sets of the supporting halfplanes: with a
strictly concave objective in 2-D, at most two constraints matter at the
optimum, and each candidate set yields a closed-form stationary point. The
unique candidate passing primal feasibility and dual nonnegativity is the
solution, together with its KKT multiplier certificate.

An independent grid-search oracle (`grid_oracle_nbs`) is kept deliberately
naive so it can cross-check the active-set solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, capacity
from .hk_region import AGG_MATRIX, RatePair, RatePolytope, build_mac_region

__all__ = [
    "BargainingProblem",
    "NbsOutcome",
    "KktReport",
    "NotEssentialError",
    "DegenerateActiveSetError",
    "KKT_TOL",
    "disagreement_point",
    "is_essential",
    "log_nash_product",
    "nbs_mac",
    "nbs_halfplanes",
    "nbs_polytope",
    "grid_oracle_nbs",
    "verify_kkt",
]

KKT_TOL = 1e-7
# Strict inequalities (essentiality) are evaluated with this margin so that
# boundary behavior is reproducible across platforms.
ESSENTIAL_MARGIN = 1e-12

_FEAS_TOL = 1e-9
_DUAL_TOL = 1e-9


class NotEssentialError(ValueError):
    """The bargaining problem admits no allocation strictly above the
    disagreement point; callers must branch to the breakdown path."""


class DegenerateActiveSetError(RuntimeError):
    """No candidate active set passed all KKT checks (float degeneracy)."""


@dataclass(frozen=True)
class BargainingProblem:
    """Feasible rate polytope plus the disagreement point."""

    feasible: RatePolytope
    disagreement: RatePair


@dataclass(frozen=True)
class NbsOutcome:
    """Bargaining solution with its KKT certificate.

    ``multipliers_mu`` holds the multipliers of the three aggregate rows
    (R1+R2, 2R1+R2, R1+2R2); ``multipliers_lambda`` the multipliers of the
    individual-rationality constraints, identically zero at an essential
    solution. ``active_upper`` flags whether each per-user cap is tight.
    ``degenerate`` marks the grid-oracle fallback, in which case no
    certificate is available.
    """

    solution: RatePair
    multipliers_mu: tuple[float, float, float]
    multipliers_lambda: tuple[float, float]
    active_upper: tuple[bool, bool]
    nash_product_value: float
    degenerate: bool = False


@dataclass(frozen=True)
class KktReport:
    """Worst-case residuals of the KKT system, one per condition group."""

    stationarity: float
    primal_feasibility: float
    dual_nonnegativity: float
    complementary_slackness: float

    @property
    def max_residual(self) -> float:
        return max(
            self.stationarity,
            self.primal_feasibility,
            self.dual_nonnegativity,
            self.complementary_slackness,
        )

    @property
    def passed(self) -> bool:
        return self.max_residual < KKT_TOL


def disagreement_point(params: ChannelParams) -> RatePair:
    """Rates each user gets when both treat the other's signal as noise."""
    r1 = capacity(params.p1 / (1.0 + params.a * params.p2))
    r2 = capacity(params.p2 / (1.0 + params.b * params.p1))
    return RatePair(r1, r2)


def is_essential(problem: BargainingProblem) -> bool:
    """True iff some feasible allocation is strictly better for both users.

    Equivalent to the disagreement point lying strictly inside every
    non-axis constraint: r0 < r_upper componentwise and A @ r0 < agg_bounds
    rowwise, each with margin 1e-12.
    """
    poly, r0 = problem.feasible, problem.disagreement
    if poly.r_upper.r1 - r0.r1 <= ESSENTIAL_MARGIN:
        return False
    if poly.r_upper.r2 - r0.r2 <= ESSENTIAL_MARGIN:
        return False
    slack = np.asarray(poly.agg_bounds) - AGG_MATRIX @ r0.as_array()
    return bool(np.all(slack > ESSENTIAL_MARGIN))


def log_nash_product(r: RatePair, r0: RatePair) -> float:
    """ln(r1 - r0.r1) + ln(r2 - r0.r2); requires r > r0 componentwise."""
    s1 = r.r1 - r0.r1
    s2 = r.r2 - r0.r2
    if s1 <= 0.0 or s2 <= 0.0:
        raise ValueError(f"rate pair must strictly exceed the disagreement point, surpluses ({s1}, {s2})")
    return math.log(s1) + math.log(s2)


def nbs_mac(p1: float, p2: float) -> NbsOutcome:
    """Closed-form bargaining solution over the MAC capacity pentagon.

    The optimum sits on the dominant face with equal per-user surplus
    (phi0 - r1_0 - r2_0)/2; the per-user caps can never clip it because
    C(P1+P2) <= C(P1) + C(P2). The sum-row multiplier is 2/(2*surplus).
    """
    region = build_mac_region(p1, p2)  # validates the powers
    r0 = RatePair(capacity(p1 / (1.0 + p2)), capacity(p2 / (1.0 + p1)))
    phi0 = region.agg_bounds[0]
    surplus = 0.5 * (phi0 - r0.r1 - r0.r2)
    mu1 = 2.0 / (phi0 - r0.r1 - r0.r2)
    return NbsOutcome(
        solution=RatePair(r0.r1 + surplus, r0.r2 + surplus),
        multipliers_mu=(mu1, 0.0, 0.0),
        multipliers_lambda=(0.0, 0.0),
        active_upper=(False, False),
        nash_product_value=surplus * surplus,
    )


def nbs_halfplanes(
    halfplanes: list[tuple[float, float, float]],
    r0: tuple[float, float],
) -> tuple[tuple[float, float], tuple[float, ...]]:
    """Maximize the Nash product over {r >= r0} cut by halfplanes.

    Each halfplane (g1, g2, h) constrains g1*r1 + g2*r2 <= h. Candidate
    active sets (every singleton and every pair) are solved in closed form:

    * singleton with normal g: stationarity forces equal "weighted surplus"
      g_i * s_i on both coordinates, so s_i = c/(2*g_i) with c the slack of
      the constraint at r0, and mu = 2/c;
    * pair: the intersection point fixes s, and the 2x2 stationarity system
      grad = mu_i*g_i + mu_j*g_j fixes the multipliers.

    A candidate is accepted iff both surpluses are strictly positive, all
    halfplanes hold within 1e-9 and the multipliers are >= -1e-9 (then
    clamped to 0). Strict concavity makes accepted candidates optimal; the
    best log Nash product is returned with ties broken toward the
    lexicographically smallest point. Raises DegenerateActiveSetError when
    nothing is accepted.

    Returns (solution, multipliers) with one multiplier per input halfplane.
    """
    g = np.asarray([(hp[0], hp[1]) for hp in halfplanes], dtype=float)
    h = np.asarray([hp[2] for hp in halfplanes], dtype=float)
    base = np.asarray(r0, dtype=float)
    slack0 = h - g @ base
    m = len(halfplanes)

    candidates: list[tuple[float, float, float, np.ndarray]] = []

    def consider(s: np.ndarray, mu: np.ndarray) -> None:
        if not (s[0] > 0.0 and s[1] > 0.0):
            return
        if np.any(mu < -_DUAL_TOL):
            return
        point = base + s
        if np.any(g @ point > h + _FEAS_TOL):
            return
        score = math.log(s[0]) + math.log(s[1])
        candidates.append((score, point[0], point[1], np.maximum(mu, 0.0)))

    for i in range(m):
        if g[i, 0] > 0.0 and g[i, 1] > 0.0 and slack0[i] > 0.0:
            s = np.array([slack0[i] / (2.0 * g[i, 0]), slack0[i] / (2.0 * g[i, 1])])
            mu = np.zeros(m)
            mu[i] = 2.0 / slack0[i]
            consider(s, mu)

    for i in range(m):
        for j in range(i + 1, m):
            gm = np.array([g[i], g[j]])
            det = gm[0, 0] * gm[1, 1] - gm[0, 1] * gm[1, 0]
            if abs(det) < 1e-12:
                continue
            s = np.linalg.solve(gm, np.array([slack0[i], slack0[j]]))
            if not (s[0] > 0.0 and s[1] > 0.0):
                continue
            pair_mu = np.linalg.solve(gm.T, 1.0 / s)
            mu = np.zeros(m)
            mu[i], mu[j] = pair_mu
            consider(s, mu)

    if not candidates:
        raise DegenerateActiveSetError("no active set satisfied all KKT checks")

    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    best = candidates[0]
    return (float(best[1]), float(best[2])), tuple(float(v) for v in best[3])


def nbs_polytope(problem: BargainingProblem) -> NbsOutcome:
    """Bargaining solution over a RatePolytope, with KKT certificate.

    Requires an essential problem (raises NotEssentialError otherwise). If
    float degeneracy leaves no accepted active set, falls back to the grid
    oracle and flags the outcome as degenerate (no certificate).
    """
    if not is_essential(problem):
        raise NotEssentialError("disagreement point is not strictly improvable")
    poly, r0 = problem.feasible, problem.disagreement
    halfplanes = [
        (1.0, 0.0, poly.r_upper.r1),
        (0.0, 1.0, poly.r_upper.r2),
        (1.0, 1.0, poly.agg_bounds[0]),
        (2.0, 1.0, poly.agg_bounds[1]),
        (1.0, 2.0, poly.agg_bounds[2]),
    ]
    try:
        point, mu = nbs_halfplanes(halfplanes, (r0.r1, r0.r2))
    except DegenerateActiveSetError:
        sol = grid_oracle_nbs(problem, 2000)
        return NbsOutcome(
            solution=sol,
            multipliers_mu=(0.0, 0.0, 0.0),
            multipliers_lambda=(0.0, 0.0),
            active_upper=(
                abs(sol.r1 - poly.r_upper.r1) <= 1e-9,
                abs(sol.r2 - poly.r_upper.r2) <= 1e-9,
            ),
            nash_product_value=(sol.r1 - r0.r1) * (sol.r2 - r0.r2),
            degenerate=True,
        )
    solution = RatePair(point[0], point[1])
    return NbsOutcome(
        solution=solution,
        multipliers_mu=(mu[2], mu[3], mu[4]),
        multipliers_lambda=(0.0, 0.0),
        active_upper=(
            abs(solution.r1 - poly.r_upper.r1) <= 1e-12,
            abs(solution.r2 - poly.r_upper.r2) <= 1e-12,
        ),
        nash_product_value=(solution.r1 - r0.r1) * (solution.r2 - r0.r2),
    )


def grid_oracle_nbs(problem: BargainingProblem, n: int) -> RatePair:
    """Brute-force Nash-product maximizer on an n-point-per-axis grid.

    The grid spans [r0, r_upper] per axis. Because the product is strictly
    increasing in both coordinates above r0, its maximizer lies on the
    region's dominant boundary, so each grid column (and, symmetrically,
    each row) is snapped up to the boundary before evaluation; raw interior
    grid points carry first-order noise from their depth below the active
    face and would blur the comparison. The incumbent is then refined once
    on a 10x finer grid spanning two coarse cells around it. Ties resolve
    to the lexicographically smallest rate pair. Intentionally independent
    of the active-set solver: only region arithmetic is used.
    """
    if n < 100:
        raise ValueError(f"grid size must be >= 100, got {n}")
    if not is_essential(problem):
        raise ValueError("grid oracle requires an essential problem")
    poly, r0 = problem.feasible, problem.disagreement

    x = np.linspace(r0.r1, poly.r_upper.r1, n)
    y = np.linspace(r0.r2, poly.r_upper.r2, n)
    bx, by = _frontier_argmax(poly, r0, x, y)

    hx = (poly.r_upper.r1 - r0.r1) / (n - 1)
    hy = (poly.r_upper.r2 - r0.r2) / (n - 1)
    fine_x = np.linspace(max(bx - 2 * hx, r0.r1), min(bx + 2 * hx, poly.r_upper.r1), 41)
    fine_y = np.linspace(max(by - 2 * hy, r0.r2), min(by + 2 * hy, poly.r_upper.r2), 41)
    bx, by = _frontier_argmax(poly, r0, fine_x, fine_y)
    return RatePair(bx, by)


def _frontier_argmax(
    poly: RatePolytope, r0: RatePair, x: np.ndarray, y: np.ndarray
) -> tuple[float, float]:
    """Best boundary point over the grid columns (x-scan) and rows (y-scan)."""
    b0, b1, b2 = poly.agg_bounds
    y_top = np.minimum.reduce([np.full_like(x, poly.r_upper.r2), b0 - x, b1 - 2.0 * x, 0.5 * (b2 - x)])
    x_right = np.minimum.reduce([np.full_like(y, poly.r_upper.r1), b0 - y, 0.5 * (b1 - y), b2 - 2.0 * y])

    cand_x = np.concatenate([x, x_right])
    cand_y = np.concatenate([y_top, y])
    s1 = cand_x - r0.r1
    s2 = cand_y - r0.r2
    # A negative snapped coordinate means the column/row has no feasible point.
    product = np.where((s1 >= 0.0) & (s2 >= 0.0), s1 * s2, -1.0)

    best = float(np.max(product))
    tied = np.flatnonzero(product == best)
    k = tied[np.lexsort((cand_y[tied], cand_x[tied]))[0]]
    return float(cand_x[k]), float(cand_y[k])


def verify_kkt(problem: BargainingProblem, outcome: NbsOutcome) -> KktReport:
    """Residuals of the KKT certificate carried by an outcome.

    Stationarity is checked in the fixed-point form
    r_i = min(r_upper_i, r0_i + 1/(sum_j mu_j*A[j,i] - lambda_i)), which
    also encodes dual feasibility of a tight per-user cap. The report
    passes iff every residual is below 1e-7.
    """
    poly, r0 = problem.feasible, problem.disagreement
    r = outcome.solution.as_array()
    base = r0.as_array()
    upper = poly.r_upper.as_array()
    bounds = np.asarray(poly.agg_bounds)
    mu = np.asarray(outcome.multipliers_mu)
    lam = np.asarray(outcome.multipliers_lambda)

    stationarity = 0.0
    for i in range(2):
        weight = float(mu @ AGG_MATRIX[:, i]) - lam[i]
        target = upper[i] if weight <= 0.0 else min(upper[i], base[i] + 1.0 / weight)
        stationarity = max(stationarity, abs(r[i] - target))

    agg_slack = bounds - AGG_MATRIX @ r
    primal = max(
        0.0,
        float(np.max(-r)),
        float(np.max(r - upper)),
        float(np.max(-agg_slack)),
        float(np.max(base - r)),
    )
    dual = max(0.0, float(np.max(-mu)), float(np.max(-lam)))
    slackness = max(
        float(np.max(np.abs(mu * agg_slack))),
        float(np.max(np.abs(lam * (r - base)))),
    )
    return KktReport(stationarity, primal, dual, slackness)
