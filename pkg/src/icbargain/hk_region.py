"""Achievable rate polytopes: rate-splitting (Han-Kobayashi type) regions for
the interference channel and the two-user MAC capacity pentagon.

Both regions share one representation::

    {R >= 0,  R <= r_upper,  A @ R <= agg_bounds}

with the fixed aggregate matrix A = [[1, 1], [2, 1], [1, 2]] (rows bound
R1+R2, 2*R1+R2 and R1+2*R2). Geometry helpers (membership, vertex
enumeration, max sum rate) operate on that representation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelParams, Regime, capacity, classify_regime

__all__ = [
    "AGG_MATRIX",
    "RatePair",
    "PowerSplit",
    "RatePolytope",
    "select_power_split",
    "build_hk_region",
    "build_mac_region",
    "region_contains",
    "region_vertices",
    "max_sum_rate",
]

# Aggregate constraint rows: R1+R2, 2*R1+R2, R1+2*R2.
AGG_MATRIX = np.array([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]])


@dataclass(frozen=True)
class RatePair:
    """A nonnegative, finite rate pair in bits/channel use."""

    r1: float
    r2: float

    def __post_init__(self) -> None:
        for name in ("r1", "r2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.r1, self.r2])

    def swapped(self) -> "RatePair":
        return RatePair(self.r2, self.r1)


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of each user's power spent on its private message."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0, 1], got {v!r}")


@dataclass(frozen=True)
class RatePolytope:
    """2-D rate region {R >= 0, R <= r_upper, A @ R <= agg_bounds}.

    ``sum_bound_parts`` keeps the three candidate sum bounds whose minimum is
    agg_bounds[0]; they are diagnostics only and never enter the geometry.
    """

    r_upper: RatePair
    agg_bounds: tuple[float, float, float]
    sum_bound_parts: tuple[float, float, float] = field(default=())

    def __post_init__(self) -> None:
        if len(self.sum_bound_parts) == 0:
            object.__setattr__(self, "sum_bound_parts", (self.agg_bounds[0],) * 3)
        for v in (*self.agg_bounds, *self.sum_bound_parts):
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"polytope bounds must be finite and >= 0, got {v!r}")
        if abs(min(self.sum_bound_parts) - self.agg_bounds[0]) > 1e-9:
            raise ValueError("agg_bounds[0] must equal min(sum_bound_parts)")

    @property
    def agg_matrix(self) -> np.ndarray:
        return AGG_MATRIX.copy()


def select_power_split(params: ChannelParams) -> PowerSplit:
    """Pick the private-power fractions negotiated for the current regime.

    Strong interference uses the all-common split (0, 0). When a cross link
    is weak, the corresponding sender keeps 1/(gain * interferer power) of
    its power private, capped at 1 (the cap covers gain*power <= 1,
    including a zero gain).
    """
    regime = classify_regime(params)
    alpha = _private_fraction(params.b, params.p1)
    beta = _private_fraction(params.a, params.p2)
    if regime is Regime.STRONG:
        return PowerSplit(0.0, 0.0)
    if regime is Regime.MIXED_A_WEAK:
        return PowerSplit(0.0, beta)
    if regime is Regime.MIXED_B_WEAK:
        return PowerSplit(alpha, 0.0)
    return PowerSplit(alpha, beta)


def _private_fraction(gain: float, power: float) -> float:
    received = gain * power
    return 1.0 if received <= 1.0 else 1.0 / received


def build_hk_region(params: ChannelParams, split: PowerSplit) -> RatePolytope:
    """Build the fixed-power-split rate-splitting region F(alpha, beta).

    Each bound is evaluated literally from its defining expression (no
    algebraic simplification) so the arithmetic stays auditable. All
    denominators are 1 + gain*power >= 1, so every bound is finite.
    """
    a, b, p1, p2 = params.a, params.b, params.p1, params.p2
    alpha, beta = split.alpha, split.beta
    den1 = 1.0 + a * beta * p2  # noise + private interference seen at rx 1
    den2 = 1.0 + b * alpha * p1

    r1_max = capacity(p1 / den1)
    r2_max = capacity(p2 / den2)

    sum_parts = (
        capacity((p1 + a * (1.0 - beta) * p2) / den1) + capacity(beta * p2 / den2),
        capacity(alpha * p1 / den1) + capacity((p2 + b * (1.0 - alpha) * p1) / den2),
        capacity((alpha * p1 + a * (1.0 - beta) * p2) / den1)
        + capacity((beta * p2 + b * (1.0 - alpha) * p1) / den2),
    )
    sum_bound = min(sum_parts)

    agg_21 = (
        capacity((p1 + a * (1.0 - beta) * p2) / den1)
        + capacity(alpha * p1 / den1)
        + capacity((beta * p2 + b * (1.0 - alpha) * p1) / den2)
    )
    agg_12 = (
        capacity((p2 + b * (1.0 - alpha) * p1) / den2)
        + capacity(beta * p2 / den2)
        + capacity((alpha * p1 + a * (1.0 - beta) * p2) / den1)
    )

    return RatePolytope(
        r_upper=RatePair(r1_max, r2_max),
        agg_bounds=(sum_bound, agg_21, agg_12),
        sum_bound_parts=sum_parts,
    )


def build_mac_region(p1: float, p2: float) -> RatePolytope:
    """Two-user MAC capacity pentagon as a RatePolytope.

    Only the per-user bounds and the sum bound C(P1+P2) are real; the two
    weighted-sum rows are made non-binding with a finite sentinel so the
    same geometry and solver code serves both region types.
    """
    if not (math.isfinite(p1) and p1 > 0.0 and math.isfinite(p2) and p2 > 0.0):
        raise ValueError(f"powers must be finite and > 0, got {p1!r}, {p2!r}")
    c1, c2 = capacity(p1), capacity(p2)
    sum_bound = capacity(p1 + p2)
    sentinel = 2.0 * max(c1, c2, sum_bound) + 1.0
    return RatePolytope(
        r_upper=RatePair(c1, c2),
        agg_bounds=(sum_bound, sentinel, sentinel),
    )


def region_contains(poly: RatePolytope, r: RatePair, tol: float = 1e-9) -> bool:
    """True iff r satisfies every polytope constraint within slack tol."""
    if tol < 0.0:
        raise ValueError("tol must be >= 0")
    return _contains_xy(poly, r.r1, r.r2, tol)


def _contains_xy(poly: RatePolytope, x: float, y: float, tol: float) -> bool:
    if x < -tol or y < -tol:
        return False
    if x > poly.r_upper.r1 + tol or y > poly.r_upper.r2 + tol:
        return False
    b0, b1, b2 = poly.agg_bounds
    return x + y <= b0 + tol and 2.0 * x + y <= b1 + tol and x + 2.0 * y <= b2 + tol


def _support_lines(poly: RatePolytope) -> list[tuple[float, float, float]]:
    """All (c1, c2, rhs) lines c1*R1 + c2*R2 = rhs supporting the polytope."""
    b0, b1, b2 = poly.agg_bounds
    return [
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (1.0, 0.0, poly.r_upper.r1),
        (0.0, 1.0, poly.r_upper.r2),
        (1.0, 1.0, b0),
        (2.0, 1.0, b1),
        (1.0, 2.0, b2),
    ]


def region_vertices(poly: RatePolytope, tol: float = 1e-9) -> list[RatePair]:
    """Vertices of the polytope, counterclockwise starting at the origin.

    Enumerates pairwise intersections of the <= 7 supporting lines, keeps
    the feasible ones and deduplicates at Euclidean tolerance ``tol``. The
    polytope always contains the origin, so the result is never empty.
    """
    lines = _support_lines(poly)
    points: list[np.ndarray] = []
    for i in range(len(lines)):
        a1, a2, c = lines[i]
        for j in range(i + 1, len(lines)):
            b1, b2, d = lines[j]
            det = a1 * b2 - a2 * b1
            if abs(det) < 1e-12:
                continue
            x = (c * b2 - a2 * d) / det
            y = (a1 * d - c * b1) / det
            if _contains_xy(poly, x, y, tol):
                points.append(np.array([x, y]))

    unique: list[np.ndarray] = []
    for p in points:
        if all(np.hypot(*(p - q)) > tol for q in unique):
            unique.append(p)

    ordered = _sort_counterclockwise(unique)
    # Snap tiny negatives (and -0.0) from line intersections back onto the axes.
    return [RatePair(p[0] if p[0] > 0.0 else 0.0, p[1] if p[1] > 0.0 else 0.0) for p in ordered]


def _sort_counterclockwise(points: list[np.ndarray]) -> list[np.ndarray]:
    if len(points) <= 1:
        return points
    if len(points) == 2:
        return sorted(points, key=lambda p: (p[0] ** 2 + p[1] ** 2))
    center = np.mean(points, axis=0)
    ordered = sorted(points, key=lambda p: math.atan2(p[1] - center[1], p[0] - center[0]))
    start = min(range(len(ordered)), key=lambda k: ordered[k][0] ** 2 + ordered[k][1] ** 2)
    return ordered[start:] + ordered[:start]


def max_sum_rate(poly: RatePolytope) -> float:
    """Largest achievable R1 + R2, taken over the polytope's vertices."""
    return max(v.r1 + v.r2 for v in region_vertices(poly))
