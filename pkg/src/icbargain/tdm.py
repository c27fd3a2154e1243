"""Time-division baseline: rate frontier and its Nash bargaining solution.

Under TDM, user i transmits a fraction rho_i of the time with boosted power
P_i/rho_i, achieving rho_i * C(P_i/rho_i). The frontier rho1 + rho2 = 1 is
independent of the cross gains; only the disagreement point moves with
them, so the TDM bargaining outcome still depends on (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, capacity
from .hk_region import RatePair

__all__ = ["TdmAllocation", "TdmNbsResult", "tdm_rate", "tdm_nbs", "tdm_region_samples"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TdmAllocation:
    """Time shares of the two users; rho1 + rho2 <= 1."""

    rho1: float
    rho2: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.rho1 and 0.0 <= self.rho2):
            raise ValueError("time shares must be >= 0")
        if self.rho1 + self.rho2 > 1.0 + 1e-9:
            raise ValueError(f"time shares must sum to <= 1, got {self.rho1 + self.rho2}")


@dataclass(frozen=True)
class TdmNbsResult:
    """TDM bargaining outcome.

    When no frontier point strictly improves on the disagreement point for
    both users, ``essential`` is False, ``solution`` falls back to the
    disagreement point and ``rho1`` is None.
    """

    essential: bool
    solution: RatePair
    rho1: float | None


def _share_rate(rho: float, power: float) -> float:
    # rho * C(P/rho) -> 0 as rho -> 0; define the limit value directly.
    if rho <= 0.0:
        return 0.0
    return rho * capacity(power / rho)


def tdm_rate(alloc: TdmAllocation, params: ChannelParams) -> RatePair:
    """Rates achieved by a TDM allocation."""
    return RatePair(_share_rate(alloc.rho1, params.p1), _share_rate(alloc.rho2, params.p2))


def tdm_region_samples(params: ChannelParams, n: int) -> list[RatePair]:
    """n frontier points at equally spaced rho1 in [0, 1] with rho2 = 1 - rho1."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    return [
        tdm_rate(TdmAllocation(rho1, 1.0 - rho1), params)
        for rho1 in np.linspace(0.0, 1.0, n)
    ]


def tdm_nbs(params: ChannelParams, r0: RatePair) -> TdmNbsResult:
    """Nash-product maximizer along the TDM frontier rho1 + rho2 = 1.

    User 1's surplus rho*C(P1/rho) - r0.r1 is increasing in rho and user
    2's is decreasing, so the set where both are positive is an interval
    (lo, hi) found by bisection on each surplus's zero crossing. The log
    Nash product is concave there; golden-section search locates the
    maximizer to |delta rho1| < 1e-10.
    """
    p1, p2 = params.p1, params.p2

    def surplus1(rho: float) -> float:
        return _share_rate(rho, p1) - r0.r1

    def surplus2(rho: float) -> float:
        return _share_rate(1.0 - rho, p2) - r0.r2

    lo = 0.0 if r0.r1 <= 0.0 else (_bisect_root(surplus1) if surplus1(1.0) > 0.0 else None)
    hi = 1.0 if r0.r2 <= 0.0 else (_bisect_root(surplus2) if surplus2(0.0) > 0.0 else None)
    if lo is None or hi is None or hi - lo <= 1e-12:
        return TdmNbsResult(essential=False, solution=r0, rho1=None)

    def objective(rho: float) -> float:
        s1, s2 = surplus1(rho), surplus2(rho)
        if s1 <= 0.0 or s2 <= 0.0:
            return -math.inf
        return math.log(s1) + math.log(s2)

    rho_star = _golden_max(objective, lo, hi, tol=1e-10)
    return TdmNbsResult(
        essential=True,
        solution=RatePair(_share_rate(rho_star, p1), _share_rate(1.0 - rho_star, p2)),
        rho1=rho_star,
    )


def _bisect_root(f, lo: float = 0.0, hi: float = 1.0, iters: int = 80) -> float:
    """Root of a monotone f with f(lo) and f(hi) of opposite sign."""
    flo = f(lo)
    increasing = flo <= 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == increasing:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _golden_max(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section maximization of a unimodal f on [lo, hi]."""
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)
