"""Shared generators for randomized solver tests."""

from __future__ import annotations

import numpy as np

import icbargain as ic


def make_essential_instances(seed: int, count: int) -> list[tuple[ic.ChannelParams, ic.BargainingProblem]]:
    """Random channel instances cycling through all four regimes.

    Every returned problem uses the regime's negotiated power split and is
    essential with healthy margin (at least 0.01 bits of slack in every
    non-axis constraint at the disagreement point), so the grid oracle
    resolves the optimum meaningfully.
    """
    rng = np.random.default_rng(seed)
    out: list[tuple[ic.ChannelParams, ic.BargainingProblem]] = []
    kinds = ("strong", "weak", "mixed_a", "mixed_b")
    k = 0
    guard = 0
    while len(out) < count:
        guard += 1
        if guard > 100 * count:
            raise RuntimeError("instance generator failed to converge")
        kind = kinds[k % 4]
        p1, p2 = 10.0 ** rng.uniform(0.0, 3.0, size=2)
        if kind == "strong":
            a, b = rng.uniform(1.0, 6.0, size=2)
        elif kind == "weak":
            a, b = rng.uniform(0.05, 0.999, size=2)
            if a * p2 <= 1.2 or b * p1 <= 1.2:
                continue
        elif kind == "mixed_a":
            a = rng.uniform(0.05, 0.999)
            b = rng.uniform(1.0, 6.0)
            if a * p2 <= 1.2:
                continue
        else:
            a = rng.uniform(1.0, 6.0)
            b = rng.uniform(0.05, 0.999)
            if b * p1 <= 1.2:
                continue
        params = ic.ChannelParams(a=float(a), b=float(b), p1=float(p1), p2=float(p2))
        split = ic.select_power_split(params)
        poly = ic.build_hk_region(params, split)
        r0 = ic.disagreement_point(params)
        if poly.r_upper.r1 - r0.r1 < 1e-2 or poly.r_upper.r2 - r0.r2 < 1e-2:
            continue
        slack = np.asarray(poly.agg_bounds) - ic.hk_region.AGG_MATRIX @ r0.as_array()
        if np.min(slack) < 1e-2:
            continue
        out.append((params, ic.BargainingProblem(poly, r0)))
        k += 1
    return out


def make_random_polytopes(seed: int, count: int) -> list[ic.RatePolytope]:
    """Random small polytopes mixing binding and slack aggregate rows."""
    rng = np.random.default_rng(seed)
    polys = []
    for _ in range(count):
        r1m, r2m = rng.uniform(0.2, 4.0, size=2)
        b0 = rng.uniform(0.15, 1.1) * (r1m + r2m)
        b1 = rng.uniform(0.2, 1.15) * (2.0 * r1m + r2m)
        b2 = rng.uniform(0.2, 1.15) * (r1m + 2.0 * r2m)
        polys.append(
            ic.RatePolytope(ic.RatePair(float(r1m), float(r2m)), (float(b0), float(b1), float(b2)))
        )
    return polys
