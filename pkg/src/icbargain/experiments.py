"""Experiment harness: cross-gain sweeps and region exports.

Everything here is deterministic: fixed evaluation order and fixed decimal
formatting (12 significant digits), so repeated runs produce byte-identical
CSV suitable for golden-file comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelParams
from .hk_region import max_sum_rate, region_vertices
from .mechanism import run_mechanism
from .tdm import TdmNbsResult, tdm_nbs, tdm_region_samples

__all__ = [
    "SweepRow",
    "SWEEP_CSV_HEADER",
    "sweep_b",
    "sweep_rows_to_csv",
    "region_export",
    "region_export_to_csv",
    "format_rate",
]

SWEEP_CSV_HEADER = "b,regime,agreed,r1_0,r2_0,r1_star,r2_star,sum_nbs,sum_max,tdm_r1,tdm_r2,tdm_sum"


def format_rate(x: float) -> str:
    """Fixed 12-significant-digit decimal rendering used in all text output."""
    if x == 0.0:
        x = 0.0  # normalize -0.0
    return format(x, ".12g")


@dataclass(frozen=True)
class SweepRow:
    """One sweep sample; r*_i equals the disagreement rate on breakdown."""

    b: float
    regime: str
    agreed: bool
    r1_0: float
    r2_0: float
    r1_star: float
    r2_star: float
    sum_nbs: float
    sum_max: float
    tdm_r1: float
    tdm_r2: float
    tdm_sum: float


def _row_for(params: ChannelParams) -> SweepRow:
    result = run_mechanism(params)
    tdm: TdmNbsResult = tdm_nbs(params, result.disagreement)
    op = result.operating_point
    return SweepRow(
        b=params.b,
        regime=result.regime.value,
        agreed=result.agreed,
        r1_0=result.disagreement.r1,
        r2_0=result.disagreement.r2,
        r1_star=op.r1,
        r2_star=op.r2,
        sum_nbs=op.r1 + op.r2,
        sum_max=max_sum_rate(result.hk_region),
        tdm_r1=tdm.solution.r1,
        tdm_r2=tdm.solution.r2,
        tdm_sum=tdm.solution.r1 + tdm.solution.r2,
    )


def sweep_b(
    a: float, p1: float, p2: float, b_min: float, b_max: float, step: float
) -> list[SweepRow]:
    """Sweep the cross gain b over [b_min, b_max] at the given step.

    Produces floor((b_max - b_min)/step) + 1 rows at b = b_min + k*step,
    ordered by b. The epsilon in the count guards the floor against float
    rounding of exact multiples.
    """
    if not (0.0 <= b_min <= b_max) or step <= 0.0:
        raise ValueError("need 0 <= b_min <= b_max and step > 0")
    count = math.floor((b_max - b_min) / step + 1e-9) + 1
    rows = []
    for k in range(count):
        b = b_min + k * step
        rows.append(_row_for(ChannelParams(a=a, b=b, p1=p1, p2=p2)))
    return rows


def sweep_rows_to_csv(rows: list[SweepRow]) -> str:
    """Render sweep rows as CSV (one header line, '\\n' endings)."""
    lines = [SWEEP_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    format_rate(r.b),
                    r.regime,
                    "true" if r.agreed else "false",
                    format_rate(r.r1_0),
                    format_rate(r.r2_0),
                    format_rate(r.r1_star),
                    format_rate(r.r2_star),
                    format_rate(r.sum_nbs),
                    format_rate(r.sum_max),
                    format_rate(r.tdm_r1),
                    format_rate(r.tdm_r2),
                    format_rate(r.tdm_sum),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def region_export(params: ChannelParams, tdm_samples: int) -> list[tuple[str, float, float]]:
    """Plot-ready curves for one channel instance, as (curve, r1, r2) rows.

    Curves: the achievable-region vertices (counterclockwise), the TDM
    frontier, the disagreement point, and both bargaining points. The
    coordination solution appears only when negotiation succeeds, the TDM
    one only when the TDM problem is essential.
    """
    result = run_mechanism(params)
    rows: list[tuple[str, float, float]] = []
    for v in region_vertices(result.hk_region):
        rows.append(("hk_vertex", v.r1, v.r2))
    for s in tdm_region_samples(params, tdm_samples):
        rows.append(("tdm_frontier", s.r1, s.r2))
    rows.append(("disagreement", result.disagreement.r1, result.disagreement.r2))
    if result.agreed:
        rows.append(("hk_nbs", result.operating_point.r1, result.operating_point.r2))
    tdm = tdm_nbs(params, result.disagreement)
    if tdm.essential:
        rows.append(("tdm_nbs", tdm.solution.r1, tdm.solution.r2))
    return rows


def region_export_to_csv(rows: list[tuple[str, float, float]]) -> str:
    lines = ["curve,r1,r2"]
    for curve, r1, r2 in rows:
        lines.append(f"{curve},{format_rate(r1)},{format_rate(r2)}")
    return "\n".join(lines) + "\n"
