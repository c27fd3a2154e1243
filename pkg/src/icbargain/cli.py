"""Command-line interface.

Subcommands expose the library end to end: ``nbs-mac`` (closed-form MAC
bargaining), ``mechanism`` (two-phase protocol for one channel instance),
``region`` (plot-ready curves) and ``sweep-b`` (cross-gain sweep). Reports
are JSON with a versioned ``schema`` key; tabular output is CSV with fixed
headers and 12-significant-digit decimals, byte-identical across runs.

Exit codes: 0 success, 2 usage error, 3 numerical-degeneracy fallback.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from .bargain import BargainingProblem, grid_oracle_nbs, nbs_mac
from .channel import ChannelParams, capacity, db_to_linear
from .experiments import (
    format_rate,
    region_export,
    region_export_to_csv,
    sweep_b,
    sweep_rows_to_csv,
)
from .hk_region import RatePair, build_mac_region, region_vertices
from .mechanism import run_mechanism

SCHEMA = "icbargain/1"
UNITS = "bits/channel_use"

_ORACLE_N = 2000


def _round12(value):
    if isinstance(value, float):
        return float(format_rate(value))
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _json_report(payload: dict) -> str:
    return json.dumps(_round12(payload), indent=2) + "\n"


def _verify_against_oracle(problem: BargainingProblem, solution) -> dict:
    oracle = grid_oracle_nbs(problem, _ORACLE_N)
    deviation = max(abs(solution.r1 - oracle.r1), abs(solution.r2 - oracle.r2))
    return {
        "oracle_n": _ORACLE_N,
        "oracle_solution": [oracle.r1, oracle.r2],
        "sup_norm_deviation": deviation,
        "within_tolerance": bool(deviation < 1e-3),
    }


@click.group()
def main() -> None:
    """Coordination and bargaining over the two-user Gaussian interference channel."""


@main.command("nbs-mac")
@click.option("--snr1-db", type=float, required=True, help="SNR of user 1 in dB.")
@click.option("--snr2-db", type=float, required=True, help="SNR of user 2 in dB.")
@click.option("--verify", is_flag=True, help="Cross-check against the grid oracle.")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write to file instead of stdout.")
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
def cmd_nbs_mac(snr1_db: float, snr2_db: float, verify: bool, out: str | None, fmt: str) -> None:
    """Bargaining solution over the MAC capacity pentagon."""
    p1, p2 = db_to_linear(snr1_db), db_to_linear(snr2_db)
    region = build_mac_region(p1, p2)
    outcome = nbs_mac(p1, p2)
    r0 = RatePair(capacity(p1 / (1.0 + p2)), capacity(p2 / (1.0 + p1)))
    problem = BargainingProblem(region, r0)
    report = {
        "schema": SCHEMA,
        "units": UNITS,
        "inputs": {"snr1_db": snr1_db, "snr2_db": snr2_db, "p1": p1, "p2": p2},
        "disagreement": [problem.disagreement.r1, problem.disagreement.r2],
        "solution": [outcome.solution.r1, outcome.solution.r2],
        "sum_bound": region.agg_bounds[0],
        "mu1": outcome.multipliers_mu[0],
        "pentagon_vertices": [[v.r1, v.r2] for v in region_vertices(region)],
    }
    if verify:
        report["verify"] = _verify_against_oracle(problem, outcome.solution)
    _emit(_json_report(report), out)


@main.command("mechanism")
@click.option("--a", type=click.FloatRange(min=0), required=True, help="Cross gain into receiver 1.")
@click.option("--b", type=click.FloatRange(min=0), required=True, help="Cross gain into receiver 2.")
@click.option("--snr1-db", type=float, required=True)
@click.option("--snr2-db", type=float, required=True)
@click.option("--verify", is_flag=True, help="Cross-check the solution against the grid oracle.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json", show_default=True)
@click.pass_context
def cmd_mechanism(
    ctx: click.Context,
    a: float,
    b: float,
    snr1_db: float,
    snr2_db: float,
    verify: bool,
    out: str | None,
    fmt: str,
) -> None:
    """Run the two-phase coordination protocol for one channel instance.

    Breakdown boundary: a user refuses whenever its incoming interference
    power gain*P is <= 1 (boundary included).
    """
    params = ChannelParams(a=a, b=b, p1=db_to_linear(snr1_db), p2=db_to_linear(snr2_db))
    result = run_mechanism(params)
    region = result.hk_region
    report = {
        "schema": SCHEMA,
        "units": UNITS,
        "inputs": {"a": a, "b": b, "snr1_db": snr1_db, "snr2_db": snr2_db, "p1": params.p1, "p2": params.p2},
        "regime": result.regime.value,
        "split": {"alpha": result.split.alpha, "beta": result.split.beta},
        "agreed": result.agreed,
        "reason": result.reason.value,
        "disagreement": [result.disagreement.r1, result.disagreement.r2],
        "operating_point": [result.operating_point.r1, result.operating_point.r2],
        "region": {
            "r_upper": [region.r_upper.r1, region.r_upper.r2],
            "agg_bounds": list(region.agg_bounds),
            "sum_bound_parts": list(region.sum_bound_parts),
        },
        "nbs": None,
    }
    if result.nbs is not None:
        report["nbs"] = {
            "solution": [result.nbs.solution.r1, result.nbs.solution.r2],
            "multipliers_mu": list(result.nbs.multipliers_mu),
            "multipliers_lambda": list(result.nbs.multipliers_lambda),
            "active_upper": list(result.nbs.active_upper),
            "nash_product_value": result.nbs.nash_product_value,
            "degenerate": result.nbs.degenerate,
        }
        if verify:
            problem = BargainingProblem(region, result.disagreement)
            report["verify"] = _verify_against_oracle(problem, result.nbs.solution)
    elif verify:
        report["verify"] = {"skipped": "negotiation broke down; no bargaining solution"}
    _emit(_json_report(report), out)
    if result.nbs is not None and result.nbs.degenerate:
        ctx.exit(3)


@main.command("region")
@click.option("--a", type=click.FloatRange(min=0), required=True)
@click.option("--b", type=click.FloatRange(min=0), required=True)
@click.option("--snr1-db", type=float, required=True)
@click.option("--snr2-db", type=float, required=True)
@click.option("--tdm-samples", type=click.IntRange(min=2), default=101, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def cmd_region(
    a: float, b: float, snr1_db: float, snr2_db: float, tdm_samples: int, out: str | None, fmt: str
) -> None:
    """Export region vertices, TDM frontier and bargaining points."""
    params = ChannelParams(a=a, b=b, p1=db_to_linear(snr1_db), p2=db_to_linear(snr2_db))
    rows = region_export(params, tdm_samples)
    if fmt == "csv":
        _emit(region_export_to_csv(rows), out)
    else:
        payload = {
            "schema": SCHEMA,
            "units": UNITS,
            "rows": [{"curve": c, "r1": r1, "r2": r2} for c, r1, r2 in rows],
        }
        _emit(_json_report(payload), out)


@main.command("sweep-b")
@click.option("--a", type=click.FloatRange(min=0), required=True)
@click.option("--snr1-db", type=float, required=True)
@click.option("--snr2-db", type=float, required=True)
@click.option("--b-min", type=click.FloatRange(min=0), default=0.0, show_default=True)
@click.option("--b-max", type=click.FloatRange(min=0), default=3.0, show_default=True)
@click.option("--step", type=float, default=0.01, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def cmd_sweep_b(
    a: float,
    snr1_db: float,
    snr2_db: float,
    b_min: float,
    b_max: float,
    step: float,
    out: str | None,
    fmt: str,
) -> None:
    """Sweep the cross gain b and report bargaining vs TDM outcomes."""
    if b_max < b_min:
        raise click.UsageError("--b-max must be >= --b-min")
    if step <= 0:
        raise click.UsageError("--step must be > 0")
    rows = sweep_b(a, db_to_linear(snr1_db), db_to_linear(snr2_db), b_min, b_max, step)
    if fmt == "csv":
        _emit(sweep_rows_to_csv(rows), out)
    else:
        payload = {
            "schema": SCHEMA,
            "units": UNITS,
            "rows": [
                {
                    "b": r.b,
                    "regime": r.regime,
                    "agreed": r.agreed,
                    "r1_0": r.r1_0,
                    "r2_0": r.r2_0,
                    "r1_star": r.r1_star,
                    "r2_star": r.r2_star,
                    "sum_nbs": r.sum_nbs,
                    "sum_max": r.sum_max,
                    "tdm_r1": r.tdm_r1,
                    "tdm_r2": r.tdm_r2,
                    "tdm_sum": r.tdm_sum,
                }
                for r in rows
            ],
        }
        _emit(_json_report(payload), out)


if __name__ == "__main__":
    main()
