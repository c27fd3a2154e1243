"""Coordination and bargaining over the two-user Gaussian interference channel.

Library layout:

* :mod:`icbargain.channel` -- channel parameters, capacity function, regimes
* :mod:`icbargain.hk_region` -- achievable rate polytopes and geometry
* :mod:`icbargain.bargain` -- Nash bargaining solver, KKT certificates, oracle
* :mod:`icbargain.tdm` -- time-division baseline
* :mod:`icbargain.mechanism` -- two-phase coordination protocol
* :mod:`icbargain.experiments` -- deterministic sweeps and exports
* :mod:`icbargain.cli` -- command-line entry point
"""

from .bargain import (
    BargainingProblem,
    DegenerateActiveSetError,
    KktReport,
    NbsOutcome,
    NotEssentialError,
    disagreement_point,
    grid_oracle_nbs,
    is_essential,
    log_nash_product,
    nbs_halfplanes,
    nbs_mac,
    nbs_polytope,
    verify_kkt,
)
from .channel import ChannelParams, Regime, capacity, classify_regime, db_to_linear
from .hk_region import (
    PowerSplit,
    RatePair,
    RatePolytope,
    build_hk_region,
    build_mac_region,
    max_sum_rate,
    region_contains,
    region_vertices,
    select_power_split,
)
from .mechanism import BreakdownReason, MechanismResult, phase1_negotiate, run_mechanism
from .tdm import TdmAllocation, TdmNbsResult, tdm_nbs, tdm_rate, tdm_region_samples

__version__ = "0.1.0"

__all__ = [
    "BargainingProblem",
    "BreakdownReason",
    "ChannelParams",
    "DegenerateActiveSetError",
    "KktReport",
    "MechanismResult",
    "NbsOutcome",
    "NotEssentialError",
    "PowerSplit",
    "RatePair",
    "RatePolytope",
    "Regime",
    "TdmAllocation",
    "TdmNbsResult",
    "build_hk_region",
    "build_mac_region",
    "capacity",
    "classify_regime",
    "db_to_linear",
    "disagreement_point",
    "grid_oracle_nbs",
    "is_essential",
    "log_nash_product",
    "max_sum_rate",
    "nbs_halfplanes",
    "nbs_mac",
    "nbs_polytope",
    "phase1_negotiate",
    "region_contains",
    "region_vertices",
    "run_mechanism",
    "select_power_split",
    "tdm_nbs",
    "tdm_rate",
    "tdm_region_samples",
    "verify_kkt",
]
