"""Two-phase coordination protocol.

Phase 1 fixes the regime-dependent power split and checks whether both
users can gain from coordinating; phase 2 computes the bargaining solution
over the agreed region. On any breakdown the users fall back to the
disagreement point (no codebook sharing happens; the agreement itself is
modeled only as a boolean).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .bargain import (
    BargainingProblem,
    NbsOutcome,
    disagreement_point,
    is_essential,
    nbs_polytope,
)
from .channel import ChannelParams, Regime, classify_regime
from .hk_region import PowerSplit, RatePair, RatePolytope, build_hk_region, select_power_split

__all__ = ["BreakdownReason", "MechanismResult", "phase1_negotiate", "run_mechanism"]


class BreakdownReason(enum.Enum):
    NONE = "none"
    USER1_NO_INCENTIVE = "user1_no_incentive"
    USER2_NO_INCENTIVE = "user2_no_incentive"
    NOT_ESSENTIAL = "not_essential"


@dataclass(frozen=True)
class MechanismResult:
    """Outcome of the full two-phase protocol.

    ``agreed`` iff reason is NONE iff ``nbs`` is present, and then the
    operating point is the bargaining solution; otherwise it equals the
    disagreement point.
    """

    regime: Regime
    split: PowerSplit
    agreed: bool
    reason: BreakdownReason
    operating_point: RatePair
    hk_region: RatePolytope
    disagreement: RatePair
    nbs: NbsOutcome | None


def phase1_negotiate(params: ChannelParams) -> tuple[PowerSplit, bool, BreakdownReason]:
    """Select the power split and test the incentive conditions.

    A user whose incoming interference is no stronger than its receiver
    noise (gain*power <= 1, boundary included) cannot gain from the scheme
    and refuses; when both such tests pass, the region built from the split
    must still strictly improve on the disagreement point for both users.
    When both gain*power <= 1 in the weak regime, user 1's refusal is
    reported. The split returned is always the regime rule's split, even
    on breakdown.
    """
    regime = classify_regime(params)
    split = select_power_split(params)

    if regime is not Regime.STRONG:
        user1_blocked = regime in (Regime.MIXED_A_WEAK, Regime.WEAK) and params.a * params.p2 <= 1.0
        user2_blocked = regime in (Regime.MIXED_B_WEAK, Regime.WEAK) and params.b * params.p1 <= 1.0
        if user1_blocked:
            return split, False, BreakdownReason.USER1_NO_INCENTIVE
        if user2_blocked:
            return split, False, BreakdownReason.USER2_NO_INCENTIVE

    problem = BargainingProblem(build_hk_region(params, split), disagreement_point(params))
    if not is_essential(problem):
        return split, False, BreakdownReason.NOT_ESSENTIAL
    return split, True, BreakdownReason.NONE


def run_mechanism(params: ChannelParams) -> MechanismResult:
    """Run both phases; on breakdown the operating point is the disagreement point."""
    split, essential, reason = phase1_negotiate(params)
    region = build_hk_region(params, split)
    r0 = disagreement_point(params)
    nbs = nbs_polytope(BargainingProblem(region, r0)) if essential else None
    return MechanismResult(
        regime=classify_regime(params),
        split=split,
        agreed=essential,
        reason=reason,
        operating_point=nbs.solution if nbs is not None else r0,
        hk_region=region,
        disagreement=r0,
        nbs=nbs,
    )
