"""Channel parameterization for the two-user Gaussian interference channel.

A channel instance is fully described by the cross-link power gains (a, b)
and the noise-normalized average powers (P1, P2); with unit noise variance
the per-user SNR equals the power. All rates are in bits per channel use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "ChannelParams",
    "Regime",
    "capacity",
    "db_to_linear",
    "classify_regime",
]


@dataclass(frozen=True)
class ChannelParams:
    """Gaussian IC instance: cross gains a (link 2->1) and b (link 1->2),
    plus per-user power constraints p1, p2 (linear, noise-normalized)."""

    a: float
    b: float
    p1: float
    p2: float

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        for name in ("p1", "p2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")


class Regime(enum.Enum):
    """Interference regime; boundaries a=1, b=1 count as the >=1 side."""

    STRONG = "strong"
    MIXED_A_WEAK = "mixed_a_weak"  # a < 1, b >= 1
    MIXED_B_WEAK = "mixed_b_weak"  # a >= 1, b < 1
    WEAK = "weak"


def capacity(x: float) -> float:
    """Gaussian capacity 0.5*log2(1+x) in bits/channel use; x is an SNR."""
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"capacity argument must be finite and >= 0, got {x!r}")
    return 0.5 * math.log2(1.0 + x)


def db_to_linear(snr_db: float) -> float:
    """Convert an SNR in dB to linear power: 10**(snr_db/10)."""
    if not math.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db!r}")
    return 10.0 ** (snr_db / 10.0)


def classify_regime(params: ChannelParams) -> Regime:
    """Classify (a, b) into strong / mixed / weak interference."""
    strong_a = params.a >= 1.0
    strong_b = params.b >= 1.0
    if strong_a and strong_b:
        return Regime.STRONG
    if strong_a:
        return Regime.MIXED_B_WEAK
    if strong_b:
        return Regime.MIXED_A_WEAK
    return Regime.WEAK
