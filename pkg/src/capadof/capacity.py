"""Water-filling power allocation over parallel sub-channels.

Gains are supplied as (singular value)^2 / noise by the caller; this module
is unit-agnostic. The water level is solved exactly by the sorted active-set
construction, with no iteration tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["WaterfillResult", "water_fill"]


@dataclass(frozen=True)
class WaterfillResult:
    """Optimal allocation: powers per channel (input order), the common water
    level, and the resulting capacity in bits."""

    allocations: np.ndarray
    water_level: float
    capacity_bits: float

    def to_json_dict(self) -> dict:
        return {
            "allocations": [float(p) for p in self.allocations],
            "water_level": self.water_level,
            "capacity_bits": self.capacity_bits,
        }


def water_fill(gains, total_power: float) -> WaterfillResult:
    """Distribute ``total_power`` over channels with the given power gains.

    Allocations satisfy p_i = max(0, mu - 1/g_i) with the water level mu
    chosen so the budget is met exactly; capacity is sum(log2(1 + g_i p_i)).

    Raises
    ------
    DomainError
        If no gain is positive, any gain is negative, or the power budget is
        not positive.
    """
    g = np.asarray(gains, dtype=float)
    if g.ndim != 1 or len(g) == 0:
        raise DomainError("gains must be a nonempty 1-D sequence")
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise DomainError("gains must be finite and nonnegative")
    if not np.any(g > 0):
        raise DomainError("water-filling requires at least one positive gain")
    if not total_power > 0:
        raise DomainError(f"total power must be positive, got {total_power}")

    # stable descending sort keeps equal gains in input order
    order = np.argsort(-g, kind="stable")
    g_sorted = g[order]
    n_pos = int(np.sum(g_sorted > 0))
    inv = 1.0 / g_sorted[:n_pos]

    # largest active set whose water level keeps its weakest channel positive
    candidates = (total_power + np.cumsum(inv)) / np.arange(1, n_pos + 1)
    k_active = int(np.nonzero(candidates > inv)[0][-1]) + 1
    mu = (total_power + float(np.sum(inv[:k_active]))) / k_active

    allocations = np.zeros_like(g)
    allocations[order[:k_active]] = mu - inv[:k_active]
    capacity = float(np.sum(np.log2(1.0 + g * allocations)))
    return WaterfillResult(allocations=allocations, water_level=mu, capacity_bits=capacity)
