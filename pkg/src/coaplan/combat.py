"""Engagement attrition and supply consumption.

Attrition follows the aimed-fire square law dB/dt = -r*R, dR/dt = -b*B,
integrated with a fixed-step explicit RK4 at 0.1 min. RK4 keeps the
r*R^2 - b*B^2 invariant to ~1e-16 relative per step; a first-order scheme
drifts it by dt^2*b*r per step, which is far too coarse for the checks
this module has to satisfy. When a side would cross zero inside a step,
the crossing time is located by bisection so losses never overshoot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

STEP_MIN = 0.1
_BISECT_ITERS = 60


@dataclass(frozen=True)
class EngagementSpec:
    blue_strength: float
    red_strength: float
    blue_kill_rate: float  # red losses per minute per blue strength point
    red_kill_rate: float
    duration_min: int

    def __post_init__(self):
        for name in ("blue_strength", "red_strength", "blue_kill_rate", "red_kill_rate"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a nonnegative finite number, got {v}")
        if self.duration_min <= 0:
            raise ValueError(f"duration_min must be positive, got {self.duration_min}")


@dataclass(frozen=True)
class AttritionResult:
    node_id: int
    blue_loss: float
    red_loss: float
    terminated_early: bool
    live_min: float  # minutes the engagement stayed live (= duration unless early)


@dataclass(frozen=True)
class SupplyDelta:
    node_id: int
    unit_id: str
    fuel_l: float
    ammo_u: float


@dataclass(frozen=True)
class ConsumptionRate:
    fuel_l_per_min: float = 0.0
    ammo_u_per_min: float = 0.0


RateTable = dict[str, ConsumptionRate]  # verb -> rates


def _rk4_step(B: float, R: float, b: float, r: float, h: float) -> tuple[float, float]:
    k1B, k1R = -r * R, -b * B
    k2B, k2R = -r * (R + 0.5 * h * k1R), -b * (B + 0.5 * h * k1B)
    k3B, k3R = -r * (R + 0.5 * h * k2R), -b * (B + 0.5 * h * k2B)
    k4B, k4R = -r * (R + h * k3R), -b * (B + h * k3B)
    return (B + h * (k1B + 2 * k2B + 2 * k3B + k4B) / 6.0,
            R + h * (k1R + 2 * k2R + 2 * k3R + k4R) / 6.0)


def integrate_engagement(e: EngagementSpec, step: float = STEP_MIN) -> list[tuple[float, float, float]]:
    """Sampled (t, blue, red) trajectory of the unclamped square law.

    Stops one sample past the first nonpositive strength; everything before
    that is the pre-clamp trajectory the conservation invariant holds on.
    """
    samples = [(0.0, e.blue_strength, e.red_strength)]
    B, R = e.blue_strength, e.red_strength
    n = round(e.duration_min / step)
    for i in range(1, n + 1):
        B, R = _rk4_step(B, R, e.blue_kill_rate, e.red_kill_rate, step)
        samples.append((i * step, B, R))
        if B <= 0.0 or R <= 0.0:
            break
    return samples


def resolve_engagement(e: EngagementSpec, node_id: int = 0) -> AttritionResult:
    """Integrate the engagement, clamping at zero strength.

    If a side is annihilated mid-step the crossing time is bisected so the
    survivor's losses stop accruing exactly when the fire stops.
    """
    B, R = e.blue_strength, e.red_strength
    b, r = e.blue_kill_rate, e.red_kill_rate
    t = 0.0
    duration = float(e.duration_min)
    terminated = False

    if B <= 0.0 or R <= 0.0:
        # nothing to shoot at (or with); no losses either way
        return AttritionResult(node_id, 0.0, 0.0, False, 0.0)

    while t < duration and not terminated:
        h = min(STEP_MIN, duration - t)
        nB, nR = _rk4_step(B, R, b, r, h)
        if nB <= 0.0 or nR <= 0.0:
            lo, hi = 0.0, h
            for _ in range(_BISECT_ITERS):
                mid = 0.5 * (lo + hi)
                mB, mR = _rk4_step(B, R, b, r, mid)
                if mB <= 0.0 or mR <= 0.0:
                    hi = mid
                else:
                    lo = mid
            nB, nR = _rk4_step(B, R, b, r, hi)
            t += hi
            terminated = True
        else:
            t += h
        B, R = max(nB, 0.0), max(nR, 0.0)

    live = t if terminated else duration
    blue_loss = min(max(e.blue_strength - B, 0.0), e.blue_strength)
    red_loss = min(max(e.red_strength - R, 0.0), e.red_strength)
    return AttritionResult(node_id, blue_loss, red_loss, terminated, live)


def consume_supplies(node_id: int, unit_id: str, verb: str, duration_min: int,
                     rates: RateTable, live_min: float | None = None) -> SupplyDelta:
    """Supply draw of one scheduled action.

    Fuel accrues for the whole window; ammunition only while an engagement
    is live, so `live_min` (when given) truncates the ammo accrual.
    """
    rate = rates.get(verb, ConsumptionRate())
    ammo_minutes = float(duration_min) if live_min is None else min(float(duration_min), live_min)
    return SupplyDelta(
        node_id=node_id,
        unit_id=unit_id,
        fuel_l=rate.fuel_l_per_min * duration_min,
        ammo_u=rate.ammo_u_per_min * ammo_minutes,
    )
