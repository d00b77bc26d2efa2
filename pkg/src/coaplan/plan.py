"""Plan data model: the growing DAG of detailed actions plus its ledgers.

Node ids are assigned monotonically in creation order, so a deterministic
expansion yields identical ids run to run. `path` is a stable provenance
key (task id, subtask names, rule ordinals) that survives replanning and
lets edits pin "the same" node across versions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .combat import AttritionResult, SupplyDelta
from .kb import BattlefieldFunction, KnowledgeBase
from .routing import Route
from .scenario import CLOCK_FORMAT, Objective, Scenario, Side


class Origin(str, Enum):
    USER = "user"
    DECOMPOSITION = "decomposition"
    REACTION = "reaction"
    COUNTERACTION = "counteraction"


@dataclass(frozen=True)
class ArcProvenance:
    rule_id: str
    reactor_id: str
    distance_km: float


@dataclass
class ActionNode:
    id: int
    verb: str
    side: Side
    actor: str  # unit id; may be a force-group id until allocation
    function: BattlefieldFunction
    objective: Objective
    origin: Origin
    arc_depth: int
    path: str
    parent: Optional[int] = None
    deps: tuple[int, ...] = ()
    not_before_min: int = 0
    pin_start_min: Optional[int] = None
    window: Optional[tuple[int, int]] = None
    route: Optional[Route] = None
    duration_min: Optional[int] = None
    composite: bool = False
    provenance: Optional[ArcProvenance] = None

    @property
    def scheduled(self) -> bool:
        return self.window is not None

    @property
    def start_min(self) -> int:
        assert self.window is not None
        return self.window[0]

    @property
    def end_min(self) -> int:
        assert self.window is not None
        return self.window[1]


@dataclass(frozen=True)
class EngagementRecord:
    """Attrition ledger entry; names both units so effects can be projected."""
    node_id: int
    blue_unit: str
    red_unit: str
    result: AttritionResult


@dataclass(frozen=True)
class PlannerConfig:
    arc_depth_cap: int = 3
    node_cap: int = 2000
    sync_period_min: int = 30
    kill_rate_per_min: float = 0.002  # both sides, per minute of engagement

    def __post_init__(self):
        if self.arc_depth_cap < 1:
            raise ValueError("arc_depth_cap must be >= 1")
        if self.node_cap < 1:
            raise ValueError("node_cap must be >= 1")
        if self.sync_period_min < 1:
            raise ValueError("sync_period_min must be >= 1")


@dataclass
class Plan:
    version: int
    scenario: Scenario
    config: PlannerConfig
    kb: KnowledgeBase
    nodes: dict[int, ActionNode] = field(default_factory=dict)
    attrition_ledger: tuple[EngagementRecord, ...] = ()
    supply_ledger: tuple[SupplyDelta, ...] = ()
    wall_time_ms: float = 0.0

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def roots(self) -> list[ActionNode]:
        return [n for n in self.nodes.values() if n.parent is None]

    def children_of(self, node_id: int) -> list[ActionNode]:
        return [n for n in self.nodes.values()
                if n.parent == node_id and n.origin is Origin.DECOMPOSITION]

    def horizon_min(self) -> int:
        ends = [n.end_min for n in self.nodes.values() if n.scheduled]
        return max(ends) if ends else 0


# -- serialization ------------------------------------------------------------

def _objective_dict(obj: Objective) -> dict:
    if isinstance(obj, str):
        return {"measure": obj}
    return {"cell": list(obj)}


def objective_from_dict(d: dict) -> Objective:
    if "measure" in d:
        return d["measure"]
    return (d["cell"][0], d["cell"][1])


def _node_dict(n: ActionNode) -> dict:
    return {
        "id": n.id,
        "verb": n.verb,
        "side": n.side.value,
        "actor": n.actor,
        "function": n.function.value,
        "objective": _objective_dict(n.objective),
        "origin": n.origin.value,
        "arc_depth": n.arc_depth,
        "path": n.path,
        "parent": n.parent,
        "deps": list(n.deps),
        "not_before_min": n.not_before_min,
        "pin_start_min": n.pin_start_min,
        "window": (None if n.window is None
                   else {"start_min": n.window[0], "end_min": n.window[1]}),
        "route": (None if n.route is None else {
            "cells": [list(c) for c in n.route.cells],
            "length_km": n.route.length_km,
            "cost": n.route.cost,
        }),
        "composite": n.composite,
        "provenance": (None if n.provenance is None else {
            "rule_id": n.provenance.rule_id,
            "reactor_id": n.provenance.reactor_id,
            "distance_km": n.provenance.distance_km,
        }),
    }


def plan_to_dict(p: Plan) -> dict:
    """Stable export; wall time is measurement noise and stays out of it."""
    return {
        "version": p.version,
        "scenario": p.scenario.name,
        "clock_start": p.scenario.clock_start.strftime(CLOCK_FORMAT),
        "config": {
            "arc_depth_cap": p.config.arc_depth_cap,
            "node_cap": p.config.node_cap,
            "sync_period_min": p.config.sync_period_min,
            "kill_rate_per_min": p.config.kill_rate_per_min,
        },
        "nodes": [_node_dict(p.nodes[i]) for i in sorted(p.nodes)],
        "attrition": [
            {
                "node": rec.node_id,
                "blue_unit": rec.blue_unit,
                "red_unit": rec.red_unit,
                "blue_loss": rec.result.blue_loss,
                "red_loss": rec.result.red_loss,
                "terminated_early": rec.result.terminated_early,
                "live_min": rec.result.live_min,
            }
            for rec in p.attrition_ledger
        ],
        "supply": [
            {"node": d.node_id, "unit": d.unit_id, "fuel_l": d.fuel_l, "ammo_u": d.ammo_u}
            for d in p.supply_ledger
        ],
        "stats": {"node_count": p.node_count},
    }


def plan_to_json(p: Plan) -> str:
    return json.dumps(plan_to_dict(p), indent=2) + "\n"
