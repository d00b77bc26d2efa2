"""Projection of unit positions, strengths and supplies to a plan time.

The planner commits movement segments and attrition/supply ledger entries
as it schedules actions; a WorldState is a snapshot of every unit at one
minute mark. Strength and supply effects land when their action finishes;
positions interpolate linearly along route cells while a move is underway.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .routing import Route
from .scenario import Cell, Scenario, Side, Unit, UnitKind


@dataclass(frozen=True)
class UnitSnapshot:
    unit: Unit
    position: Cell
    strength: float
    fuel_l: float
    ammo_u: float

    @property
    def id(self) -> str:
        return self.unit.id

    @property
    def alive(self) -> bool:
        return self.strength > 0.0


@dataclass(frozen=True)
class WorldState:
    scenario: Scenario
    time_min: int
    states: dict[str, UnitSnapshot]

    def unit_state(self, unit_id: str) -> UnitSnapshot:
        return self.states[unit_id]

    def find(self, side: Side | None = None, kind: UnitKind | None = None,
             alive: bool = True) -> list[UnitSnapshot]:
        """Snapshots in scenario unit order, filtered."""
        out = []
        for u in self.scenario.units:
            st = self.states[u.id]
            if side is not None and u.side is not side:
                continue
            if kind is not None and u.kind is not kind:
                continue
            if alive and not st.alive:
                continue
            out.append(st)
        return out


@dataclass
class _UnitLedger:
    moves: list[tuple[int, int, Route]] = field(default_factory=list)  # (start, end, route)
    strength_losses: list[tuple[int, float]] = field(default_factory=list)  # (at_end, loss)
    fuel_spent: list[tuple[int, float]] = field(default_factory=list)
    ammo_spent: list[tuple[int, float]] = field(default_factory=list)


def _route_cell(route: Route, fraction: float) -> Cell:
    idx = round(fraction * (len(route.cells) - 1))
    return route.cells[idx]


def _route_point(route: Route, fraction: float) -> tuple[float, float]:
    if len(route.cells) == 1:
        return (float(route.cells[0][0]), float(route.cells[0][1]))
    x = fraction * (len(route.cells) - 1)
    i = min(int(x), len(route.cells) - 2)
    frac = x - i
    a, b = route.cells[i], route.cells[i + 1]
    return (a[0] + (b[0] - a[0]) * frac, a[1] + (b[1] - a[1]) * frac)


class WorldProjector:
    """Accumulates schedule effects and serves WorldState snapshots."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self._ledgers: dict[str, _UnitLedger] = {u.id: _UnitLedger() for u in scenario.units}

    def commit_move(self, unit_id: str, start_min: int, end_min: int, route: Route) -> None:
        ledger = self._ledgers[unit_id].moves
        ledger.append((start_min, end_min, route))
        ledger.sort(key=lambda seg: seg[0])

    def commit_attrition(self, unit_id: str, at_end_min: int, loss: float) -> None:
        if loss > 0.0:
            self._ledgers[unit_id].strength_losses.append((at_end_min, loss))

    def commit_supply(self, unit_id: str, at_end_min: int, fuel_l: float, ammo_u: float) -> None:
        if fuel_l:
            self._ledgers[unit_id].fuel_spent.append((at_end_min, fuel_l))
        if ammo_u:
            self._ledgers[unit_id].ammo_spent.append((at_end_min, ammo_u))

    def position_at(self, unit_id: str, t: int) -> Cell:
        unit = self.scenario.unit(unit_id)
        pos = unit.position
        for start, end, route in self._ledgers[unit_id].moves:
            if t < start:
                break
            if t >= end:
                pos = route.cells[-1]
            else:
                frac = (t - start) / (end - start) if end > start else 1.0
                return _route_cell(route, frac)
        return pos

    def point_at(self, unit_id: str, t: int) -> tuple[float, float]:
        """Fractional (row, col) for animation; linear along route cells."""
        unit = self.scenario.unit(unit_id)
        pos = (float(unit.position[0]), float(unit.position[1]))
        for start, end, route in self._ledgers[unit_id].moves:
            if t < start:
                break
            if t >= end:
                pos = (float(route.cells[-1][0]), float(route.cells[-1][1]))
            else:
                frac = (t - start) / (end - start) if end > start else 1.0
                return _route_point(route, frac)
        return pos

    def strength_at(self, unit_id: str, t: int) -> float:
        unit = self.scenario.unit(unit_id)
        lost = sum(loss for at, loss in self._ledgers[unit_id].strength_losses if at <= t)
        return max(unit.strength - lost, 0.0)

    def supplies_at(self, unit_id: str, t: int) -> tuple[float, float]:
        unit = self.scenario.unit(unit_id)
        led = self._ledgers[unit_id]
        fuel = unit.supplies.fuel_l - sum(v for at, v in led.fuel_spent if at <= t)
        ammo = unit.supplies.ammo_u - sum(v for at, v in led.ammo_spent if at <= t)
        return fuel, ammo

    def snapshot(self, t: int) -> WorldState:
        states = {}
        for u in self.scenario.units:
            fuel, ammo = self.supplies_at(u.id, t)
            states[u.id] = UnitSnapshot(
                unit=u,
                position=self.position_at(u.id, t),
                strength=self.strength_at(u.id, t),
                fuel_l=fuel,
                ammo_u=ammo,
            )
        return WorldState(scenario=self.scenario, time_min=t, states=states)


def initial_state(scenario: Scenario) -> WorldState:
    return WorldProjector(scenario).snapshot(0)
