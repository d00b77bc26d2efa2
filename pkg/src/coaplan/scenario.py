"""World model and course-of-action input.

A Scenario is immutable after load: terrain grid, units of both sides,
control measures, optional force groups, and the high-level task list the
planner expands. `load_scenario` enforces the JSON schema strictly (unknown
keys rejected, every error carries its JSON path); `validate_scenario`
checks the semantic invariants and returns Violations as data.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Optional, Union

from .errors import ParseError, SchemaError, Violation

log = logging.getLogger(__name__)

Cell = tuple[int, int]  # (row, col)

ID_RE = re.compile(r"^[a-z0-9_-]+$")
CLOCK_FORMAT = "%Y-%m-%dT%H:%M"


class TerrainKind(str, Enum):
    OPEN = "open"
    URBAN = "urban"
    FOREST = "forest"
    WATER = "water"
    OBSTACLE = "obstacle"


class Side(str, Enum):
    FRIENDLY = "friendly"
    ENEMY = "enemy"

    @property
    def opponent(self) -> "Side":
        return Side.ENEMY if self is Side.FRIENDLY else Side.FRIENDLY


class UnitKind(str, Enum):
    ARMOR = "armor"
    INFANTRY = "infantry"
    ARTILLERY = "artillery"
    LOGISTICS = "logistics"
    ENGINEER = "engineer"


class Echelon(str, Enum):
    COMPANY = "company"
    BATTALION = "battalion"
    BRIGADE = "brigade"


class MeasureKind(str, Enum):
    PHASE_LINE = "phase_line"
    AXIS = "axis"
    OBJECTIVE = "objective"


IMPASSABLE = (TerrainKind.WATER, TerrainKind.OBSTACLE)


@dataclass(frozen=True)
class GridCell:
    kind: TerrainKind
    mobility: float


@dataclass(frozen=True)
class TerrainGrid:
    width: int
    height: int
    cell_size_km: float
    cells: tuple[GridCell, ...]  # row-major

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.height and 0 <= c < self.width

    def at(self, cell: Cell) -> GridCell:
        r, c = cell
        return self.cells[r * self.width + c]

    def mobility(self, cell: Cell) -> float:
        return self.at(cell).mobility

    def passable(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.at(cell).mobility > 0.0

    def distance_km(self, a: Cell, b: Cell) -> float:
        """Euclidean distance between cell centers, in km."""
        return math.hypot(a[0] - b[0], a[1] - b[1]) * self.cell_size_km


@dataclass(frozen=True)
class Supplies:
    fuel_l: float
    ammo_u: float


@dataclass(frozen=True)
class Unit:
    id: str
    side: Side
    kind: UnitKind
    echelon: Echelon
    strength: float
    position: Cell
    max_speed_kmh: float
    weapon_range_km: float
    supplies: Supplies


@dataclass(frozen=True)
class ControlMeasure:
    id: str
    kind: MeasureKind
    geometry: tuple[Cell, ...]
    label: str

    def anchor(self) -> Cell:
        """Representative cell: the middle vertex of the geometry."""
        return self.geometry[len(self.geometry) // 2]


@dataclass(frozen=True)
class ForceGroup:
    id: str
    members: tuple[str, ...]


Objective = Union[str, Cell]  # control-measure id, or a raw cell


@dataclass(frozen=True)
class HighLevelTask:
    id: str
    verb: str
    actor: str  # unit id or force-group id
    objective: Objective
    after: tuple[str, ...] = ()


@dataclass(frozen=True)
class Scenario:
    name: str
    clock_start: datetime
    terrain: TerrainGrid
    units: tuple[Unit, ...]
    measures: tuple[ControlMeasure, ...]
    groups: tuple[ForceGroup, ...]
    coa: tuple[HighLevelTask, ...]

    def unit(self, unit_id: str) -> Unit:
        for u in self.units:
            if u.id == unit_id:
                return u
        raise KeyError(unit_id)

    def group(self, group_id: str) -> Optional[ForceGroup]:
        for g in self.groups:
            if g.id == group_id:
                return g
        return None

    def measure(self, measure_id: str) -> Optional[ControlMeasure]:
        for m in self.measures:
            if m.id == measure_id:
                return m
        return None

    def actor_units(self, actor: str) -> tuple[Unit, ...]:
        """Units behind an actor id: the unit itself, or all group members."""
        g = self.group(actor)
        if g is not None:
            return tuple(self.unit(m) for m in g.members)
        return (self.unit(actor),)

    def objective_cell(self, objective: Objective) -> Cell:
        """Anchor cell of an objective (measure anchor, or the cell itself)."""
        if isinstance(objective, str):
            m = self.measure(objective)
            if m is None:
                raise KeyError(objective)
            return m.anchor()
        return objective


# -- strict JSON loading ------------------------------------------------------

class _Reader:
    """Walks a decoded JSON document enforcing shape; errors carry the path."""

    def __init__(self, value: Any, path: str):
        self.value = value
        self.path = path

    def fail(self, message: str) -> SchemaError:
        return SchemaError(message, path=self.path)

    def obj(self, *keys: str) -> dict:
        if not isinstance(self.value, dict):
            raise self.fail(f"expected object, got {type(self.value).__name__}")
        extra = set(self.value) - set(keys)
        if extra:
            raise SchemaError(
                f"unknown field {sorted(extra)[0]!r}",
                path=f"{self.path}.{sorted(extra)[0]}" if self.path else sorted(extra)[0],
            )
        missing = set(keys) - set(self.value)
        if missing:
            raise SchemaError(
                f"missing field {sorted(missing)[0]!r}", path=self.path or "$"
            )
        return self.value

    def child(self, key: str) -> "_Reader":
        return _Reader(self.value[key], f"{self.path}.{key}" if self.path else key)

    def item(self, index: int) -> "_Reader":
        return _Reader(self.value[index], f"{self.path}[{index}]")

    def items(self) -> list["_Reader"]:
        if not isinstance(self.value, list):
            raise self.fail(f"expected array, got {type(self.value).__name__}")
        return [self.item(i) for i in range(len(self.value))]

    def str_(self) -> str:
        if not isinstance(self.value, str):
            raise self.fail(f"expected string, got {type(self.value).__name__}")
        return self.value

    def token(self) -> str:
        s = self.str_()
        if not ID_RE.match(s):
            raise self.fail(f"id {s!r} must match [a-z0-9_-]+")
        return s

    def num(self) -> float:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            raise self.fail(f"expected number, got {type(self.value).__name__}")
        return float(self.value)

    def int_(self) -> int:
        if isinstance(self.value, bool) or not isinstance(self.value, int):
            raise self.fail(f"expected integer, got {type(self.value).__name__}")
        return self.value

    def enum(self, cls: type) -> Any:
        s = self.str_()
        try:
            return cls(s)
        except ValueError:
            allowed = ", ".join(e.value for e in cls)  # type: ignore[attr-defined]
            raise self.fail(f"{s!r} is not one of: {allowed}") from None

    def cell(self) -> Cell:
        if not (isinstance(self.value, list) and len(self.value) == 2):
            raise self.fail("expected [row, col]")
        r = self.item(0).int_()
        c = self.item(1).int_()
        return (r, c)


def _read_unit(rd: _Reader) -> Unit:
    rd.obj("id", "side", "kind", "echelon", "strength", "position",
           "max_speed_kmh", "weapon_range_km", "supplies")
    sup = rd.child("supplies")
    sup.obj("fuel_l", "ammo_u")
    return Unit(
        id=rd.child("id").token(),
        side=rd.child("side").enum(Side),
        kind=rd.child("kind").enum(UnitKind),
        echelon=rd.child("echelon").enum(Echelon),
        strength=rd.child("strength").num(),
        position=rd.child("position").cell(),
        max_speed_kmh=rd.child("max_speed_kmh").num(),
        weapon_range_km=rd.child("weapon_range_km").num(),
        supplies=Supplies(
            fuel_l=sup.child("fuel_l").num(),
            ammo_u=sup.child("ammo_u").num(),
        ),
    )


def _read_measure(rd: _Reader) -> ControlMeasure:
    rd.obj("id", "kind", "geometry", "label")
    return ControlMeasure(
        id=rd.child("id").token(),
        kind=rd.child("kind").enum(MeasureKind),
        geometry=tuple(g.cell() for g in rd.child("geometry").items()),
        label=rd.child("label").str_(),
    )


def _read_task(rd: _Reader) -> HighLevelTask:
    rd.obj("id", "verb", "actor", "objective", "after")
    obj_rd = rd.child("objective")
    if not isinstance(obj_rd.value, dict) or set(obj_rd.value) not in ({"measure"}, {"cell"}):
        raise obj_rd.fail('expected {"measure": id} or {"cell": [row, col]}')
    objective: Objective
    if "measure" in obj_rd.value:
        objective = obj_rd.child("measure").token()
    else:
        objective = obj_rd.child("cell").cell()
    return HighLevelTask(
        id=rd.child("id").token(),
        verb=rd.child("verb").str_(),
        actor=rd.child("actor").token(),
        objective=objective,
        after=tuple(a.token() for a in rd.child("after").items()),
    )


def load_scenario(doc: str) -> Scenario:
    """Parse a scenario document. Raises ParseError / SchemaError."""
    try:
        raw = json.loads(doc)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg} (line {e.lineno} col {e.colno})") from None

    root = _Reader(raw, "")
    root.obj("name", "clock_start", "terrain", "units", "measures", "groups", "coa")

    clock_raw = root.child("clock_start").str_()
    try:
        clock_start = datetime.strptime(clock_raw, CLOCK_FORMAT)
    except ValueError:
        raise SchemaError(
            f"clock_start {clock_raw!r} must be YYYY-MM-DDTHH:MM", path="clock_start"
        ) from None

    trd = root.child("terrain")
    trd.obj("width", "height", "cell_size_km", "cells")
    cells = []
    for crd in trd.child("cells").items():
        crd.obj("kind", "mobility")
        cells.append(GridCell(
            kind=crd.child("kind").enum(TerrainKind),
            mobility=crd.child("mobility").num(),
        ))
    terrain = TerrainGrid(
        width=trd.child("width").int_(),
        height=trd.child("height").int_(),
        cell_size_km=trd.child("cell_size_km").num(),
        cells=tuple(cells),
    )

    groups = []
    for grd in root.child("groups").items():
        grd.obj("id", "members")
        groups.append(ForceGroup(
            id=grd.child("id").token(),
            members=tuple(m.token() for m in grd.child("members").items()),
        ))

    scenario = Scenario(
        name=root.child("name").str_(),
        clock_start=clock_start,
        terrain=terrain,
        units=tuple(_read_unit(u) for u in root.child("units").items()),
        measures=tuple(_read_measure(m) for m in root.child("measures").items()),
        groups=tuple(groups),
        coa=tuple(_read_task(t) for t in root.child("coa").items()),
    )
    n = len(scenario.coa)
    if n and not 2 <= n <= 20:
        log.warning("scenario %r: %d high-level tasks is outside the typical 2-20 range",
                    scenario.name, n)
    return scenario


def dump_scenario(s: Scenario) -> str:
    """Serialize back to the document format (inverse of load_scenario)."""
    def task(t: HighLevelTask) -> dict:
        obj = {"measure": t.objective} if isinstance(t.objective, str) else {"cell": list(t.objective)}
        return {"id": t.id, "verb": t.verb, "actor": t.actor,
                "objective": obj, "after": list(t.after)}

    doc = {
        "name": s.name,
        "clock_start": s.clock_start.strftime(CLOCK_FORMAT),
        "terrain": {
            "width": s.terrain.width,
            "height": s.terrain.height,
            "cell_size_km": s.terrain.cell_size_km,
            "cells": [{"kind": c.kind.value, "mobility": c.mobility} for c in s.terrain.cells],
        },
        "units": [
            {"id": u.id, "side": u.side.value, "kind": u.kind.value,
             "echelon": u.echelon.value, "strength": u.strength,
             "position": list(u.position), "max_speed_kmh": u.max_speed_kmh,
             "weapon_range_km": u.weapon_range_km,
             "supplies": {"fuel_l": u.supplies.fuel_l, "ammo_u": u.supplies.ammo_u}}
            for u in s.units
        ],
        "measures": [
            {"id": m.id, "kind": m.kind.value,
             "geometry": [list(g) for g in m.geometry], "label": m.label}
            for m in s.measures
        ],
        "groups": [{"id": g.id, "members": list(g.members)} for g in s.groups],
        "coa": [task(t) for t in s.coa],
    }
    return json.dumps(doc, indent=2) + "\n"


# -- semantic validation ------------------------------------------------------

def validate_scenario(s: Scenario) -> list[Violation]:
    """Check every scenario invariant. Empty result means plannable input."""
    out: list[Violation] = []

    def bad(code: str, path: str, message: str) -> None:
        out.append(Violation(code, path, message))

    t = s.terrain
    if t.width <= 0 or t.height <= 0:
        bad("BadGridShape", "terrain", f"grid {t.width}x{t.height} must be positive")
    if t.cell_size_km <= 0:
        bad("BadCellSize", "terrain.cell_size_km", "cell size must be positive")
    if len(t.cells) != t.width * t.height:
        bad("CellCountMismatch", "terrain.cells",
            f"{len(t.cells)} cells for a {t.width}x{t.height} grid")
    for i, c in enumerate(t.cells):
        if c.kind in IMPASSABLE and c.mobility != 0.0:
            bad("ImpassableMobility", f"terrain.cells[{i}]",
                f"{c.kind.value} cell must have mobility 0, got {c.mobility}")
        elif c.kind not in IMPASSABLE and not 0.0 < c.mobility <= 1.0:
            bad("MobilityOutOfRange", f"terrain.cells[{i}]",
                f"{c.kind.value} cell needs mobility in (0, 1], got {c.mobility}")

    grid_ok = len(t.cells) == t.width * t.height and t.width > 0 and t.height > 0

    seen_ids: dict[str, str] = {}

    def claim(owner_path: str, ident: str) -> None:
        if ident in seen_ids:
            bad("DuplicateId", owner_path,
                f"id {ident!r} already used at {seen_ids[ident]}")
        else:
            seen_ids[ident] = owner_path

    unit_ids = set()
    for i, u in enumerate(s.units):
        path = f"units[{i}]"
        claim(path, u.id)
        unit_ids.add(u.id)
        if u.strength <= 0:
            bad("NonPositiveStrength", f"{path}.strength", f"strength {u.strength} must be > 0")
        if u.max_speed_kmh <= 0:
            bad("NonPositiveSpeed", f"{path}.max_speed_kmh", f"speed {u.max_speed_kmh} must be > 0")
        if u.weapon_range_km < 0:
            bad("NegativeRange", f"{path}.weapon_range_km", "weapon range must be >= 0")
        if u.supplies.fuel_l < 0 or u.supplies.ammo_u < 0:
            bad("NegativeSupply", f"{path}.supplies", "supplies must be >= 0")
        if grid_ok:
            if not t.in_bounds(u.position):
                bad("UnitOffGrid", f"{path}.position", f"{u.position} outside the grid")
            elif not t.passable(u.position):
                bad("UnitOnImpassable", f"{path}.position",
                    f"{u.position} has mobility 0")

    for i, m in enumerate(s.measures):
        path = f"measures[{i}]"
        claim(path, m.id)
        if not m.geometry:
            bad("EmptyGeometry", f"{path}.geometry", "geometry must be nonempty")
        if grid_ok:
            for j, g in enumerate(m.geometry):
                if not t.in_bounds(g):
                    bad("GeometryOffGrid", f"{path}.geometry[{j}]", f"{g} outside the grid")

    for i, g in enumerate(s.groups):
        path = f"groups[{i}]"
        claim(path, g.id)
        if not g.members:
            bad("EmptyGroup", f"{path}.members", "group has no members")
        sides = set()
        for j, member in enumerate(g.members):
            if member not in unit_ids:
                bad("DanglingReference", f"{path}.members[{j}]", f"no unit {member!r}")
            else:
                sides.add(s.unit(member).side)
        if len(sides) > 1:
            bad("MixedSideGroup", f"{path}.members", "group mixes friendly and enemy units")

    n = len(s.coa)
    if not 1 <= n <= 64:
        bad("CoaSizeOutOfRange", "coa", f"{n} tasks; accepted range is 1-64")

    group_ids = {g.id for g in s.groups}
    measure_ids = {m.id for m in s.measures}
    task_ids = set()
    for i, task in enumerate(s.coa):
        path = f"coa[{i}]"
        claim(path, task.id)
        task_ids.add(task.id)
        if task.actor not in unit_ids and task.actor not in group_ids:
            bad("DanglingReference", f"{path}.actor",
                f"actor {task.actor!r} is neither a unit nor a group")
        if isinstance(task.objective, str):
            if task.objective not in measure_ids:
                bad("DanglingReference", f"{path}.objective",
                    f"no control measure {task.objective!r}")
        elif grid_ok and not t.in_bounds(task.objective):
            bad("ObjectiveOffGrid", f"{path}.objective",
                f"{task.objective} outside the grid")

    for i, task in enumerate(s.coa):
        for j, dep in enumerate(task.after):
            if dep not in task_ids:
                bad("DanglingReference", f"coa[{i}].after[{j}]", f"no task {dep!r}")

    if _coa_has_cycle(s.coa):
        bad("CyclicTaskOrder", "coa", "after-edges among tasks form a cycle")

    out.sort(key=lambda v: (v.path, v.code))
    return out


def _coa_has_cycle(tasks: tuple[HighLevelTask, ...]) -> bool:
    edges = {t.id: [d for d in t.after] for t in tasks}
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(tid: str) -> bool:
        if state.get(tid) == 1:
            return True
        if state.get(tid) == 2 or tid not in edges:
            return False
        state[tid] = 1
        for dep in edges[tid]:
            if visit(dep):
                return True
        state[tid] = 2
        return False

    return any(visit(t.id) for t in tasks)
