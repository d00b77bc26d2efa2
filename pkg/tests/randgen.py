"""Seeded random scenario generator for planner soundness sweeps.

Every generated scenario passes validate_scenario and is plannable by
construction: all units and objectives are placed inside the largest
passable component of the terrain, and the companion KB only demands unit
kinds the generator always provides.
"""

from __future__ import annotations

from collections import deque
from datetime import datetime
from random import Random

from coaplan import parse_kb
from coaplan.scenario import (ControlMeasure, Echelon, GridCell, HighLevelTask,
                              MeasureKind, Scenario, Side, Supplies, TerrainGrid,
                              TerrainKind, Unit, UnitKind)

SOUNDNESS_KB_TEXT = """
primitive hold_position dur 30 min fn security;
primitive march dur 20 min fn maneuver moves fuel 0.2;
primitive strike dur 25 min fn fires needs artillery engages ammo 0.5;
primitive raid dur 40 min fn maneuver engages ammo 0.3;
primitive watch dur 45 min fn intelligence;

activity seize fn maneuver {
  subtasks {
    march(self, anchor) as approach;
    raid(self, inherit) after approach as assault;
    hold_position(self, inherit) after assault as hold;
  }
}

activity secure fn security {
  subtasks {
    watch(nearest friendly infantry, anchor) as eyes;
    hold_position(self, inherit) with eyes as hold;
  }
}

reaction on march by enemy artillery within 12 km do strike counter strike;
reaction on march by friendly artillery within 12 km do strike counter strike;
reaction on raid by enemy armor within 10 km do raid counter strike;
"""

TASK_VERBS = ("seize", "secure", "march", "hold_position")


def soundness_kb():
    return parse_kb(SOUNDNESS_KB_TEXT)


def _largest_component(grid: TerrainGrid) -> list:
    seen = set()
    best: list = []
    for r in range(grid.height):
        for c in range(grid.width):
            if (r, c) in seen or not grid.passable((r, c)):
                continue
            comp = []
            queue = deque([(r, c)])
            seen.add((r, c))
            while queue:
                cur = queue.popleft()
                comp.append(cur)
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        nxt = (cur[0] + dr, cur[1] + dc)
                        if (nxt not in seen and grid.in_bounds(nxt)
                                and grid.passable(nxt)):
                            seen.add(nxt)
                            queue.append(nxt)
            if len(comp) > len(best):
                best = comp
    best.sort()
    return best


def random_scenario(seed: int) -> Scenario:
    rng = Random(seed)
    width = rng.randint(12, 20)
    height = rng.randint(12, 20)
    cells = []
    for _ in range(width * height):
        roll = rng.random()
        if roll < 0.06:
            cells.append(GridCell(kind=TerrainKind.WATER, mobility=0.0))
        elif roll < 0.2:
            cells.append(GridCell(kind=TerrainKind.FOREST,
                                  mobility=rng.choice((0.4, 0.6, 0.8))))
        else:
            cells.append(GridCell(kind=TerrainKind.OPEN, mobility=1.0))
    grid = TerrainGrid(width=width, height=height, cell_size_km=1.0,
                       cells=tuple(cells))
    component = _largest_component(grid)

    def spot():
        return component[rng.randrange(len(component))]

    units = []

    def add_unit(side: Side, kind: UnitKind):
        uid = f"{side.value[:2]}-{kind.value[:4]}-{len(units)}"
        wrange = rng.uniform(14.0, 22.0) if kind is UnitKind.ARTILLERY \
            else rng.uniform(1.5, 4.0)
        units.append(Unit(
            id=uid, side=side, kind=kind,
            echelon=rng.choice(tuple(Echelon)),
            strength=rng.uniform(120.0, 500.0),
            position=spot(),
            max_speed_kmh=rng.uniform(20.0, 40.0),
            weapon_range_km=wrange,
            supplies=Supplies(fuel_l=rng.uniform(800.0, 3000.0),
                              ammo_u=rng.uniform(300.0, 1000.0)),
        ))
        return uid

    add_unit(Side.FRIENDLY, UnitKind.INFANTRY)
    add_unit(Side.FRIENDLY, UnitKind.ARTILLERY)
    for _ in range(rng.randint(0, 2)):
        add_unit(Side.FRIENDLY, rng.choice((UnitKind.ARMOR, UnitKind.INFANTRY,
                                            UnitKind.LOGISTICS)))
    add_unit(Side.ENEMY, UnitKind.ARTILLERY)
    for _ in range(rng.randint(1, 2)):
        add_unit(Side.ENEMY, rng.choice((UnitKind.ARMOR, UnitKind.INFANTRY)))

    measures = tuple(
        ControlMeasure(
            id=f"obj-{i}", kind=MeasureKind.OBJECTIVE,
            geometry=tuple(spot() for _ in range(rng.randint(1, 3))),
            label=f"OBJ {i}",
        )
        for i in range(rng.randint(1, 3))
    )

    friendly = [u for u in units if u.side is Side.FRIENDLY]
    enemy = [u for u in units if u.side is Side.ENEMY]
    tasks = []
    for i in range(rng.randint(1, 5)):
        side_pool = friendly if rng.random() < 0.85 else enemy
        actor = side_pool[rng.randrange(len(side_pool))].id
        objective = (measures[rng.randrange(len(measures))].id
                     if measures and rng.random() < 0.6 else spot())
        after = tuple(t.id for t in tasks if rng.random() < 0.3)
        tasks.append(HighLevelTask(
            id=f"t{i}", verb=rng.choice(TASK_VERBS), actor=actor,
            objective=objective, after=after,
        ))

    return Scenario(
        name=f"random-{seed}",
        clock_start=datetime(2026, 3, 1, 6, 0),
        terrain=grid,
        units=tuple(units),
        measures=measures,
        groups=(),
        coa=tuple(tasks),
    )
