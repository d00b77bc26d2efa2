from __future__ import annotations

import math
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from coaplan import plan_route, travel_time
from coaplan.errors import UnroutableAction
from coaplan.routing import SQRT2, Route, octile_km
from coaplan.scenario import (Echelon, GridCell, Side, Supplies, TerrainGrid,
                              TerrainKind, Unit, UnitKind)

from oracles import dijkstra_cost

CHAR_CELLS = {
    "o": (TerrainKind.OPEN, 1.0),
    "f": (TerrainKind.FOREST, 0.5),
    "u": (TerrainKind.URBAN, 0.8),
    "w": (TerrainKind.WATER, 0.0),
    "x": (TerrainKind.OBSTACLE, 0.0),
}


def grid_from_text(text: str, cell_size_km: float = 1.0) -> TerrainGrid:
    rows = [r.strip() for r in text.strip().splitlines()]
    cells = tuple(
        GridCell(kind=CHAR_CELLS[ch][0], mobility=CHAR_CELLS[ch][1])
        for row in rows for ch in row
    )
    return TerrainGrid(width=len(rows[0]), height=len(rows),
                       cell_size_km=cell_size_km, cells=cells)


def open_grid(n: int, cell_size_km: float = 1.0) -> TerrainGrid:
    return grid_from_text("\n".join("o" * n for _ in range(n)), cell_size_km)


def random_grid(rng: Random, n: int = 20) -> TerrainGrid:
    cells = []
    for _ in range(n * n):
        roll = rng.random()
        if roll < 0.12:
            cells.append(GridCell(TerrainKind.WATER, 0.0))
        elif roll < 0.3:
            cells.append(GridCell(TerrainKind.FOREST, rng.choice((0.3, 0.5, 0.8))))
        elif roll < 0.38:
            cells.append(GridCell(TerrainKind.URBAN, 0.8))
        else:
            cells.append(GridCell(TerrainKind.OPEN, 1.0))
    return TerrainGrid(width=n, height=n, cell_size_km=1.0, cells=tuple(cells))


def make_unit(speed: float) -> Unit:
    return Unit(id="u1", side=Side.FRIENDLY, kind=UnitKind.ARMOR,
                echelon=Echelon.BATTALION, strength=100.0, position=(0, 0),
                max_speed_kmh=speed, weapon_range_km=2.0,
                supplies=Supplies(fuel_l=100.0, ammo_u=10.0))


def assert_route_valid(route: Route, grid: TerrainGrid):
    length = 0.0
    for a, b in zip(route.cells, route.cells[1:]):
        assert max(abs(a[0] - b[0]), abs(a[1] - b[1])) == 1  # 8-adjacent
        length += (SQRT2 if a[0] != b[0] and a[1] != b[1] else 1.0) * grid.cell_size_km
    for c in route.cells:
        assert grid.mobility(c) > 0.0
    assert route.length_km == pytest.approx(length)


def test_degenerate_route():
    r = plan_route(open_grid(5), (2, 2), (2, 2))
    assert r.cells == ((2, 2),)
    assert r.length_km == 0.0
    assert r.cost == 0.0


def test_open_diagonal_cost_matches_oracle():
    grid = open_grid(10)
    r = plan_route(grid, (0, 0), (9, 9))
    oracle = dijkstra_cost(grid, (0, 0), (9, 9))
    assert r.cost == oracle
    # nine diagonal 1-km steps, accumulated stepwise
    assert r.cost == 12.727922061357859
    assert r.cost == pytest.approx(12.728, abs=5e-4)
    assert len(r.cells) == 10


def test_enclosed_goal_is_unroutable():
    grid = grid_from_text("""
        ooooo
        oxxxo
        oxoxo
        oxxxo
        ooooo
    """)
    with pytest.raises(UnroutableAction):
        plan_route(grid, (0, 0), (2, 2))


def test_impassable_endpoints_are_unroutable():
    grid = grid_from_text("ow\noo")
    with pytest.raises(UnroutableAction):
        plan_route(grid, (0, 1), (1, 1))
    with pytest.raises(UnroutableAction):
        plan_route(grid, (0, 0), (0, 1))


def test_prefers_fast_terrain_over_short_path():
    # straight through the forest costs 4/0.5 = 8; skirting on open
    # ground costs 2*sqrt(2) + 2 < 5
    grid = grid_from_text("""
        ooooo
        offfo
        ooooo
    """)
    r = plan_route(grid, (1, 0), (1, 4))
    assert (1, 1) not in r.cells and (1, 2) not in r.cells
    assert r.cost == dijkstra_cost(grid, (1, 0), (1, 4))


def test_route_determinism():
    rng = Random(7)
    grid = random_grid(rng)
    a = plan_route(grid, (0, 0), (19, 19))
    b = plan_route(grid, (0, 0), (19, 19))
    assert a == b


@pytest.mark.parametrize("seed", range(25))
def test_astar_equals_dijkstra_on_random_grids(seed):
    rng = Random(1000 + seed)
    grid = random_grid(rng)
    pairs = 0
    while pairs < 3:
        origin = (rng.randrange(20), rng.randrange(20))
        goal = (rng.randrange(20), rng.randrange(20))
        if not (grid.passable(origin) and grid.passable(goal)):
            continue
        pairs += 1
        expected = dijkstra_cost(grid, origin, goal)
        if expected is None:
            with pytest.raises(UnroutableAction):
                plan_route(grid, origin, goal)
            continue
        route = plan_route(grid, origin, goal)
        assert route.cost == expected
        assert_route_valid(route, grid)


def test_heuristic_is_admissible():
    rng = Random(42)
    grid = random_grid(rng)
    goal = (10, 10)
    if not grid.passable(goal):
        goal = next((r, c) for r in range(20) for c in range(20)
                    if grid.passable((r, c)))
    for r in range(20):
        for c in range(20):
            if not grid.passable((r, c)):
                continue
            true_cost = dijkstra_cost(grid, (r, c), goal)
            if true_cost is None:
                continue
            assert octile_km((r, c), goal, 1.0) <= true_cost + 1e-12


def test_travel_time_flat():
    grid = open_grid(12)
    r = plan_route(grid, (0, 0), (0, 10))  # 10 km straight
    assert travel_time(r, make_unit(20.0)) == 30


def test_travel_time_degraded_mobility():
    grid = grid_from_text("f" * 11 + "\n" + "f" * 11)
    r = plan_route(grid, (0, 0), (0, 10))  # 10 km at mobility 0.5
    assert travel_time(r, make_unit(20.0)) == 60


def test_travel_time_zero_route():
    r = plan_route(open_grid(3), (1, 1), (1, 1))
    assert travel_time(r, make_unit(25.0)) == 0


def test_travel_time_rounds_up():
    grid = open_grid(3)
    r = plan_route(grid, (0, 0), (1, 1))  # sqrt(2) km
    # 60 * 1.4142 / 30 = 2.83 -> 3 minutes
    assert travel_time(r, make_unit(30.0)) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
def test_astar_equals_dijkstra_property(seed):
    rng = Random(seed)
    grid = random_grid(rng, n=12)
    origin = (rng.randrange(12), rng.randrange(12))
    goal = (rng.randrange(12), rng.randrange(12))
    if not (grid.passable(origin) and grid.passable(goal)):
        return
    expected = dijkstra_cost(grid, origin, goal)
    if expected is None:
        with pytest.raises(UnroutableAction):
            plan_route(grid, origin, goal)
    else:
        assert plan_route(grid, origin, goal).cost == expected
