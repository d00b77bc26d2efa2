"""Movement paths and travel times over the terrain grid.

8-connected grid, entry-cost convention: each step costs
step_length_km / mobility(destination cell). The octile-distance heuristic
is admissible because mobility never exceeds 1. Relaxation is allowed to
reopen nodes, so the returned cost is the exact minimum over float path
sums regardless of heuristic rounding.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import UnroutableAction
from .scenario import Cell, TerrainGrid, Unit

SQRT2 = math.sqrt(2.0)

# (dr, dc) in (row, col) order so neighbor generation is deterministic
_STEPS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class Route:
    cells: tuple[Cell, ...]
    length_km: float
    cost: float


def octile_km(a: Cell, b: Cell, cell_size_km: float) -> float:
    """Shortest possible 8-connected path length between two cells, in km."""
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    return (max(dr, dc) + (SQRT2 - 1.0) * min(dr, dc)) * cell_size_km


def plan_route(grid: TerrainGrid, origin: Cell, goal: Cell) -> Route:
    """Minimal-cost route between two passable cells.

    Raises UnroutableAction when origin/goal are impassable or disconnected.
    Ties between equal-cost successors resolve toward smaller (row, col).
    """
    if not grid.passable(origin):
        raise UnroutableAction(f"origin {origin} is impassable")
    if not grid.passable(goal):
        raise UnroutableAction(f"goal {goal} is impassable")
    if origin == goal:
        return Route(cells=(origin,), length_km=0.0, cost=0.0)

    size = grid.cell_size_km

    def h(cell: Cell) -> float:
        # Shrink a hair so float rounding can never push the heuristic above
        # the true remaining cost; keeps the search exact, not just near-exact.
        return octile_km(cell, goal, size) * (1.0 - 1e-12)

    dist: dict[Cell, float] = {origin: 0.0}
    parent: dict[Cell, Cell] = {}
    heap: list[tuple[float, int, int, float, Cell]] = []
    heapq.heappush(heap, (h(origin), origin[0], origin[1], 0.0, origin))

    while heap:
        f, _, _, g, cur = heapq.heappop(heap)
        if f >= dist.get(goal, math.inf):
            break  # no remaining entry can improve the goal
        if g > dist[cur]:
            continue  # stale entry
        for dr, dc in _STEPS:
            nxt = (cur[0] + dr, cur[1] + dc)
            if not grid.in_bounds(nxt):
                continue
            mob = grid.mobility(nxt)
            if mob <= 0.0:
                continue
            step_km = (SQRT2 if dr and dc else 1.0) * size
            ng = g + step_km / mob
            if ng < dist.get(nxt, math.inf):
                dist[nxt] = ng
                parent[nxt] = cur
                heapq.heappush(heap, (ng + h(nxt), nxt[0], nxt[1], ng, nxt))

    if goal not in dist:
        raise UnroutableAction(f"no path from {origin} to {goal}")

    cells = [goal]
    while cells[-1] != origin:
        cells.append(parent[cells[-1]])
    cells.reverse()
    length = 0.0
    for a, b in zip(cells, cells[1:]):
        length += (SQRT2 if a[0] != b[0] and a[1] != b[1] else 1.0) * size
    return Route(cells=tuple(cells), length_km=length, cost=dist[goal])


def travel_time(route: Route, unit: Unit) -> int:
    """Route traversal time in whole minutes, rounded up.

    Per-step time is 60 * step_km / (speed * mobility(dest)); summing and
    factoring out the constant speed gives 60 * route.cost / speed.
    """
    if unit.max_speed_kmh <= 0:
        raise ValueError(f"unit {unit.id} has non-positive speed")
    return math.ceil(60.0 * route.cost / unit.max_speed_kmh)
