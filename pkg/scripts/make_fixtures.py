#!/usr/bin/env python3
"""Materialize the bundled scenario fixtures.

The terrain grids are too large to hand-write readably, so this script is
the auditable source: it lays out the maps cell by cell and writes the
scenario JSON documents under fixtures/. Run it after changing a layout;
the outputs are committed.
"""

from __future__ import annotations

import json
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def flat_grid(width: int, height: int, patches) -> list[dict]:
    """Row-major cell list: open 1.0 everywhere, then apply patches.

    Each patch is (predicate(row, col) -> bool, kind, mobility).
    """
    cells = []
    for r in range(height):
        for c in range(width):
            kind, mob = "open", 1.0
            for pred, k, m in patches:
                if pred(r, c):
                    kind, mob = k, m
            cells.append({"kind": kind, "mobility": mob})
    return cells


def unit(uid, side, kind, echelon, strength, pos, speed, wrange, fuel, ammo):
    return {
        "id": uid, "side": side, "kind": kind, "echelon": echelon,
        "strength": strength, "position": list(pos), "max_speed_kmh": speed,
        "weapon_range_km": wrange,
        "supplies": {"fuel_l": fuel, "ammo_u": ammo},
    }


def measure(mid, kind, geometry, label):
    return {"id": mid, "kind": kind, "geometry": [list(g) for g in geometry],
            "label": label}


def task(tid, verb, actor, objective, after=()):
    obj = {"measure": objective} if isinstance(objective, str) else {"cell": list(objective)}
    return {"id": tid, "verb": verb, "actor": actor, "objective": obj,
            "after": list(after)}


def fpol_scenario() -> dict:
    # 40x40 open plain, 1 km cells. Passage point on the friendly line at
    # (15, 10); hostile artillery sits exactly 12.0 km east of it.
    return {
        "name": "fpol-passage",
        "clock_start": "2026-02-09T06:00",
        "terrain": {
            "width": 40, "height": 40, "cell_size_km": 1.0,
            "cells": flat_grid(40, 40, []),
        },
        "units": [
            unit("tf-arrow", "friendly", "armor", "battalion", 400, (30, 10),
                 30, 3.0, 2000, 500),
            unit("1-77-inf", "friendly", "infantry", "battalion", 300, (16, 10),
                 20, 2.0, 1200, 400),
            unit("fa-bn", "friendly", "artillery", "battalion", 200, (25, 6),
                 25, 25.0, 1500, 1000),
            unit("en-arty-1", "enemy", "artillery", "battalion", 150, (15, 22),
                 25, 18.0, 1000, 800),
            unit("en-mech-1", "enemy", "armor", "battalion", 350, (5, 30),
                 30, 3.0, 1800, 600),
        ],
        "measures": [
            measure("pp-alpha", "objective", [(14, 10), (15, 10), (16, 10)],
                    "PP ALPHA"),
            measure("pl-gold", "phase_line", [(10, 0), (10, 20), (10, 39)],
                    "PL GOLD"),
        ],
        "groups": [],
        "coa": [
            task("t1", "forward_passage_of_lines", "tf-arrow", "pp-alpha"),
        ],
    }


def delta_scenario() -> dict:
    # 40x40 valley, 1 km cells. A north-south river along column 20 with
    # bridges at rows 10 and 28; forest in the northwest, a town block in
    # the southeast. Friendly brigade assembles west, enemy defends east.
    patches = [
        (lambda r, c: c == 20, "water", 0.0),
        (lambda r, c: c == 20 and r in (10, 28), "open", 1.0),
        (lambda r, c: 4 <= r <= 8 and 4 <= c <= 10, "forest", 0.6),
        (lambda r, c: 30 <= r <= 33 and 30 <= c <= 34, "urban", 0.8),
    ]
    return {
        "name": "delta-offense",
        "clock_start": "2026-02-09T05:30",
        "terrain": {
            "width": 40, "height": 40, "cell_size_km": 1.0,
            "cells": flat_grid(40, 40, patches),
        },
        "units": [
            unit("bn-1", "friendly", "armor", "battalion", 450, (12, 4),
                 35, 3.0, 3000, 700),
            unit("bn-2", "friendly", "armor", "battalion", 450, (16, 4),
                 35, 3.0, 3000, 700),
            unit("bn-3", "friendly", "infantry", "battalion", 500, (24, 5),
                 25, 2.0, 2200, 800),
            unit("fa-1", "friendly", "artillery", "battalion", 250, (18, 3),
                 25, 30.0, 1800, 1600),
            unit("fa-2", "friendly", "artillery", "battalion", 250, (26, 3),
                 25, 30.0, 1800, 1600),
            unit("eng-1", "friendly", "engineer", "company", 120, (20, 4),
                 25, 1.0, 900, 200),
            unit("log-1", "friendly", "logistics", "company", 100, (22, 2),
                 30, 0.5, 2500, 100),
            unit("scout-1", "friendly", "armor", "company", 90, (10, 6),
                 45, 2.0, 700, 150),
            unit("en-inf-1", "enemy", "infantry", "battalion", 420, (12, 30),
                 20, 2.0, 1500, 900),
            unit("en-inf-2", "enemy", "infantry", "battalion", 420, (28, 32),
                 20, 2.0, 1500, 900),
            unit("en-armor-1", "enemy", "armor", "battalion", 380, (20, 33),
                 30, 3.0, 2000, 700),
            unit("en-arty-1", "enemy", "artillery", "battalion", 260, (14, 33),
                 25, 22.0, 1200, 1400),
            unit("en-arty-2", "enemy", "artillery", "battalion", 260, (30, 36),
                 25, 22.0, 1200, 1400),
        ],
        "measures": [
            measure("aa-west", "objective", [(22, 8), (23, 9), (24, 10)], "AA WEST"),
            measure("pp-north", "objective", [(9, 20), (10, 20), (11, 20)], "PP NORTH"),
            measure("obj-slam", "objective", [(11, 28), (12, 29), (13, 30)], "OBJ SLAM"),
            measure("obj-anvil", "objective", [(19, 32), (20, 33), (21, 34)], "OBJ ANVIL"),
            measure("obj-hammer", "objective", [(27, 31), (28, 32), (29, 33)], "OBJ HAMMER"),
            measure("sector-north", "objective", [(6, 22), (7, 23), (8, 24)], "SECTOR N"),
            measure("axis-bull", "axis", [(14, 6), (12, 12), (10, 19), (12, 26)],
                    "AXIS BULL"),
            measure("pl-red", "phase_line", [(0, 18), (20, 18), (39, 18)], "PL RED"),
            measure("pl-blue", "phase_line", [(0, 26), (20, 26), (39, 26)], "PL BLUE"),
        ],
        "groups": [
            {"id": "tf-iron", "members": ["bn-1", "bn-2"]},
            {"id": "tf-dagger", "members": ["bn-3"]},
        ],
        "coa": [
            task("t1", "tactical_road_march", "tf-iron", "aa-west"),
            task("t2", "screen_line", "scout-1", "sector-north"),
            task("t3", "resupply_operation", "log-1", "aa-west", after=["t1"]),
            task("t4", "command_coordination", "tf-iron", "aa-west", after=["t1"]),
            task("t5", "forward_passage_of_lines", "tf-iron", "pp-north",
                 after=["t1", "t3"]),
            task("t6", "attack", "tf-iron", "obj-slam", after=["t5"]),
            task("t7", "attack", "tf-dagger", "obj-anvil", after=["t5"]),
            task("t8", "deliberate_attack", "tf-iron", "obj-hammer", after=["t6"]),
            task("t9", "screen_line", "scout-1", "pl-blue", after=["t5"]),
            task("t10", "resupply_operation", "log-1", "pp-north",
                 after=["t6", "t7"]),
            task("t11", "tactical_road_march", "tf-dagger", "pl-blue",
                 after=["t7"]),
            task("t12", "command_coordination", "tf-iron", "obj-slam",
                 after=["t6"]),
        ],
    }


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    for name, doc in (("fpol-scenario.json", fpol_scenario()),
                      ("delta-offense.json", delta_scenario())):
        path = FIXTURES / name
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
