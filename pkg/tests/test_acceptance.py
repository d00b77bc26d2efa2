"""Acceptance criteria, one test per criterion, tolerances pinned.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion; any assertion failure is that criterion's FAIL.
"""

from __future__ import annotations

import json
import subprocess
import sys
import time
from pathlib import Path
from random import Random

import numpy as np
import pytest

from coaplan import (EngagementSpec, build_sync_matrix, check_consistency,
                     expand_coa, export_matrix, integrate_engagement,
                     load_scenario, parse_kb, plan_route, plan_to_json,
                     resolve_engagement)
from coaplan.errors import UnroutableAction
from coaplan.plan import Origin

from conftest import FIXTURES, GOLDEN, read_fixture
from oracles import dijkstra_cost, euler_losses_batch
from randgen import random_scenario, soundness_kb
from test_routing import random_grid

LATENCY_BUDGET_S = 20.0


def ok(name: str, detail: str = "") -> None:
    print(f"ACCEPTANCE {name}: PASS {detail}".rstrip())


def test_criterion_scale_claim(delta_scenario, delta_kb):
    """Brigade fixture (12 tasks) expands to 50-500 nodes; exact plan pinned."""
    plan = expand_coa(delta_scenario, delta_kb)
    assert 50 <= plan.node_count <= 500
    golden = (GOLDEN / "delta_offense_plan.json").read_text(encoding="utf-8")
    assert plan.node_count == json.loads(golden)["stats"]["node_count"]
    assert plan_to_json(plan) == golden
    ok("scale-claim", f"({plan.node_count} nodes)")


def test_criterion_latency(fpol_scenario, fpol_kb, delta_scenario, delta_kb):
    """Every bundled fixture expands well inside the 20 s budget."""
    worst = 0.0
    for scenario, kb in ((fpol_scenario, fpol_kb), (delta_scenario, delta_kb)):
        started = time.perf_counter()
        plan = expand_coa(scenario, kb)
        elapsed = time.perf_counter() - started
        worst = max(worst, elapsed)
        assert plan.node_count > 0
        assert elapsed < LATENCY_BUDGET_S, f"{scenario.name}: {elapsed:.1f}s"
    ok("latency", f"(worst fixture {worst * 1000:.0f} ms, budget 20 s)")


def test_criterion_arc_walkthrough(fpol_scenario, fpol_kb):
    """In-range hostile artillery: exactly one reaction plus a counter.
    Out of range: no reactions at all. Exact counts, no tolerance."""
    plan = expand_coa(fpol_scenario, fpol_kb)
    reactions = [n for n in plan.nodes.values() if n.origin is Origin.REACTION]
    counters = [n for n in plan.nodes.values() if n.origin is Origin.COUNTERACTION]
    assert len(reactions) == 1
    assert reactions[0].verb == "artillery_fire"
    assert reactions[0].side.value == "enemy"
    assert len(counters) >= 1

    import dataclasses
    moved = dataclasses.replace(
        fpol_scenario,
        units=tuple(dataclasses.replace(u, position=(15, 30))
                    if u.id == "en-arty-1" else u
                    for u in fpol_scenario.units))
    plan_far = expand_coa(moved, fpol_kb)
    far_reactions = [n for n in plan_far.nodes.values()
                     if n.origin is Origin.REACTION]
    assert far_reactions == []
    ok("arc-walkthrough")


def test_criterion_planner_soundness():
    """check_consistency is empty on 200 randomized small scenarios."""
    kb = soundness_kb()
    for seed in range(200):
        scenario = random_scenario(seed)
        plan = expand_coa(scenario, kb)
        violations = check_consistency(plan)
        assert violations == [], f"seed {seed}: {violations[:3]}"
    ok("planner-soundness", "(200 scenarios)")


def test_criterion_routing_oracle():
    """A* cost equals the independent Dijkstra cost on 100 random grids."""
    checked = 0
    for seed in range(100):
        rng = Random(31337 + seed)
        grid = random_grid(rng, n=20)
        for _ in range(3):
            origin = (rng.randrange(20), rng.randrange(20))
            goal = (rng.randrange(20), rng.randrange(20))
            if not (grid.passable(origin) and grid.passable(goal)):
                continue
            expected = dijkstra_cost(grid, origin, goal)
            if expected is None:
                with pytest.raises(UnroutableAction):
                    plan_route(grid, origin, goal)
            else:
                assert plan_route(grid, origin, goal).cost == expected
            checked += 1
    assert checked >= 100
    ok("routing-oracle", f"({checked} origin/goal pairs, exact equality)")


def test_criterion_lanchester():
    """Invariant drift <= 1e-6 relative pre-clamp over 1000 random specs;
    losses within 1e-3 relative of a 1e-4-min-step reference integrator."""
    rng = np.random.default_rng(2026)
    n = 1000
    B0 = rng.uniform(1.0, 500.0, n)
    R0 = rng.uniform(1.0, 500.0, n)
    b = rng.uniform(0.0, 0.05, n)
    r = rng.uniform(0.0, 0.05, n)
    T = rng.integers(1, 31, n)

    worst_drift = 0.0
    for i in range(n):
        e = EngagementSpec(B0[i], R0[i], b[i], r[i], int(T[i]))
        i0 = r[i] * R0[i] ** 2 - b[i] * B0[i] ** 2
        scale = max(1.0, r[i] * R0[i] ** 2)
        for _, Bt, Rt in integrate_engagement(e):
            if Bt <= 0.0 or Rt <= 0.0:
                break
            drift = abs((r[i] * Rt ** 2 - b[i] * Bt ** 2) - i0) / scale
            worst_drift = max(worst_drift, drift)
            assert drift <= 1e-6

    blue_losses = np.empty(n)
    red_losses = np.empty(n)
    for i in range(n):
        res = resolve_engagement(EngagementSpec(B0[i], R0[i], b[i], r[i], int(T[i])))
        blue_losses[i] = res.blue_loss
        red_losses[i] = res.red_loss
    ref_blue, ref_red = euler_losses_batch(B0, R0, b, r, T.astype(float))
    for got, ref in ((blue_losses, ref_blue), (red_losses, ref_red)):
        err = np.abs(got - ref)
        tol = 1e-3 * np.maximum(np.abs(ref), 1e-6) + 1e-9
        assert (err <= tol).all(), f"worst rel err {(err / np.maximum(ref, 1e-12)).max()}"
    ok("lanchester", f"(worst invariant drift {worst_drift:.2e})")


def test_criterion_determinism(tmp_path):
    """Two CLI runs on identical inputs emit byte-identical artifacts."""
    for stem, kb in (("fpol-scenario", "fpol"), ("delta-offense", "delta")):
        outputs = []
        for run in (1, 2):
            out = tmp_path / f"{stem}-{run}.json"
            matrix = tmp_path / f"{stem}-{run}.csv"
            proc = subprocess.run(
                [sys.executable, "-m", "coaplan.cli", "plan",
                 str(FIXTURES / f"{stem}.json"), str(FIXTURES / f"{kb}.kb"),
                 "--out", str(out), "--matrix", str(matrix)],
                capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append((out.read_bytes(), matrix.read_bytes()))
        assert outputs[0] == outputs[1]
    ok("determinism", "(plan JSON and matrix CSV byte-identical)")


def test_criterion_monotone_growth(delta_scenario, delta_kb):
    """Adding one reaction rule never shrinks the plan (20 augmentations)."""
    base = expand_coa(delta_scenario, delta_kb).node_count
    base_text = read_fixture("delta.kb")
    triggers = ["consolidate", "observe_sector", "screen_flank", "recon_route",
                "pass_through", "assume_positions", "occupy_passage_point",
                "distribute_supplies", "establish_command_post", "proof_lane"]
    kinds = ["artillery", "armor"]
    cases = 0
    for i in range(20):
        trigger = triggers[i % len(triggers)]
        kind = kinds[i % 2]
        radius = 8 + 3 * i
        reaction = "artillery_fire" if kind == "artillery" else "spoiling_attack"
        counter = "counter_battery_fire" if kind == "artillery" else "suppress_fire"
        rule = (f"reaction on {trigger} by enemy {kind} within {radius} km "
                f"do {reaction} counter {counter};\n")
        augmented_kb = parse_kb(base_text + rule)
        count = expand_coa(delta_scenario, augmented_kb).node_count
        assert count >= base, f"rule {rule.strip()} shrank {base} -> {count}"
        cases += 1
    assert cases == 20
    ok("monotone-growth", f"(20 rule augmentations, base {base} nodes)")


def test_criterion_golden_matrix(delta_scenario, delta_kb, fpol_scenario, fpol_kb):
    """Matrix CSV equals the audited goldens byte for byte."""
    for scenario, kb, name in (
            (delta_scenario, delta_kb, "delta_offense_matrix.csv"),
            (fpol_scenario, fpol_kb, "fpol_scenario_matrix.csv")):
        plan = expand_coa(scenario, kb)
        csv_text = export_matrix(build_sync_matrix(plan), "csv")
        assert csv_text == (GOLDEN / name).read_text(encoding="utf-8")
    ok("golden-matrix")
