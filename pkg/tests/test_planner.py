from __future__ import annotations

import json

import pytest

from coaplan import (PlannerConfig, check_consistency, expand_coa, load_scenario,
                     parse_kb, plan_to_json)
from coaplan.errors import NodeCapExceeded, UnknownVerb
from coaplan.kb import OrderAfter
from coaplan.plan import Origin
from coaplan.planner import InvalidScenario, decompose
from coaplan.scenario import Side
from coaplan.worldstate import initial_state

from randgen import random_scenario, soundness_kb
from test_scenario import minimal_doc

MARCH_KB = parse_kb("primitive march dur 30 min fn maneuver moves fuel 0.5;")


def open_march_scenario():
    doc = minimal_doc()
    doc["terrain"] = {
        "width": 12, "height": 12, "cell_size_km": 1.0,
        "cells": [{"kind": "open", "mobility": 1.0}] * 144,
    }
    doc["units"][0]["position"] = [0, 0]
    doc["units"][0]["max_speed_kmh"] = 30.0
    doc["coa"] = [{"id": "t1", "verb": "march", "actor": "u1",
                   "objective": {"cell": [0, 10]}, "after": []}]
    return load_scenario(json.dumps(doc))


def test_single_primitive_march():
    plan = expand_coa(open_march_scenario(), MARCH_KB)
    assert plan.node_count == 1
    node = plan.nodes[1]
    assert node.scheduled
    assert node.origin is Origin.USER
    assert node.route is not None
    assert node.route.cells[-1] == (0, 10)
    # 10 km at 30 km/h over open ground -> 20 minutes
    assert node.window == (0, 20)
    assert check_consistency(plan) == []


def test_march_consumes_fuel():
    plan = expand_coa(open_march_scenario(), MARCH_KB)
    assert len(plan.supply_ledger) == 1
    assert plan.supply_ledger[0].fuel_l == pytest.approx(10.0)  # 20 min * 0.5


def test_fpol_reaction_walkthrough(fpol_scenario, fpol_kb):
    plan = expand_coa(fpol_scenario, fpol_kb)
    reactions = [n for n in plan.nodes.values() if n.origin is Origin.REACTION]
    counters = [n for n in plan.nodes.values() if n.origin is Origin.COUNTERACTION]
    assert len(reactions) == 1
    assert reactions[0].verb == "artillery_fire"
    assert reactions[0].side is Side.ENEMY
    assert reactions[0].actor == "en-arty-1"
    assert len(counters) >= 1
    assert counters[0].verb == "counter_battery_fire"
    assert check_consistency(plan) == []


def test_fpol_out_of_range_variant(fpol_scenario, fpol_kb):
    import dataclasses
    moved = tuple(
        dataclasses.replace(u, position=(15, 30)) if u.id == "en-arty-1" else u
        for u in fpol_scenario.units
    )
    scenario = dataclasses.replace(fpol_scenario, units=moved)
    plan = expand_coa(scenario, fpol_kb)
    assert [n for n in plan.nodes.values() if n.origin is Origin.REACTION] == []


def test_decompose_chain_edges(fpol_scenario, fpol_kb):
    kb = parse_kb("""
    primitive a_step dur 10 min fn maneuver;
    activity chain {
      subtasks {
        a_step(self, inherit) as a;
        a_step(self, inherit) after a as b;
        a_step(self, inherit) after b as c;
      }
    }
    """)
    world = initial_state(fpol_scenario)
    parent = expand_parent(fpol_scenario)
    children = decompose(parent, kb.templates["chain"], world, kb)
    assert len(children) == 3
    a, b, c = children
    assert a.deps == ()
    assert b.deps == (a.id,)
    assert c.deps == (b.id,)
    assert all(ch.origin is Origin.DECOMPOSITION for ch in children)
    assert all(ch.parent == parent.id for ch in children)


def expand_parent(scenario):
    from coaplan.kb import BattlefieldFunction
    from coaplan.plan import ActionNode

    return ActionNode(
        id=1, verb="chain", side=Side.FRIENDLY, actor="tf-arrow",
        function=BattlefieldFunction.MANEUVER, objective="pp-alpha",
        origin=Origin.USER, arc_depth=1, path="coa:t1",
    )


def test_decompose_fpol_template(fpol_scenario, fpol_kb):
    # hand-checked against the activity definition: roles, order, functions
    world = initial_state(fpol_scenario)
    parent = expand_parent(fpol_scenario)
    parent.verb = "forward_passage_of_lines"
    tmpl = fpol_kb.templates["forward_passage_of_lines"]
    children = decompose(parent, tmpl, world, fpol_kb)
    occupy, pass_, assume = children
    assert occupy.verb == "occupy_passage_point"
    assert occupy.actor == "1-77-inf"       # nearest friendly, actor excluded
    assert occupy.objective == (15, 10)     # anchor cell of pp-alpha
    assert pass_.verb == "pass_through"
    assert pass_.actor == "tf-arrow"        # self
    assert pass_.objective == "pp-alpha"    # inherited measure
    assert pass_.deps == (occupy.id,)
    assert assume.deps == (pass_.id,)
    assert tmpl.subtasks[1].order == OrderAfter("occupy")


def test_when_gate_closed_is_unknown_verb():
    doc = minimal_doc()
    doc["terrain"] = {
        "width": 12, "height": 12, "cell_size_km": 1.0,
        "cells": [{"kind": "open", "mobility": 1.0}] * 144,
    }
    doc["coa"] = [{"id": "t1", "verb": "gated", "actor": "u1",
                   "objective": {"cell": [5, 5]}, "after": []}]
    s = load_scenario(json.dumps(doc))
    kb = parse_kb("""
    primitive go dur 10 min fn maneuver;
    activity gated {
      when exists enemy armor within 5 km
      subtasks { go(self, inherit) as a; }
    }
    """)
    with pytest.raises(UnknownVerb):
        expand_coa(s, kb)


def test_unknown_coa_verb_rejected():
    s = open_march_scenario()
    with pytest.raises(UnknownVerb):
        expand_coa(s, parse_kb("primitive hold dur 10 min fn security;"))


def test_node_cap_enforced(delta_scenario, delta_kb):
    with pytest.raises(NodeCapExceeded):
        expand_coa(delta_scenario, delta_kb, PlannerConfig(node_cap=10))


def test_invalid_scenario_rejected():
    doc = minimal_doc()
    doc["coa"][0]["actor"] = "ghost"
    s = load_scenario(json.dumps(doc))
    with pytest.raises(InvalidScenario):
        expand_coa(s, MARCH_KB)


def test_determinism_byte_identical(delta_scenario, delta_kb):
    p1 = expand_coa(delta_scenario, delta_kb)
    p2 = expand_coa(delta_scenario, delta_kb)
    assert plan_to_json(p1) == plan_to_json(p2)


def test_provenance_soundness(delta_scenario, delta_kb):
    plan = expand_coa(delta_scenario, delta_kb)
    for n in plan.nodes.values():
        if n.origin is Origin.REACTION:
            parent = plan.nodes[n.parent]
            assert n.side is parent.side.opponent
            assert n.provenance is not None
            rules = plan.kb.rules_for(parent.verb)
            assert any(r.rule_id == n.provenance.rule_id for r in rules)
        elif n.origin is Origin.COUNTERACTION:
            reaction = plan.nodes[n.parent]
            grandparent = plan.nodes[reaction.parent]
            assert n.side is grandparent.side
        if n.origin in (Origin.USER, Origin.DECOMPOSITION):
            assert n.arc_depth == 1
        assert 1 <= n.arc_depth <= plan.config.arc_depth_cap


def test_every_node_reaches_a_user_root(delta_scenario, delta_kb):
    plan = expand_coa(delta_scenario, delta_kb)
    for n in plan.nodes.values():
        cur = n
        hops = 0
        while cur.parent is not None:
            cur = plan.nodes[cur.parent]
            hops += 1
            assert hops <= plan.node_count
        assert cur.origin is Origin.USER


def test_enemy_user_task_supported():
    doc = minimal_doc()
    doc["terrain"] = {
        "width": 12, "height": 12, "cell_size_km": 1.0,
        "cells": [{"kind": "open", "mobility": 1.0}] * 144,
    }
    doc["units"].append({
        "id": "red-1", "side": "enemy", "kind": "armor", "echelon": "battalion",
        "strength": 300.0, "position": [6, 6], "max_speed_kmh": 30.0,
        "weapon_range_km": 3.0, "supplies": {"fuel_l": 900.0, "ammo_u": 300.0},
    })
    doc["coa"] = [
        {"id": "t1", "verb": "march", "actor": "u1",
         "objective": {"cell": [0, 5]}, "after": []},
        {"id": "t2", "verb": "march", "actor": "red-1",
         "objective": {"cell": [11, 6]}, "after": []},
    ]
    plan = expand_coa(load_scenario(json.dumps(doc)), MARCH_KB)
    sides = {plan.nodes[i].side for i in plan.nodes}
    assert sides == {Side.FRIENDLY, Side.ENEMY}
    assert check_consistency(plan) == []


def test_group_actor_allocation(delta_scenario, delta_kb):
    plan = expand_coa(delta_scenario, delta_kb)
    # every scheduled leaf names a concrete unit, never a group
    unit_ids = {u.id for u in delta_scenario.units}
    for n in plan.nodes.values():
        if not n.composite:
            assert n.actor in unit_ids


def test_composite_windows_hull(delta_scenario, delta_kb):
    plan = expand_coa(delta_scenario, delta_kb)
    for n in plan.nodes.values():
        if n.composite:
            children = plan.children_of(n.id)
            assert n.window[0] == min(c.window[0] for c in children)
            assert n.window[1] == max(c.window[1] for c in children)


def test_after_edges_respected(delta_scenario, delta_kb):
    plan = expand_coa(delta_scenario, delta_kb)
    roots = {n.path: n for n in plan.roots()}
    t6 = roots["coa:t6"]
    t5 = roots["coa:t5"]
    assert t6.window[0] >= t5.window[1]


@pytest.mark.parametrize("seed", range(20))
def test_random_scenarios_plan_consistently(seed):
    scenario = random_scenario(seed)
    plan = expand_coa(scenario, soundness_kb())
    assert check_consistency(plan) == []
    assert plan.node_count >= len(scenario.coa)
