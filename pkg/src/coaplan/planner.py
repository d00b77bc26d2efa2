"""Interleaved expansion of a course of action into a detailed plan.

One sequential pass drives everything: pop a node from the agenda; a
templated verb decomposes into children, a primitive verb is allocated,
routed (if it moves), scheduled earliest-fit, wargamed (engagement +
supply draw), and finally offered to the reaction rules. Generated nodes
are pushed so that a node's products are processed, depth-first and in
declaration order, before anything else already waiting. There is no
backtracking; the only revision mechanism is `replan_with_edits`, which
re-expands an edited course of action from scratch.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace

from .arc import IdAllocator, generate_reactions
from .combat import EngagementSpec, consume_supplies, resolve_engagement
from .errors import (DanglingEdit, NoEligibleActor, NodeCapExceeded,
                     PlannerError, UnknownVerb)
from .kb import (ActivityTemplate, AnchorObjective, InheritObjective, KnowledgeBase,
                 NamedMeasure, NearestOf, OrderAfter, OrderWith, PassedUnit,
                 SubtaskSpec, eval_condition)
from .plan import ActionNode, EngagementRecord, Origin, Plan, PlannerConfig
from .routing import plan_route, travel_time
from .scenario import (Cell, HighLevelTask, Scenario, Side, UnitKind,
                       validate_scenario)
from .scheduling import (Calendars, allocate_unit, dependency_bound,
                         schedule_action)
from .worldstate import WorldProjector, WorldState

log = logging.getLogger(__name__)


class InvalidScenario(PlannerError):
    code = "InvalidScenario"

    def __init__(self, violations):
        super().__init__(f"{len(violations)} validation violation(s)")
        self.violations = violations


class UnknownMeasure(PlannerError):
    code = "UnknownMeasure"


@dataclass(frozen=True)
class Pin:
    node_id: int
    start_min: int


@dataclass(frozen=True)
class EditSet:
    """User-driven revision: pin starts, delete user tasks, or amend the COA."""
    pins: tuple[Pin, ...] = ()
    deletes: tuple[str, ...] = ()
    amend_coa: tuple[HighLevelTask, ...] | None = None


def expand_coa(scenario: Scenario, kb: KnowledgeBase,
               cfg: PlannerConfig | None = None, *,
               pinned_paths: dict[str, int] | None = None,
               version: int = 1) -> Plan:
    """Expand the scenario's course of action into a scheduled, wargamed plan.

    Deterministic: identical inputs give identical plans (wall time aside).
    Raises UnknownVerb, NodeCapExceeded, NoEligibleActor, UnroutableAction,
    PinInfeasible, or InvalidScenario when the scenario fails validation.
    """
    cfg = cfg or PlannerConfig()
    violations = validate_scenario(scenario)
    if violations:
        raise InvalidScenario(violations)
    started = time.perf_counter()
    job = _Expansion(scenario, kb, cfg, pinned_paths or {}, version)
    plan = job.run()
    plan.wall_time_ms = (time.perf_counter() - started) * 1000.0
    return plan


def decompose(n: ActionNode, t: ActivityTemplate, w: WorldState,
              kb: KnowledgeBase, alloc: IdAllocator | None = None,
              pinned_paths: dict[str, int] | None = None) -> list[ActionNode]:
    """Children of `n` per the template, in declaration order, deps resolved.

    "after x" becomes a finish-before edge on the sibling; "with x" copies
    x's predecessors so both share one start bound; free subtasks inherit
    the parent's dependencies. Children inherit side and start bound.
    """
    alloc = alloc or IdAllocator(n.id + 1)
    pins = pinned_paths or {}
    anchor = w.scenario.objective_cell(n.objective)
    by_name: dict[str, ActionNode] = {}
    out: list[ActionNode] = []
    for st in t.subtasks:
        if isinstance(st.order, OrderAfter):
            deps: tuple[int, ...] = (by_name[st.order.ref].id,)
        elif isinstance(st.order, OrderWith):
            deps = by_name[st.order.ref].deps
        else:
            deps = n.deps
        path = f"{n.path}/{st.name}"
        child = ActionNode(
            id=alloc.take(),
            verb=st.verb,
            side=n.side,
            actor=_resolve_actor(st, n, w, anchor),
            function=st.function or _verb_function(kb, st.verb),
            objective=_resolve_objective(st, n, anchor, w.scenario),
            origin=Origin.DECOMPOSITION,
            arc_depth=1,
            path=path,
            parent=n.id,
            deps=deps,
            not_before_min=n.not_before_min,
            pin_start_min=pins.get(path),
            duration_min=st.duration_min,
        )
        by_name[st.name] = child
        out.append(child)
    return out


def replan_with_edits(p: Plan, edits: EditSet, *, version: int | None = None) -> Plan:
    """Fresh expansion of the (possibly amended) COA with edits enforced.

    Deleted user tasks disappear along with their whole provenance subtree;
    pins survive via stable node paths. Raises DanglingEdit for references
    to nothing, PinInfeasible when a pin cannot be honored.
    """
    coa = edits.amend_coa if edits.amend_coa is not None else p.scenario.coa
    task_ids = {t.id for t in coa}
    for tid in edits.deletes:
        if tid not in task_ids:
            raise DanglingEdit(f"delete references unknown task {tid!r}")
    pinned_paths: dict[str, int] = {}
    for pin in edits.pins:
        node = p.nodes.get(pin.node_id)
        if node is None:
            raise DanglingEdit(f"pin references unknown node {pin.node_id}")
        pinned_paths[node.path] = pin.start_min

    deleted = set(edits.deletes)
    new_coa = tuple(
        replace(t, after=tuple(a for a in t.after if a not in deleted))
        for t in coa if t.id not in deleted
    )
    scenario = replace(p.scenario, coa=new_coa)
    return expand_coa(scenario, p.kb, p.config, pinned_paths=pinned_paths,
                      version=p.version + 1 if version is None else version)


# -- engine -------------------------------------------------------------------

class _Expansion:
    def __init__(self, scenario: Scenario, kb: KnowledgeBase, cfg: PlannerConfig,
                 pinned_paths: dict[str, int], version: int):
        self.scenario = scenario
        self.kb = kb
        self.cfg = cfg
        self.pins = pinned_paths
        self.alloc = IdAllocator()
        self.cals: Calendars = {}
        self.projector = WorldProjector(scenario)
        self.rates = kb.rate_table()
        self.agenda: list[ActionNode] = []
        self.plan = Plan(version=version, scenario=scenario, config=cfg, kb=kb)

    def run(self) -> Plan:
        self._seed()
        while self.agenda:
            self._process(self.agenda.pop())
        self._finalize()
        return self.plan

    def _register(self, node: ActionNode) -> None:
        if self.plan.node_count >= self.cfg.node_cap:
            raise NodeCapExceeded(
                f"plan exceeded the {self.cfg.node_cap}-node cap; "
                f"check the KB for runaway reaction chains")
        self.plan.nodes[node.id] = node

    def _seed(self) -> None:
        for task in self.scenario.coa:
            if not self.kb.defines(task.verb):
                raise UnknownVerb(f"COA task {task.id!r} uses undefined verb {task.verb!r}")
        by_task: dict[str, ActionNode] = {}
        roots: list[ActionNode] = []
        for task in self.scenario.coa:
            units = self.scenario.actor_units(task.actor)
            path = f"coa:{task.id}"
            node = ActionNode(
                id=self.alloc.take(),
                verb=task.verb,
                side=units[0].side,
                actor=task.actor,
                function=_verb_function(self.kb, task.verb),
                objective=task.objective,
                origin=Origin.USER,
                arc_depth=1,
                path=path,
                pin_start_min=self.pins.get(path),
            )
            by_task[task.id] = node
            roots.append(node)
            self._register(node)
        for task, node in zip(self.scenario.coa, roots):
            node.deps = tuple(by_task[a].id for a in task.after)
        for node in reversed(roots):
            self.agenda.append(node)

    def _process(self, node: ActionNode) -> None:
        template = self.kb.lookup_template(node.verb)
        if template is not None:
            self._expand_template(node, template)
            return
        prim = self.kb.primitive(node.verb)
        if prim is None:
            raise UnknownVerb(f"verb {node.verb!r} (node {node.id}) is not in the KB")
        self._schedule_primitive(node, prim)

    def _expand_template(self, node: ActionNode, template: ActivityTemplate) -> None:
        bound = dependency_bound(self.plan, node)
        world = self.projector.snapshot(bound)
        if template.when is not None:
            anchor = self.scenario.objective_cell(node.objective)
            actor_ids = tuple(u.id for u in self.scenario.actor_units(node.actor))
            if not eval_condition(template.when, world, anchor, actor_ids):
                # gate closed: the verb would need a primitive reading, and a
                # verb is never both, so this is a planning dead end
                raise UnknownVerb(
                    f"activity {node.verb!r} (node {node.id}) is not applicable "
                    f"here and has no primitive meaning")
        children = decompose(node, template, world, self.kb,
                             alloc=self.alloc, pinned_paths=self.pins)
        node.composite = True
        for child in children:
            self._register(child)
        for child in reversed(_sibling_order(children, template.subtasks)):
            self.agenda.append(child)

    def _schedule_primitive(self, node: ActionNode, prim) -> None:
        candidates = self._candidates(node, prim)
        node.actor = allocate_unit(node, candidates, self.cals)
        unit = self.scenario.unit(node.actor)

        if prim.moves:
            origin = self.projector.position_at(node.actor, _FAR_FUTURE)
            dest = self._objective_cell(node)
            node.route = plan_route(self.scenario.terrain, origin, dest)
            node.duration_min = travel_time(node.route, unit)
        elif node.duration_min is None:
            node.duration_min = prim.duration_min

        entry = schedule_action(node, self.plan, self.cals)
        if node.route is not None and entry.end_min > entry.start_min:
            self.projector.commit_move(node.actor, entry.start_min, entry.end_min,
                                       node.route)

        world = self.projector.snapshot(entry.start_min)
        live_min: float | None = None
        if prim.engages:
            live_min = self._resolve_engagement(node, world, entry)

        delta = consume_supplies(node.id, node.actor, node.verb,
                                 node.duration_min, self.rates,
                                 live_min=live_min)
        if delta.fuel_l or delta.ammo_u:
            self.plan.supply_ledger += (delta,)
            self.projector.commit_supply(node.actor, entry.end_min,
                                         delta.fuel_l, delta.ammo_u)

        products = generate_reactions(node, world, self.kb, self.cfg.arc_depth_cap,
                                      self.alloc, self._counter_actor(world))
        for product in products:
            self._register(product)
        for product in reversed(products):
            self.agenda.append(product)

    def _resolve_engagement(self, node: ActionNode, world: WorldState, entry) -> float:
        """Fight the nearest opposing unit in weapon range; 0 live minutes if none."""
        me = world.unit_state(node.actor)
        if me.strength <= 0.0 or node.duration_min == 0:
            return 0.0
        grid = self.scenario.terrain
        hostiles = [
            st for st in world.find(side=node.side.opponent, alive=True)
            if grid.distance_km(st.position, me.position) <= me.unit.weapon_range_km
        ]
        if not hostiles:
            return 0.0
        target = min(hostiles,
                     key=lambda st: (grid.distance_km(st.position, me.position), st.id))
        spec = EngagementSpec(
            blue_strength=me.strength,
            red_strength=target.strength,
            blue_kill_rate=self.cfg.kill_rate_per_min,
            red_kill_rate=self.cfg.kill_rate_per_min,
            duration_min=node.duration_min,
        )
        result = resolve_engagement(spec, node_id=node.id)
        self.plan.attrition_ledger += (EngagementRecord(
            node_id=node.id, blue_unit=me.id, red_unit=target.id, result=result),)
        self.projector.commit_attrition(me.id, entry.end_min, result.blue_loss)
        self.projector.commit_attrition(target.id, entry.end_min, result.red_loss)
        return result.live_min

    def _candidates(self, node: ActionNode, prim) -> list:
        # Attrition does not disqualify an assigned actor: only reaction
        # eligibility projects strength. Role fit is structural (side/kind).
        units = list(self.scenario.actor_units(node.actor))
        if len(units) > 1 and prim.needs_kind is not None:
            narrowed = [u for u in units if u.kind is prim.needs_kind]
            if narrowed:
                units = narrowed
        if not units:
            raise NoEligibleActor(
                f"no unit behind actor {node.actor!r} for {node.verb!r}")
        return units

    def _counter_actor(self, world: WorldState):
        grid = self.scenario.terrain

        def pick(side: Side, needs: UnitKind | None, near: Cell) -> str:
            pool = world.find(side=side, kind=needs, alive=False)
            if not pool:
                raise NoEligibleActor(
                    f"no {needs.value if needs else ''} unit on side "
                    f"{side.value} for a counteraction")
            best = min(pool, key=lambda st: (grid.distance_km(st.position, near), st.id))
            return best.id

        return pick

    def _objective_cell(self, node: ActionNode) -> Cell:
        if isinstance(node.objective, str):
            m = self.scenario.measure(node.objective)
            if m is None:
                raise UnknownMeasure(
                    f"node {node.id} targets unknown measure {node.objective!r}")
            return m.anchor()
        return node.objective

    def _finalize(self) -> None:
        for nid in sorted(self.plan.nodes, reverse=True):
            node = self.plan.nodes[nid]
            if not node.composite:
                continue
            windows = [c.window for c in self.plan.children_of(nid)]
            assert all(w is not None for w in windows)
            node.window = (min(w[0] for w in windows), max(w[1] for w in windows))


_FAR_FUTURE = 10 ** 9


def _verb_function(kb: KnowledgeBase, verb: str):
    p = kb.primitive(verb)
    if p is not None:
        return p.function
    t = kb.lookup_template(verb)
    if t is not None:
        return t.function
    raise UnknownVerb(f"verb {verb!r} is not in the KB")


def _resolve_actor(st: SubtaskSpec, n: ActionNode, w: WorldState, anchor: Cell) -> str:
    grid = w.scenario.terrain
    if isinstance(st.actor_role, PassedUnit):
        own = {u.id for u in w.scenario.actor_units(n.actor)}
        pool = [u for u in w.find(side=n.side, alive=False) if u.id not in own]
        if not pool:
            raise NoEligibleActor(
                f"no unit to be passed for {st.verb!r} under node {n.id}")
        return min(pool, key=lambda u: (grid.distance_km(u.position, anchor), u.id)).id
    if isinstance(st.actor_role, NearestOf):
        pool = w.find(side=st.actor_role.side, kind=st.actor_role.kind, alive=False)
        if not pool:
            raise NoEligibleActor(
                f"no {st.actor_role.kind.value} unit on side "
                f"{st.actor_role.side.value} for {st.verb!r} under node {n.id}")
        return min(pool, key=lambda u: (grid.distance_km(u.position, anchor), u.id)).id
    return n.actor  # self


def _resolve_objective(st: SubtaskSpec, n: ActionNode, anchor: Cell, scenario: Scenario):
    if isinstance(st.objective_role, InheritObjective):
        return n.objective
    if isinstance(st.objective_role, AnchorObjective):
        return anchor
    assert isinstance(st.objective_role, NamedMeasure)
    if scenario.measure(st.objective_role.measure_id) is None:
        raise UnknownMeasure(
            f"subtask {st.name!r} targets unknown measure {st.objective_role.measure_id!r}")
    return st.objective_role.measure_id


def _sibling_order(children: list[ActionNode], specs) -> list[ActionNode]:
    """Stable topological order over 'after' edges so dependencies pop first."""
    index = {spec.name: i for i, spec in enumerate(specs)}
    edges = {
        i: ([index[spec.order.ref]] if isinstance(spec.order, OrderAfter) else [])
        for i, spec in enumerate(specs)
    }
    done: list[int] = []
    state: dict[int, int] = {}

    def visit(i: int) -> None:
        if state.get(i):
            return
        state[i] = 1
        for j in edges[i]:
            visit(j)
        done.append(i)

    for i in range(len(children)):
        visit(i)
    return [children[i] for i in done]
