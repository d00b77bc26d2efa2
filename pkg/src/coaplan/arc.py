"""Action-Reaction-Counteraction generation.

Each newly scheduled action is checked against the reaction rules for its
verb: every eligible opposing unit inside the rule radius spawns one
reaction node, and each reaction spawns the rule's counteractions back on
the triggering side. Generation is flat and rule-driven; there is no
search over alternatives and nothing is ever retracted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kb import BattlefieldFunction, KnowledgeBase
from .plan import ActionNode, ArcProvenance, Origin
from .scenario import Cell, Side, UnitKind
from .worldstate import UnitSnapshot, WorldState


@dataclass(frozen=True)
class ReactorQuery:
    side: Side
    kind: UnitKind
    within_km: float
    anchor: Cell


def find_reactors(w: WorldState, q: ReactorQuery) -> list[UnitSnapshot]:
    """Live units of the queried side/kind inside the radius, nearest first,
    id-lexicographic on ties. Projected positions and strengths, so a unit
    already wiped out by earlier ledger entries cannot react."""
    grid = w.scenario.terrain
    if not grid.in_bounds(q.anchor):
        raise ValueError(f"anchor {q.anchor} outside the grid")
    hits = [
        st for st in w.find(side=q.side, kind=q.kind, alive=True)
        if grid.distance_km(st.position, q.anchor) <= q.within_km
    ]
    hits.sort(key=lambda st: (grid.distance_km(st.position, q.anchor), st.id))
    return hits


class IdAllocator:
    """Monotone node-id source shared by the whole expansion."""

    def __init__(self, start: int = 1):
        self.next_id = start

    def take(self) -> int:
        nid = self.next_id
        self.next_id += 1
        return nid


def generate_reactions(n: ActionNode, w: WorldState, kb: KnowledgeBase,
                       arc_depth_cap: int, alloc: IdAllocator,
                       counter_actor) -> list[ActionNode]:
    """Reaction and counteraction nodes for a just-scheduled action.

    Returned in rule order, then reactor order; for each reactor the
    reaction comes first, its counteractions after it. All generated nodes
    start no earlier than the trigger's start (simultaneous threat), which
    is carried as a start bound rather than a finish-before edge.

    `counter_actor(side, needs_kind, near_cell)` resolves who performs a
    counteraction: the planner supplies unit lookup so this stays pure.
    """
    if n.arc_depth >= arc_depth_cap:
        return []
    assert n.window is not None, "ARC runs on scheduled actions only"
    anchor = w.scenario.objective_cell(n.objective)
    grid = w.scenario.terrain
    out: list[ActionNode] = []
    for rule in kb.rules_for(n.verb):
        if rule.reactor_side is n.side:
            continue  # a reaction is always by the opposing side
        reactors = find_reactors(w, ReactorQuery(
            side=rule.reactor_side, kind=rule.reactor_kind,
            within_km=rule.within_km, anchor=anchor))
        for reactor in reactors:
            reaction_fn = _function_of(kb, rule.reaction_verb)
            reaction = ActionNode(
                id=alloc.take(),
                verb=rule.reaction_verb,
                side=reactor.unit.side,
                actor=reactor.id,
                function=reaction_fn,
                objective=anchor,
                origin=Origin.REACTION,
                arc_depth=n.arc_depth + 1,
                path=f"{n.path}/react:{rule.rule_id}:{reactor.id}",
                parent=n.id,
                not_before_min=n.window[0],
                provenance=ArcProvenance(
                    rule_id=rule.rule_id,
                    reactor_id=reactor.id,
                    distance_km=grid.distance_km(reactor.position, anchor),
                ),
            )
            out.append(reaction)
            for k, counter_verb in enumerate(rule.counter_verbs):
                needs = _needs_of(kb, counter_verb)
                actor_id = counter_actor(n.side, needs, reactor.position)
                out.append(ActionNode(
                    id=alloc.take(),
                    verb=counter_verb,
                    side=n.side,
                    actor=actor_id,
                    function=_function_of(kb, counter_verb),
                    objective=reactor.position,
                    origin=Origin.COUNTERACTION,
                    arc_depth=min(n.arc_depth + 2, arc_depth_cap),
                    path=f"{reaction.path}/counter:{k}",
                    parent=reaction.id,
                    not_before_min=n.window[0],
                    provenance=ArcProvenance(
                        rule_id=rule.rule_id,
                        reactor_id=reactor.id,
                        distance_km=grid.distance_km(reactor.position, anchor),
                    ),
                ))
    return out


def _function_of(kb: KnowledgeBase, verb: str) -> BattlefieldFunction:
    p = kb.primitive(verb)
    if p is not None:
        return p.function
    t = kb.lookup_template(verb)
    if t is not None:
        return t.function
    return BattlefieldFunction.MANEUVER


def _needs_of(kb: KnowledgeBase, verb: str):
    p = kb.primitive(verb)
    return p.needs_kind if p is not None else None
