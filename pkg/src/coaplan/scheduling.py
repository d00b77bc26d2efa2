"""Unit allocation, earliest-fit scheduling, and the plan consistency oracle.

Every unit single-tasks: its calendar is a sorted list of disjoint
half-open [start, end) busy intervals. Scheduling is greedy earliest-fit
in agenda order; there is no optimization pass, deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoEligibleActor, PinInfeasible, Violation
from .plan import ActionNode, Plan
from .scenario import Unit


@dataclass
class ResourceCalendar:
    unit_id: str
    busy: list[tuple[int, int]] = field(default_factory=list)  # sorted, disjoint

    def total_busy_min(self) -> int:
        return sum(e - s for s, e in self.busy)

    def fits(self, start: int, duration: int) -> bool:
        if duration == 0:
            return True  # empty intervals are disjoint from everything
        end = start + duration
        for s, e in self.busy:
            if s < end and start < e:
                return False
        return True

    def earliest_fit(self, lower_bound: int, duration: int) -> int:
        """Smallest start >= lower_bound with [start, start+duration) free."""
        if duration == 0:
            return lower_bound
        t = lower_bound
        for s, e in self.busy:
            if t + duration <= s:
                break
            if s < t + duration and t < e:
                t = e
        return t

    def commit(self, start: int, end: int) -> None:
        if end <= start:
            return  # zero-length entries occupy nothing
        self.busy.append((start, end))
        self.busy.sort()


@dataclass(frozen=True)
class ScheduleEntry:
    node_id: int
    unit_id: str
    start_min: int
    end_min: int


Calendars = dict[str, ResourceCalendar]


def calendar_for(cals: Calendars, unit_id: str) -> ResourceCalendar:
    if unit_id not in cals:
        cals[unit_id] = ResourceCalendar(unit_id)
    return cals[unit_id]


def allocate_unit(n: ActionNode, candidates: list[Unit], cals: Calendars) -> str:
    """Least-loaded candidate; ties go to the lexicographically smallest id."""
    if not candidates:
        raise NoEligibleActor(f"no unit can perform {n.verb!r} (node {n.id})")
    return min(candidates,
               key=lambda u: (calendar_for(cals, u.id).total_busy_min(), u.id)).id


def dependency_bound(plan: Plan, node: ActionNode) -> int:
    """Earliest start permitted by finished predecessors and start bounds."""
    bound = max(0, node.not_before_min)
    for dep in node.deps:
        bound = max(bound, finish_time(plan, plan.nodes[dep]))
    return bound


def finish_time(plan: Plan, node: ActionNode) -> int:
    """Finish of a node; composites finish when their whole subtree does."""
    if node.window is not None:
        return node.window[1]
    ends = [finish_time(plan, c) for c in plan.children_of(node.id)]
    if not ends:
        raise ValueError(f"node {node.id} has neither window nor children")
    return max(ends)


def schedule_action(n: ActionNode, plan: Plan, cals: Calendars) -> ScheduleEntry:
    """Commit the earliest feasible window for a primitive action.

    A pinned node must start exactly at its pin; anything blocking that is
    PinInfeasible. Requires n.duration_min and all dependencies scheduled.
    """
    assert n.duration_min is not None, "duration must be resolved before scheduling"
    cal = calendar_for(cals, n.actor)
    bound = dependency_bound(plan, n)
    if n.pin_start_min is not None:
        start = n.pin_start_min
        if start < bound:
            raise PinInfeasible(
                f"node {n.id} pinned at {start} but dependencies allow {bound} at the earliest")
        if not cal.fits(start, n.duration_min):
            raise PinInfeasible(
                f"node {n.id} pinned at {start} but unit {n.actor} is busy then")
    else:
        start = cal.earliest_fit(bound, n.duration_min)
    end = start + n.duration_min
    cal.commit(start, end)
    n.window = (start, end)
    return ScheduleEntry(node_id=n.id, unit_id=n.actor, start_min=start, end_min=end)


# -- consistency oracle -------------------------------------------------------

def check_consistency(p: Plan) -> list[Violation]:
    """Independent feasibility audit of a finished plan.

    Empty result means: dep graph acyclic, parent links acyclic, every node
    scheduled, windows well-formed, no unit double-booked, every dependency
    and start bound satisfied, pins honored, and no ledger drives a unit's
    strength or supplies below zero.
    """
    out: list[Violation] = []

    def bad(code: str, path: str, message: str) -> None:
        out.append(Violation(code, path, message))

    nodes = p.nodes
    for nid, n in nodes.items():
        if n.id != nid:
            bad("NodeIdMismatch", f"nodes[{nid}]", f"keyed {nid} but id {n.id}")
        for d in n.deps:
            if d not in nodes:
                bad("DanglingReference", f"nodes[{nid}].deps", f"no node {d}")
        if n.parent is not None and n.parent not in nodes:
            bad("DanglingReference", f"nodes[{nid}].parent", f"no node {n.parent}")

    if _cycle_over(nodes, lambda n: [d for d in n.deps if d in nodes]):
        bad("CyclicDependency", "nodes", "dependency edges form a cycle")
    if _cycle_over(nodes, lambda n: [n.parent] if n.parent in nodes else []):
        bad("CyclicParent", "nodes", "parent links form a cycle")

    for nid in sorted(nodes):
        n = nodes[nid]
        if n.window is None:
            bad("Unscheduled", f"nodes[{nid}]", f"{n.verb} has no window")
            continue
        s, e = n.window
        if e < s:
            bad("BadWindow", f"nodes[{nid}]", f"window [{s}, {e}) ends before it starts")
        if s < n.not_before_min:
            bad("StartBoundViolated", f"nodes[{nid}]",
                f"starts at {s}, bound is {n.not_before_min}")
        if n.pin_start_min is not None and s != n.pin_start_min:
            bad("PinViolated", f"nodes[{nid}]",
                f"pinned at {n.pin_start_min} but starts at {s}")
        for d in n.deps:
            dep = nodes.get(d)
            if dep is not None and dep.window is not None and dep.window[1] > s:
                bad("DependencyViolated", f"nodes[{nid}]",
                    f"depends on {d} ending {dep.window[1]}, starts {s}")

    by_unit: dict[str, list[tuple[int, int, int]]] = {}
    for nid in sorted(nodes):
        n = nodes[nid]
        if n.composite or n.window is None:
            continue
        s, e = n.window
        if e > s:
            by_unit.setdefault(n.actor, []).append((s, e, nid))
    for unit_id in sorted(by_unit):
        entries = sorted(by_unit[unit_id])
        for (s1, e1, id1), (s2, e2, id2) in zip(entries, entries[1:]):
            if s2 < e1:
                bad("DoubleBooking", f"units[{unit_id}]",
                    f"nodes {id1} and {id2} overlap ([{s1},{e1}) vs [{s2},{e2}))")

    losses: dict[str, float] = {}
    for rec in p.attrition_ledger:
        losses[rec.blue_unit] = losses.get(rec.blue_unit, 0.0) + rec.result.blue_loss
        losses[rec.red_unit] = losses.get(rec.red_unit, 0.0) + rec.result.red_loss
    for unit_id in sorted(losses):
        try:
            initial = p.scenario.unit(unit_id).strength
        except KeyError:
            bad("DanglingReference", f"units[{unit_id}]", "attrition for unknown unit")
            continue
        if losses[unit_id] > initial + 1e-9:
            bad("NegativeStrength", f"units[{unit_id}]",
                f"losses {losses[unit_id]:.3f} exceed strength {initial:.3f}")

    spent: dict[str, tuple[float, float]] = {}
    for delta in p.supply_ledger:
        f, a = spent.get(delta.unit_id, (0.0, 0.0))
        spent[delta.unit_id] = (f + delta.fuel_l, a + delta.ammo_u)
    for unit_id in sorted(spent):
        try:
            stock = p.scenario.unit(unit_id).supplies
        except KeyError:
            bad("DanglingReference", f"units[{unit_id}]", "consumption for unknown unit")
            continue
        fuel, ammo = spent[unit_id]
        if fuel > stock.fuel_l + 1e-9:
            bad("ShortfallViolation", f"units[{unit_id}].fuel_l",
                f"consumes {fuel:.1f} of {stock.fuel_l:.1f} L")
        if ammo > stock.ammo_u + 1e-9:
            bad("ShortfallViolation", f"units[{unit_id}].ammo_u",
                f"consumes {ammo:.1f} of {stock.ammo_u:.1f} u")

    out.sort(key=lambda v: (v.path, v.code))
    return out


def _cycle_over(nodes: dict[int, ActionNode], edges) -> bool:
    state: dict[int, int] = {}

    def visit(nid: int) -> bool:
        if state.get(nid) == 1:
            return True
        if state.get(nid) == 2:
            return False
        state[nid] = 1
        for nxt in edges(nodes[nid]):
            if visit(nxt):
                return True
        state[nid] = 2
        return False

    return any(visit(nid) for nid in nodes)
