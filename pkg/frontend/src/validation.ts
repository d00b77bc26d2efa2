/** Client-side mirror of the server's scenario validation.
 *
 * Same codes, same paths, same (path, code) ordering, so the editor can
 * show violations inline before a save ever reaches the service. The
 * contract tests compare this against recorded server verdicts. */

import type { Cell, ScenarioDoc, TaskDoc, Violation } from "./types.js";

const IMPASSABLE = new Set(["water", "obstacle"]);

function inBounds(doc: ScenarioDoc, cell: Cell): boolean {
  const [r, c] = cell;
  return r >= 0 && r < doc.terrain.height && c >= 0 && c < doc.terrain.width;
}

function mobilityAt(doc: ScenarioDoc, cell: Cell): number {
  const [r, c] = cell;
  const gc = doc.terrain.cells[r * doc.terrain.width + c];
  return gc ? gc.mobility : 0;
}

export function validateScenario(doc: ScenarioDoc): Violation[] {
  const out: Violation[] = [];
  const bad = (code: string, path: string, message: string) =>
    out.push({ code, path, message });

  const t = doc.terrain;
  if (t.width <= 0 || t.height <= 0) {
    bad("BadGridShape", "terrain", `grid ${t.width}x${t.height} must be positive`);
  }
  if (t.cell_size_km <= 0) {
    bad("BadCellSize", "terrain.cell_size_km", "cell size must be positive");
  }
  if (t.cells.length !== t.width * t.height) {
    bad("CellCountMismatch", "terrain.cells",
      `${t.cells.length} cells for a ${t.width}x${t.height} grid`);
  }
  t.cells.forEach((c, i) => {
    if (IMPASSABLE.has(c.kind) && c.mobility !== 0) {
      bad("ImpassableMobility", `terrain.cells[${i}]`,
        `${c.kind} cell must have mobility 0, got ${c.mobility}`);
    } else if (!IMPASSABLE.has(c.kind) && !(c.mobility > 0 && c.mobility <= 1)) {
      bad("MobilityOutOfRange", `terrain.cells[${i}]`,
        `${c.kind} cell needs mobility in (0, 1], got ${c.mobility}`);
    }
  });

  const gridOk = t.cells.length === t.width * t.height && t.width > 0 && t.height > 0;

  const seen = new Map<string, string>();
  const claim = (ownerPath: string, id: string) => {
    const prior = seen.get(id);
    if (prior !== undefined) {
      bad("DuplicateId", ownerPath, `id '${id}' already used at ${prior}`);
    } else {
      seen.set(id, ownerPath);
    }
  };

  const unitIds = new Set<string>();
  const unitSide = new Map<string, string>();
  doc.units.forEach((u, i) => {
    const path = `units[${i}]`;
    claim(path, u.id);
    unitIds.add(u.id);
    unitSide.set(u.id, u.side);
    if (u.strength <= 0) {
      bad("NonPositiveStrength", `${path}.strength`, `strength ${u.strength} must be > 0`);
    }
    if (u.max_speed_kmh <= 0) {
      bad("NonPositiveSpeed", `${path}.max_speed_kmh`, `speed ${u.max_speed_kmh} must be > 0`);
    }
    if (u.weapon_range_km < 0) {
      bad("NegativeRange", `${path}.weapon_range_km`, "weapon range must be >= 0");
    }
    if (u.supplies.fuel_l < 0 || u.supplies.ammo_u < 0) {
      bad("NegativeSupply", `${path}.supplies`, "supplies must be >= 0");
    }
    if (gridOk) {
      if (!inBounds(doc, u.position)) {
        bad("UnitOffGrid", `${path}.position`, `(${u.position}) outside the grid`);
      } else if (!(mobilityAt(doc, u.position) > 0)) {
        bad("UnitOnImpassable", `${path}.position`, `(${u.position}) has mobility 0`);
      }
    }
  });

  doc.measures.forEach((m, i) => {
    const path = `measures[${i}]`;
    claim(path, m.id);
    if (m.geometry.length === 0) {
      bad("EmptyGeometry", `${path}.geometry`, "geometry must be nonempty");
    }
    if (gridOk) {
      m.geometry.forEach((g, j) => {
        if (!inBounds(doc, g)) {
          bad("GeometryOffGrid", `${path}.geometry[${j}]`, `(${g}) outside the grid`);
        }
      });
    }
  });

  doc.groups.forEach((g, i) => {
    const path = `groups[${i}]`;
    claim(path, g.id);
    if (g.members.length === 0) {
      bad("EmptyGroup", `${path}.members`, "group has no members");
    }
    const sides = new Set<string>();
    g.members.forEach((member, j) => {
      if (!unitIds.has(member)) {
        bad("DanglingReference", `${path}.members[${j}]`, `no unit '${member}'`);
      } else {
        sides.add(unitSide.get(member)!);
      }
    });
    if (sides.size > 1) {
      bad("MixedSideGroup", `${path}.members`, "group mixes friendly and enemy units");
    }
  });

  if (!(doc.coa.length >= 1 && doc.coa.length <= 64)) {
    bad("CoaSizeOutOfRange", "coa", `${doc.coa.length} tasks; accepted range is 1-64`);
  }

  const groupIds = new Set(doc.groups.map((g) => g.id));
  const measureIds = new Set(doc.measures.map((m) => m.id));
  const taskIds = new Set<string>();
  doc.coa.forEach((task, i) => {
    const path = `coa[${i}]`;
    claim(path, task.id);
    taskIds.add(task.id);
    if (!unitIds.has(task.actor) && !groupIds.has(task.actor)) {
      bad("DanglingReference", `${path}.actor`,
        `actor '${task.actor}' is neither a unit nor a group`);
    }
    if ("measure" in task.objective) {
      if (!measureIds.has(task.objective.measure)) {
        bad("DanglingReference", `${path}.objective`,
          `no control measure '${task.objective.measure}'`);
      }
    } else if (gridOk && !inBounds(doc, task.objective.cell)) {
      bad("ObjectiveOffGrid", `${path}.objective`,
        `(${task.objective.cell}) outside the grid`);
    }
  });

  doc.coa.forEach((task, i) => {
    task.after.forEach((dep, j) => {
      if (!taskIds.has(dep)) {
        bad("DanglingReference", `coa[${i}].after[${j}]`, `no task '${dep}'`);
      }
    });
  });

  if (coaHasCycle(doc.coa)) {
    bad("CyclicTaskOrder", "coa", "after-edges among tasks form a cycle");
  }

  out.sort((a, b) =>
    a.path < b.path ? -1 : a.path > b.path ? 1 :
    a.code < b.code ? -1 : a.code > b.code ? 1 : 0);
  return out;
}

function coaHasCycle(tasks: TaskDoc[]): boolean {
  const edges = new Map(tasks.map((t) => [t.id, t.after]));
  const state = new Map<string, number>();

  const visit = (id: string): boolean => {
    if (state.get(id) === 1) return true;
    if (state.get(id) === 2 || !edges.has(id)) return false;
    state.set(id, 1);
    for (const dep of edges.get(id)!) {
      if (visit(dep)) return true;
    }
    state.set(id, 2);
    return false;
  };

  return tasks.some((t) => visit(t.id));
}
