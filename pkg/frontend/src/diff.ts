/** Plan version diff keyed by stable node paths.
 *
 * Node ids are assigned per expansion run, but the provenance path of a
 * node survives replanning, so it is the identity a human cares about
 * when comparing versions. */

import type { NodeDoc, PlanDoc } from "./types.js";

export interface Retiming {
  path: string;
  before: { start_min: number; end_min: number };
  after: { start_min: number; end_min: number };
}

export interface PlanDiff {
  added: NodeDoc[];
  removed: NodeDoc[];
  retimed: Retiming[];
}

export function diffPlans(before: PlanDoc, after: PlanDoc): PlanDiff {
  const lhs = new Map(before.nodes.map((n) => [n.path, n]));
  const rhs = new Map(after.nodes.map((n) => [n.path, n]));

  const added = after.nodes.filter((n) => !lhs.has(n.path));
  const removed = before.nodes.filter((n) => !rhs.has(n.path));
  const retimed: Retiming[] = [];
  for (const n of before.nodes) {
    const other = rhs.get(n.path);
    if (!other || n.window === null || other.window === null) {
      continue;
    }
    if (n.window.start_min !== other.window.start_min ||
        n.window.end_min !== other.window.end_min) {
      retimed.push({ path: n.path, before: n.window, after: other.window });
    }
  }
  return { added, removed, retimed };
}

export function changeCount(diff: PlanDiff): number {
  return diff.added.length + diff.removed.length + diff.retimed.length;
}

/** Paths removed together with a deleted user task (ancestor closure). */
export function removedSubtreePaths(diff: PlanDiff, taskId: string): string[] {
  const prefix = `coa:${taskId}`;
  return diff.removed
    .map((n) => n.path)
    .filter((p) => p === prefix || p.startsWith(`${prefix}/`));
}
