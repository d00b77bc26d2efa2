/** Wire formats of the planning service. These mirror the server JSON
 * exactly; the workbench never derives its own numbers from them beyond
 * presentation filtering. */

export type Side = "friendly" | "enemy";
export type UnitKind = "armor" | "infantry" | "artillery" | "logistics" | "engineer";
export type Echelon = "company" | "battalion" | "brigade";
export type TerrainKind = "open" | "urban" | "forest" | "water" | "obstacle";
export type MeasureKind = "phase_line" | "axis" | "objective";
export type BattlefieldFunction =
  | "security" | "intelligence" | "maneuver" | "fires"
  | "mobility" | "logistics" | "command";

export type Cell = [number, number]; // [row, col]

export interface GridCellDoc {
  kind: TerrainKind;
  mobility: number;
}

export interface TerrainDoc {
  width: number;
  height: number;
  cell_size_km: number;
  cells: GridCellDoc[];
}

export interface UnitDoc {
  id: string;
  side: Side;
  kind: UnitKind;
  echelon: Echelon;
  strength: number;
  position: Cell;
  max_speed_kmh: number;
  weapon_range_km: number;
  supplies: { fuel_l: number; ammo_u: number };
}

export interface MeasureDoc {
  id: string;
  kind: MeasureKind;
  geometry: Cell[];
  label: string;
}

export interface GroupDoc {
  id: string;
  members: string[];
}

export type ObjectiveDoc = { measure: string } | { cell: Cell };

export interface TaskDoc {
  id: string;
  verb: string;
  actor: string;
  objective: ObjectiveDoc;
  after: string[];
}

export interface ScenarioDoc {
  name: string;
  clock_start: string;
  terrain: TerrainDoc;
  units: UnitDoc[];
  measures: MeasureDoc[];
  groups: GroupDoc[];
  coa: TaskDoc[];
}

export interface Violation {
  code: string;
  path: string;
  message: string;
}

export type Origin = "user" | "decomposition" | "reaction" | "counteraction";

export interface NodeDoc {
  id: number;
  verb: string;
  side: Side;
  actor: string;
  function: BattlefieldFunction;
  objective: ObjectiveDoc;
  origin: Origin;
  arc_depth: number;
  path: string;
  parent: number | null;
  deps: number[];
  not_before_min: number;
  pin_start_min: number | null;
  window: { start_min: number; end_min: number } | null;
  route: { cells: Cell[]; length_km: number; cost: number } | null;
  composite: boolean;
  provenance: { rule_id: string; reactor_id: string; distance_km: number } | null;
}

export interface PlanDoc {
  version: number;
  scenario: string;
  clock_start: string;
  config: {
    arc_depth_cap: number;
    node_cap: number;
    sync_period_min: number;
    kill_rate_per_min: number;
  };
  nodes: NodeDoc[];
  attrition: {
    node: number;
    blue_unit: string;
    red_unit: string;
    blue_loss: number;
    red_loss: number;
    terminated_early: boolean;
    live_min: number;
  }[];
  supply: { node: number; unit: string; fuel_l: number; ammo_u: number }[];
  stats: { node_count: number };
}

export interface MatrixDoc {
  clock_start: string;
  period_min: number;
  columns: string[];
  rows: { function: BattlefieldFunction; cells: string[][] }[];
}

export interface TimelineDoc {
  plan_id: string;
  version: number;
  clock_start: string;
  horizon_min: number;
  units: Record<string, [number, number, number][]>; // [t, row, col]
}

export interface HistoryDoc {
  plan_id: string;
  versions: { version: number; parent: number | null }[];
}

export interface PinEdit {
  node: number;
  start_min: number;
}

export interface EditSet {
  pins?: PinEdit[];
  deletes?: string[];
  amend_coa?: TaskDoc[] | null;
}

export interface PlanRef {
  plan_id: string;
  version: number;
  node_count?: number;
}
