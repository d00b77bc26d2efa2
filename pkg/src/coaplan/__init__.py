"""Course-of-action expansion, wargaming and synchronization-matrix toolkit."""

from .combat import (AttritionResult, ConsumptionRate, EngagementSpec, RateTable,
                     SupplyDelta, consume_supplies, integrate_engagement,
                     resolve_engagement)
from .errors import CoaPlanError, PlannerError, Violation
from .kb import (ActivityTemplate, ArcRule, BattlefieldFunction, ConditionExpr,
                 KnowledgeBase, Primitive, SubtaskSpec, eval_condition,
                 lookup_template, parse_kb, render_kb)
from .matrix import (SynchronizationMatrix, build_sync_matrix, export_matrix,
                     load_matrix)
from .plan import (ActionNode, EngagementRecord, Origin, Plan, PlannerConfig,
                   plan_to_dict, plan_to_json)
from .planner import (EditSet, InvalidScenario, Pin, decompose, expand_coa,
                      replan_with_edits)
from .arc import ReactorQuery, find_reactors, generate_reactions
from .routing import Route, plan_route, travel_time
from .scenario import (ControlMeasure, ForceGroup, HighLevelTask, Scenario, Side,
                       TerrainGrid, Unit, UnitKind, dump_scenario, load_scenario,
                       validate_scenario)
from .scheduling import (ResourceCalendar, ScheduleEntry, allocate_unit,
                         check_consistency, schedule_action)
from .store import PlanStore
from .worldstate import WorldProjector, WorldState, initial_state

__version__ = "0.1.0"
