#!/usr/bin/env python3
"""End-to-end demo on the bundled brigade fixture.

Expands the course of action, prints headline numbers, runs the
consistency oracle, and dumps the synchronization matrix as CSV.
"""

from __future__ import annotations

import sys
from collections import Counter
from pathlib import Path

from coaplan import (build_sync_matrix, check_consistency, expand_coa,
                     export_matrix, load_scenario, parse_kb)

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"


def main() -> int:
    scenario = load_scenario((FIXTURES / "delta-offense.json").read_text())
    kb = parse_kb((FIXTURES / "delta.kb").read_text())
    plan = expand_coa(scenario, kb)

    origins = Counter(n.origin.value for n in plan.nodes.values())
    print(f"scenario : {scenario.name} ({len(scenario.coa)} high-level tasks)")
    print(f"expanded : {plan.node_count} actions in {plan.wall_time_ms:.0f} ms")
    print(f"horizon  : {plan.horizon_min()} min")
    print(f"origins  : {dict(origins)}")
    print(f"attrition: {len(plan.attrition_ledger)} engagements, "
          f"supply: {len(plan.supply_ledger)} draws")

    violations = check_consistency(plan)
    print(f"checker  : {'CONSISTENT' if not violations else violations}")

    print()
    print(export_matrix(build_sync_matrix(plan), "csv"))
    return 0 if not violations else 1


if __name__ == "__main__":
    sys.exit(main())
