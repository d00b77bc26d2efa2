#!/usr/bin/env python3
"""Regenerate the golden files under tests/golden/.

Run only when an intentional behavior change invalidates them, then audit
the diff before committing: the acceptance suite pins plan JSON and matrix
CSV bytes against these files.
"""

from __future__ import annotations

from pathlib import Path

from coaplan import build_sync_matrix, expand_coa, export_matrix, load_scenario, \
    parse_kb, plan_to_json

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
GOLDEN = REPO / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for stem, kb_name in (("fpol-scenario", "fpol"), ("delta-offense", "delta")):
        scenario = load_scenario((FIXTURES / f"{stem}.json").read_text())
        kb = parse_kb((FIXTURES / f"{kb_name}.kb").read_text())
        plan = expand_coa(scenario, kb)
        plan_path = GOLDEN / f"{stem.replace('-', '_')}_plan.json"
        plan_path.write_text(plan_to_json(plan), encoding="utf-8")
        matrix_path = GOLDEN / f"{stem.replace('-', '_')}_matrix.csv"
        matrix_path.write_text(export_matrix(build_sync_matrix(plan), "csv"),
                               encoding="utf-8")
        print(f"{plan_path.name}: {plan.node_count} nodes, "
              f"horizon {plan.horizon_min()} min")


if __name__ == "__main__":
    main()
