#!/usr/bin/env python3
"""Record service responses as contract fixtures for the workbench tests.

The frontend must display exactly what the service says, so its tests run
against these recorded bytes instead of a live server. Re-run after any
engine change, then re-run `npm test` in frontend/.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from coaplan import PlannerConfig, parse_kb
from coaplan.service import create_app

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
OUT = REPO / "frontend" / "fixtures"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    kb = parse_kb((FIXTURES / "delta.kb").read_text())
    client = TestClient(create_app(kb, PlannerConfig()))

    scenario_doc = (FIXTURES / "delta-offense.json").read_text()
    (OUT / "scenario_delta.json").write_text(scenario_doc)

    scen_resp = client.post("/api/scenarios", content=scenario_doc)
    (OUT / "scenario_response.json").write_text(scen_resp.text)
    sid = scen_resp.json()["scenario_id"]
    plan_resp = client.post("/api/plans", content=json.dumps({"scenario_id": sid}))
    (OUT / "plan_response.json").write_text(plan_resp.text)
    made = plan_resp.json()
    pid = made["plan_id"]

    plan_v1 = client.get(f"/api/plans/{pid}/1").text
    (OUT / "plan_v1.json").write_text(plan_v1)
    (OUT / "matrix_v1.json").write_text(
        client.get(f"/api/plans/{pid}/1/matrix?period=30").text)
    (OUT / "matrix_v1.csv").write_text(
        client.get(f"/api/plans/{pid}/1/matrix?period=30&format=csv").text)
    (OUT / "timeline_v1.json").write_text(
        client.get(f"/api/plans/{pid}/1/timeline").text)

    delete_edit = {"deletes": ["t6"]}
    resp = client.post(f"/api/plans/{pid}/1/edits", content=json.dumps(delete_edit))
    (OUT / "edit_delete_request.json").write_text(json.dumps(delete_edit))
    (OUT / "edit_delete_response.json").write_text(resp.text)
    v2 = resp.json()["version"]
    (OUT / "plan_v2.json").write_text(client.get(f"/api/plans/{pid}/{v2}").text)
    (OUT / "matrix_v2.json").write_text(
        client.get(f"/api/plans/{pid}/{v2}/matrix?period=30").text)

    resp = client.post(f"/api/plans/{pid}/1/edits", content=json.dumps({}))
    (OUT / "edit_empty_response.json").write_text(resp.text)
    v3 = resp.json()["version"]
    (OUT / "plan_v3.json").write_text(client.get(f"/api/plans/{pid}/{v3}").text)

    # the store must hand back version 1 unchanged after both edits
    (OUT / "plan_v1_refetch.json").write_text(client.get(f"/api/plans/{pid}/1").text)
    (OUT / "history.json").write_text(client.get(f"/api/plans/{pid}/history").text)

    # validation contract: broken documents and the server's verdicts
    cases = []
    base = json.loads(scenario_doc)

    broken1 = json.loads(scenario_doc)
    broken1["coa"][0]["actor"] = "ghost-unit"
    cases.append(broken1)

    broken2 = json.loads(scenario_doc)
    broken2["units"][0]["position"] = [0, 20]  # river cell, mobility 0
    cases.append(broken2)

    broken3 = json.loads(scenario_doc)
    broken3["coa"] = []
    cases.append(broken3)

    broken4 = json.loads(scenario_doc)
    broken4["measures"][0]["geometry"] = []
    broken4["units"][1]["strength"] = -5
    cases.append(broken4)

    recorded = []
    for doc in cases:
        resp = client.post("/api/scenarios", content=json.dumps(doc))
        recorded.append({"doc": doc, "violations": resp.json()["violations"]})
    recorded.append({
        "doc": base,
        "violations": client.post("/api/scenarios",
                                  content=scenario_doc).json()["violations"],
    })
    (OUT / "validation_cases.json").write_text(json.dumps(recorded, indent=2) + "\n")
    print(f"recorded {len(list(OUT.iterdir()))} fixture files into {OUT}")


if __name__ == "__main__":
    main()
