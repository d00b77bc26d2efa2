from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from coaplan import PlannerConfig, parse_kb
from coaplan.service import create_app

from conftest import read_fixture


@pytest.fixture()
def client():
    kb = parse_kb(read_fixture("delta.kb"))
    app = create_app(kb, PlannerConfig())
    with TestClient(app) as c:
        yield c


def post_scenario(client, name="delta-offense.json"):
    resp = client.post("/api/scenarios", content=read_fixture(name))
    assert resp.status_code == 200, resp.text
    return resp.json()


def make_plan(client):
    sid = post_scenario(client)["scenario_id"]
    resp = client.post("/api/plans", content=json.dumps({"scenario_id": sid}))
    assert resp.status_code == 200, resp.text
    return resp.json()


def test_scenario_round_trip(client):
    body = post_scenario(client)
    assert body["scenario_id"] == "s1"
    assert body["violations"] == []


def test_malformed_scenario_is_400(client):
    resp = client.post("/api/scenarios", content="{")
    assert resp.status_code == 400
    assert resp.json()["code"] == "ParseError"


def test_plan_and_fetch(client):
    made = make_plan(client)
    assert made == {"plan_id": "p1", "version": 1, "node_count": 81}
    resp = client.get("/api/plans/p1/1")
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["version"] == 1
    assert doc["stats"]["node_count"] == 81


def test_plan_unknown_scenario_404(client):
    resp = client.post("/api/plans", content=json.dumps({"scenario_id": "s9"}))
    assert resp.status_code == 404


def test_plan_invalid_scenario_422(client):
    doc = json.loads(read_fixture("delta-offense.json"))
    doc["coa"][0]["actor"] = "nobody"
    resp = client.post("/api/scenarios", content=json.dumps(doc))
    sid = resp.json()["scenario_id"]
    assert resp.json()["violations"]
    resp = client.post("/api/plans", content=json.dumps({"scenario_id": sid}))
    assert resp.status_code == 422
    assert resp.json()["code"] == "InvalidScenario"
    assert resp.json()["violations"]


def test_get_unknown_plan_404(client):
    assert client.get("/api/plans/p9/1").status_code == 404
    assert client.get("/api/plans/p9/1/matrix").status_code == 404
    assert client.get("/api/plans/p9/1/timeline").status_code == 404
    assert client.get("/api/plans/p9/history").status_code == 404


def test_matrix_formats(client):
    make_plan(client)
    js = client.get("/api/plans/p1/1/matrix?period=30")
    assert js.status_code == 200
    doc = json.loads(js.text)
    assert doc["period_min"] == 30
    assert [r["function"] for r in doc["rows"]][:2] == ["security", "intelligence"]
    csv_resp = client.get("/api/plans/p1/1/matrix?period=30&format=csv")
    assert csv_resp.status_code == 200
    assert csv_resp.text.startswith('"function",')
    bad = client.get("/api/plans/p1/1/matrix?format=xml")
    assert bad.status_code == 400


def test_empty_edits_make_identical_version(client):
    make_plan(client)
    before = client.get("/api/plans/p1/1").text
    resp = client.post("/api/plans/p1/1/edits", content=json.dumps({}))
    assert resp.status_code == 200
    assert resp.json()["version"] == 2
    v1 = json.loads(client.get("/api/plans/p1/1").text)
    v2 = json.loads(client.get("/api/plans/p1/2").text)
    assert v1["nodes"] == v2["nodes"]
    assert v2["version"] == 2
    # version 1 bytes unchanged by the edit
    assert client.get("/api/plans/p1/1").text == before


def test_edit_delete_then_revert_is_byte_identical(client):
    make_plan(client)
    original = client.get("/api/plans/p1/1").content
    resp = client.post("/api/plans/p1/1/edits",
                       content=json.dumps({"deletes": ["t6"]}))
    assert resp.status_code == 200
    v2 = json.loads(client.get("/api/plans/p1/2").text)
    assert v2["stats"]["node_count"] < 81
    # "revert" = fetch the parent version again
    assert client.get("/api/plans/p1/1").content == original
    history = client.get("/api/plans/p1/history").json()
    assert history["versions"] == [{"version": 1, "parent": None},
                                   {"version": 2, "parent": 1}]


def test_edit_pin_applies(client):
    make_plan(client)
    v1 = json.loads(client.get("/api/plans/p1/1").text)
    march = next(n for n in v1["nodes"] if n["path"] == "coa:t1/main")
    resp = client.post("/api/plans/p1/1/edits", content=json.dumps(
        {"pins": [{"node": march["id"], "start_min": 540}]}))
    assert resp.status_code == 200
    v2 = json.loads(client.get(f"/api/plans/p1/{resp.json()['version']}").text)
    again = next(n for n in v2["nodes"] if n["path"] == "coa:t1/main")
    assert again["window"]["start_min"] == 540


def test_edit_dangling_pin_422(client):
    make_plan(client)
    resp = client.post("/api/plans/p1/1/edits", content=json.dumps(
        {"pins": [{"node": 424242, "start_min": 0}]}))
    assert resp.status_code == 422
    assert resp.json()["code"] == "DanglingEdit"


def test_edit_branching_versions(client):
    make_plan(client)
    client.post("/api/plans/p1/1/edits", content=json.dumps({}))
    client.post("/api/plans/p1/1/edits", content=json.dumps({"deletes": ["t9"]}))
    history = client.get("/api/plans/p1/history").json()
    assert history["versions"] == [
        {"version": 1, "parent": None},
        {"version": 2, "parent": 1},
        {"version": 3, "parent": 1},
    ]


def test_service_plan_equals_engine_output(client, delta_scenario, delta_kb):
    from coaplan import expand_coa, plan_to_json

    make_plan(client)
    served = client.get("/api/plans/p1/1").text
    assert served == plan_to_json(expand_coa(delta_scenario, delta_kb))


def test_timeline_initial_positions(client):
    make_plan(client)
    resp = client.get("/api/plans/p1/1/timeline")
    assert resp.status_code == 200
    body = resp.json()
    assert body["horizon_min"] > 0
    scenario = json.loads(read_fixture("delta-offense.json"))
    for u in scenario["units"]:
        first = body["units"][u["id"]][0]
        assert first[0] == 0
        assert [first[1], first[2]] == [float(u["position"][0]),
                                        float(u["position"][1])]
        assert len(body["units"][u["id"]]) == body["horizon_min"] + 1
