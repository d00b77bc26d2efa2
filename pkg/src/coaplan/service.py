"""HTTP/JSON service over the planning engine.

Endpoints (all bodies JSON; errors are {code, message, path}):

    POST /api/scenarios                  store a scenario document
    POST /api/plans                      {scenario_id} -> expand, version 1
    GET  /api/plans/{id}/{v}             stored plan (byte-identical forever)
    GET  /api/plans/{id}/{v}/matrix      ?period=30&format=json|csv
    POST /api/plans/{id}/{v}/edits       EditSet -> new version
    GET  /api/plans/{id}/{v}/timeline    per-minute unit positions
    GET  /api/plans/{id}/history         version tree

Schema problems are 400, unknown ids 404, planner failures 422. Edits to
one plan id serialize behind a lock so version numbers are race-free.
"""

from __future__ import annotations

import json
import threading
from collections import defaultdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .errors import ParseError, PlannerError, SchemaError
from .kb import KnowledgeBase
from .matrix import build_sync_matrix, export_matrix
from .plan import Plan, PlannerConfig, plan_to_json
from .planner import EditSet, InvalidScenario, Pin, expand_coa, replan_with_edits
from .scenario import (CLOCK_FORMAT, Scenario, _Reader, _read_task,
                       load_scenario, validate_scenario)
from .store import PlanStore
from .worldstate import WorldProjector


def rebuild_projector(plan: Plan) -> WorldProjector:
    """Movement projector reconstructed from a finished plan's routes."""
    proj = WorldProjector(plan.scenario)
    for nid in sorted(plan.nodes):
        n = plan.nodes[nid]
        if n.route is not None and n.window is not None and n.end_min > n.start_min:
            proj.commit_move(n.actor, n.start_min, n.end_min, n.route)
    return proj


def sample_timeline(plan: Plan) -> dict:
    """Per-minute fractional (row, col) of every unit, for map animation."""
    proj = rebuild_projector(plan)
    horizon = plan.horizon_min()
    units = {}
    for u in plan.scenario.units:
        samples = []
        for t in range(horizon + 1):
            r, c = proj.point_at(u.id, t)
            samples.append([t, round(r, 4), round(c, 4)])
        units[u.id] = samples
    return {
        "clock_start": plan.scenario.clock_start.strftime(CLOCK_FORMAT),
        "horizon_min": horizon,
        "units": units,
    }


def _error(status: int, code: str, message: str, path: str = "",
           extra: dict | None = None) -> JSONResponse:
    body = {"code": code, "message": message, "path": path}
    if extra:
        body.update(extra)
    return JSONResponse(status_code=status, content=body)


def _planner_error(exc: PlannerError) -> JSONResponse:
    extra = None
    if isinstance(exc, InvalidScenario):
        extra = {"violations": [
            {"code": v.code, "path": v.path, "message": v.message}
            for v in exc.violations
        ]}
    return _error(422, exc.code, str(exc), exc.path, extra)


def create_app(kb: KnowledgeBase, cfg: PlannerConfig | None = None) -> FastAPI:
    cfg = cfg or PlannerConfig()
    app = FastAPI(title="coaplan", docs_url=None, redoc_url=None)

    scenarios: dict[str, Scenario] = {}
    plans: dict[tuple[str, int], Plan] = {}
    store = PlanStore()
    counters = {"scenario": 0, "plan": 0}
    state_lock = threading.Lock()
    plan_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)

    def _store_plan(plan_id: str, plan: Plan, parent: int | None) -> None:
        store.put(plan_id, plan.version, plan_to_json(plan).encode("utf-8"), parent)
        plans[(plan_id, plan.version)] = plan

    @app.post("/api/scenarios")
    async def post_scenario(request: Request):
        text = (await request.body()).decode("utf-8")
        try:
            scenario = load_scenario(text)
        except (ParseError, SchemaError) as e:
            return _error(400, e.code, str(e), e.path)
        with state_lock:
            counters["scenario"] += 1
            sid = f"s{counters['scenario']}"
            scenarios[sid] = scenario
        violations = validate_scenario(scenario)
        return {"scenario_id": sid, "violations": [
            {"code": v.code, "path": v.path, "message": v.message} for v in violations
        ]}

    @app.post("/api/plans")
    async def post_plan(request: Request):
        try:
            body = json.loads((await request.body()).decode("utf-8"))
        except json.JSONDecodeError as e:
            return _error(400, "ParseError", f"malformed JSON: {e.msg}")
        if not isinstance(body, dict) or not isinstance(body.get("scenario_id"), str):
            return _error(400, "SchemaError", 'expected {"scenario_id": "..."}',
                          "scenario_id")
        sid = body["scenario_id"]
        scenario = scenarios.get(sid)
        if scenario is None:
            return _error(404, "NotFound", f"no scenario {sid!r}", "scenario_id")
        try:
            plan = expand_coa(scenario, kb, cfg)
        except PlannerError as e:
            return _planner_error(e)
        with state_lock:
            counters["plan"] += 1
            pid = f"p{counters['plan']}"
        _store_plan(pid, plan, parent=None)
        return {"plan_id": pid, "version": 1, "node_count": plan.node_count}

    @app.get("/api/plans/{plan_id}/history")
    async def get_history(plan_id: str):
        infos = store.history(plan_id)
        if not infos:
            return _error(404, "NotFound", f"no plan {plan_id!r}", "plan_id")
        return {"plan_id": plan_id,
                "versions": [{"version": i.version, "parent": i.parent} for i in infos]}

    @app.get("/api/plans/{plan_id}/{version}")
    async def get_plan(plan_id: str, version: int):
        if not store.has(plan_id, version):
            return _error(404, "NotFound", f"no plan {plan_id!r} v{version}", "plan_id")
        return Response(content=store.get(plan_id, version),
                        media_type="application/json")

    @app.get("/api/plans/{plan_id}/{version}/matrix")
    async def get_matrix(plan_id: str, version: int,
                         period: int | None = None, format: str = "json"):
        plan = plans.get((plan_id, version))
        if plan is None:
            return _error(404, "NotFound", f"no plan {plan_id!r} v{version}", "plan_id")
        if format not in ("json", "csv"):
            return _error(400, "SchemaError", f"format {format!r} not in (json, csv)",
                          "format")
        if period is not None and period < 1:
            return _error(400, "SchemaError", "period must be >= 1", "period")
        m = build_sync_matrix(plan, period_min=period)
        text = export_matrix(m, format)
        media = "application/json" if format == "json" else "text/csv; charset=utf-8"
        return PlainTextResponse(content=text, media_type=media)

    @app.post("/api/plans/{plan_id}/{version}/edits")
    async def post_edits(plan_id: str, version: int, request: Request):
        plan = plans.get((plan_id, version))
        if plan is None:
            return _error(404, "NotFound", f"no plan {plan_id!r} v{version}", "plan_id")
        try:
            edits = _parse_edits((await request.body()).decode("utf-8"))
        except (ParseError, SchemaError) as e:
            return _error(400, e.code, str(e), e.path)
        with plan_locks[plan_id]:
            next_v = store.next_version(plan_id)
            try:
                new_plan = replan_with_edits(plan, edits, version=next_v)
            except PlannerError as e:
                return _planner_error(e)
            _store_plan(plan_id, new_plan, parent=version)
        return {"plan_id": plan_id, "version": new_plan.version,
                "node_count": new_plan.node_count}

    @app.get("/api/plans/{plan_id}/{version}/timeline")
    async def get_timeline(plan_id: str, version: int):
        plan = plans.get((plan_id, version))
        if plan is None:
            return _error(404, "NotFound", f"no plan {plan_id!r} v{version}", "plan_id")
        body = {"plan_id": plan_id, "version": version}
        body.update(sample_timeline(plan))
        return body

    return app


def _parse_edits(text: str) -> EditSet:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e.msg}") from None
    rd = _Reader(raw, "")
    if not isinstance(raw, dict):
        raise SchemaError("expected an edit-set object")
    allowed = {"pins", "deletes", "amend_coa"}
    extra = set(raw) - allowed
    if extra:
        raise SchemaError(f"unknown field {sorted(extra)[0]!r}", path=sorted(extra)[0])

    pins = []
    for prd in (rd.child("pins").items() if "pins" in raw else []):
        prd.obj("node", "start_min")
        pins.append(Pin(node_id=prd.child("node").int_(),
                        start_min=prd.child("start_min").int_()))
    deletes = tuple(
        d.token() for d in (rd.child("deletes").items() if "deletes" in raw else [])
    )
    amend = None
    if raw.get("amend_coa") is not None:
        amend = tuple(_read_task(t) for t in rd.child("amend_coa").items())
    return EditSet(pins=tuple(pins), deletes=deletes, amend_coa=amend)


def serve(kb: KnowledgeBase, cfg: PlannerConfig | None = None,
          host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(kb, cfg), host=host, port=port, log_level="info")
