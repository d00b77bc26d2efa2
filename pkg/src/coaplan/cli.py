"""Command-line interface.

    coaplan plan <scenario.json> <kb.kb> [--out plan.json] [--matrix out.csv]
                 [--period 30]
    coaplan serve --kb <kb.kb> [--host 127.0.0.1] [--port 8000] [--period 30]

Exit codes for `plan`: 0 success, 1 input/validation problems (the
violation list is printed), 2 planner errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import CoaPlanError, KbError, ParseError, PlannerError, SchemaError
from .kb import parse_kb
from .matrix import build_sync_matrix, export_matrix
from .plan import PlannerConfig, plan_to_json
from .planner import expand_coa
from .scenario import load_scenario, validate_scenario

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_PLANNER_ERROR = 2


def _load_inputs(scenario_path: str, kb_path: str):
    try:
        scenario = load_scenario(Path(scenario_path).read_text(encoding="utf-8"))
    except OSError as e:
        raise SystemExit(_fail(f"cannot read {scenario_path}: {e}", EXIT_INVALID_INPUT))
    except (ParseError, SchemaError) as e:
        raise SystemExit(_fail(f"{scenario_path}: {e.code}: {e}", EXIT_INVALID_INPUT))
    try:
        kb = parse_kb(Path(kb_path).read_text(encoding="utf-8"))
    except OSError as e:
        raise SystemExit(_fail(f"cannot read {kb_path}: {e}", EXIT_INVALID_INPUT))
    except KbError as e:
        raise SystemExit(_fail(f"{kb_path}: {e.code}: {e}", EXIT_INVALID_INPUT))
    return scenario, kb


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def cmd_plan(args: argparse.Namespace) -> int:
    scenario, kb = _load_inputs(args.scenario, args.kb)
    violations = validate_scenario(scenario)
    if violations:
        for v in violations:
            print(str(v), file=sys.stderr)
        return EXIT_INVALID_INPUT
    cfg = PlannerConfig(sync_period_min=args.period)
    try:
        plan = expand_coa(scenario, kb, cfg)
    except PlannerError as e:
        return _fail(f"{e.code}: {e}", EXIT_PLANNER_ERROR)

    plan_json = plan_to_json(plan)
    if args.out:
        Path(args.out).write_text(plan_json, encoding="utf-8")
    else:
        sys.stdout.write(plan_json)
    if args.matrix:
        m = build_sync_matrix(plan)
        Path(args.matrix).write_text(export_matrix(m, "csv"), encoding="utf-8")
    print(f"planned {plan.node_count} actions over {plan.horizon_min()} min "
          f"in {plan.wall_time_ms:.0f} ms", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    try:
        kb = parse_kb(Path(args.kb).read_text(encoding="utf-8"))
    except OSError as e:
        return _fail(f"cannot read {args.kb}: {e}", EXIT_INVALID_INPUT)
    except KbError as e:
        return _fail(f"{args.kb}: {e.code}: {e}", EXIT_INVALID_INPUT)
    serve(kb, PlannerConfig(sync_period_min=args.period),
          host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coaplan",
                                     description="course-of-action planner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="expand a scenario into a detailed plan")
    p_plan.add_argument("scenario", help="scenario JSON file")
    p_plan.add_argument("kb", help="knowledge base (.kb) file")
    p_plan.add_argument("--out", help="write plan JSON here (default: stdout)")
    p_plan.add_argument("--matrix", help="write synchronization matrix CSV here")
    p_plan.add_argument("--period", type=int, default=30,
                        help="matrix period in minutes (default 30)")
    p_plan.set_defaults(func=cmd_plan)

    p_serve = sub.add_parser("serve", help="run the HTTP/JSON service")
    p_serve.add_argument("--kb", required=True, help="knowledge base (.kb) file")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--period", type=int, default=30)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID_INPUT
    except CoaPlanError as e:
        return _fail(f"{e.code}: {e}", EXIT_PLANNER_ERROR)


if __name__ == "__main__":
    sys.exit(main())
