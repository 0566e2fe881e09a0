from __future__ import annotations
"""Command-line surface: run, verify, appendix, report, check-state.

Exit codes: 0 success, 1 a run or claim failed its checks, 2 a simulation
error (bad config, malformed trace, corrupted state).
"""
import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from src.adapters.config.yaml_config import YAMLConfigSource
from src.adapters.metrics.csv_metrics_writer import CSVMetricsWriter
from src.adapters.plans.jsonl_plan_sink import JSONLPlanSink
from src.adapters.state.json_snapshot import JSONSnapshotStore
from src.adapters.telemetry.jsonl_sink import JSONLSink
from src.adapters.telemetry.null_sink import NullSink
from src.adapters.telemetry.print_sink import PrintSink
from src.adapters.traces.jsonl_trace_store import JSONLTraceStore
from src.analysis.appendix import HYPOTHESIS_CONSTANTS, appendix_recurrence
from src.analysis.report import load_documents, render
from src.analysis.verify import verify_theorem
from src.core.errors import SimulationError
from src.core.interfaces import TelemetrySink
from src.nodestate.checks import all_violations
from src.nodestate.state import GroupTable
from src.hypercube.network import NetworkState
from src.sim.config import build_run_config, env_overrides
from src.sim.runner import SimulationRunner, build_server, build_trace

DEFAULT_CONFIG = "config/simulation.yaml"
ALGO_ALIASES = {"dyhypes": "dyhypes", "ss": "dyhypes_s", "dyhypes_s": "dyhypes_s"}


def _config_source(path: Optional[str]) -> Optional[YAMLConfigSource]:
    path = path or os.environ.get("HYPERSIM_CONFIG") or DEFAULT_CONFIG
    return YAMLConfigSource(path) if Path(path).exists() else None


def _telemetry(args: argparse.Namespace) -> TelemetrySink:
    if getattr(args, "telemetry", None):
        return JSONLSink(args.telemetry)
    if getattr(args, "verbose", False):
        return PrintSink()
    return NullSink()


def cmd_run(args: argparse.Namespace) -> int:
    source = _config_source(args.config)
    layers: list[dict[str, Any]] = [source.defaults() if source else {}, env_overrides()]
    flags: dict[str, Any] = {
        "dimension": args.dim,
        "algorithm": ALGO_ALIASES.get(args.algo, args.algo) if args.algo else None,
        "m": args.m,
        "seed": args.seed,
        "server": args.server,
        "audit_c": args.audit_c,
        "strict": True if args.strict else None,
    }
    if args.trace:
        flags["workload"] = {"kind": "trace", "path": args.trace}
    elif args.workload:
        flags["workload"] = source.workload(args.workload) if source else {"kind": args.workload}
    merged: dict[str, Any] = {}
    for layer in layers + [flags]:
        merged.update({k: v for k, v in layer.items() if v is not None})
    config = build_run_config(merged)

    server = build_server(config)
    trace_source = JSONLTraceStore(config["workload"]["path"]) if config["workload"]["kind"] == "trace" else None
    trace = build_trace(config, server, source=trace_source)
    metrics = CSVMetricsWriter(args.out) if args.out else None
    plans = JSONLPlanSink(args.plans) if args.plans else None
    outcome = SimulationRunner(config, server, _telemetry(args), metrics, plans).run(trace)
    if args.snapshot:
        JSONSnapshotStore(args.snapshot).export(server.snapshot())  # type: ignore[attr-defined]

    s = outcome.summary
    print(json.dumps({k: s[k] for k in ("run_id", "requests", "total_cost", "ws_bound", "ratio", "max_cost",
                                         "invariant_failures", "audit_violations")}, indent=2))
    failed = s["invariant_failures"] > 0 or (args.audit and s["audit_violations"] > 0)
    return 1 if failed else 0


def cmd_verify(args: argparse.Namespace) -> int:
    source = _config_source(args.config)
    campaign: dict[str, Any] = dict(source.campaign(args.name)) if source else {}
    if args.dim:
        campaign["dimensions"] = args.dim
    if args.seeds is not None:
        campaign["seeds"] = args.seeds
    if args.m is not None:
        campaign["m"] = args.m
    if args.workloads:
        campaign["workloads"] = args.workloads
    if source:
        campaign["workloads"] = [
            source.workload(w) if isinstance(w, str) else w for w in campaign.get("workloads", ["uniform"])
        ]
    statistics = source.statistics() if source else {}
    if args.slack is not None:
        statistics["expectation_slack"] = args.slack
    report = verify_theorem(args.name, campaign, statistics, _telemetry(args))
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(json.dumps({k: report[k] for k in ("name", "statistic", "bound", "slack", "passed", "fitted_c")}, indent=2))
    return 0 if report["passed"] else 1


def cmd_appendix(args: argparse.Namespace) -> int:
    rows = appendix_recurrence(args.dim, args.dim - args.depth, args.steps)
    if args.format == "json":
        print(json.dumps({"rows": rows, "hypothesis_constants": HYPOTHESIS_CONSTANTS}, indent=2))
        return 0
    print("| time | E[S] | E[S~] |")
    print("|---|---|---|")
    for r in rows:
        tilde = "" if r["expected_tilde"] is None else f"{r['expected_tilde']:.2f}"
        print(f"| t{r['time']} | {r['expected_size']:.2f} | {tilde} |")
    print("\nhypothesis constants (reported only): " + ", ".join(f"{v}" for v in HYPOTHESIS_CONSTANTS.values()))
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    sys.stdout.write(render(load_documents(args.inputs), args.format))
    return 0


def cmd_check_state(args: argparse.Namespace) -> int:
    snapshot = JSONSnapshotStore(args.snapshot).load()
    if "states" in snapshot:
        table, net = GroupTable.from_snapshot(snapshot)
        problems = all_violations(net, table.states)
    else:
        net = NetworkState.from_placement(snapshot["dimension"], dict(enumerate(snapshot["placement"])))
        problems = [] if net.is_bijection() else ["placement is not a bijection"]
    for p in problems:
        print(p)
    print(f"{len(problems)} problem(s)")
    return 1 if problems else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypersim", description="Self-adjusting hypercube simulator")
    parser.add_argument("--config", help="YAML config (default: $HYPERSIM_CONFIG or " + DEFAULT_CONFIG + ")")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="serve one workload and write metrics")
    p.add_argument("--algo", choices=sorted(ALGO_ALIASES))
    p.add_argument("--dim", type=int)
    p.add_argument("--workload", help="workload kind or a name from the config's workloads section")
    p.add_argument("--m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--server", type=int)
    p.add_argument("--trace", help="JSONL trace to replay instead of a generated workload")
    p.add_argument("--out", help="metrics CSV path; the summary JSON goes next to it")
    p.add_argument("--plans", help="JSONL plan dump path")
    p.add_argument("--snapshot", help="write the final per-node state here")
    p.add_argument("--telemetry", help="JSONL telemetry path")
    p.add_argument("--audit", action="store_true", help="fail on CONGEST audit violations")
    p.add_argument("--audit-c", dest="audit_c", type=float)
    p.add_argument("--strict", action="store_true", help="stop at the first invariant failure")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run a statistical verification campaign")
    p.add_argument("name")
    p.add_argument("--dim", type=int, nargs="+")
    p.add_argument("--seeds", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--workloads", nargs="+")
    p.add_argument("--slack", type=float)
    p.add_argument("--out")
    p.add_argument("--telemetry")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("appendix", help="print the expected-occupancy recurrences")
    p.add_argument("--dim", type=int, default=8)
    p.add_argument("--level", dest="depth", type=int, choices=[1, 2, 3], default=2,
                   help="depth below the top: 1 → N−1, 2 → N−2, 3 → N−3")
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--format", choices=["md", "json"], default="md")
    p.set_defaults(func=cmd_appendix)

    p = sub.add_parser("report", help="tabulate summary or verification JSON files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--format", choices=["json", "csv", "md"], default="md")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("check-state", help="re-run the structural checks on a snapshot")
    p.add_argument("snapshot")
    p.set_defaults(func=cmd_check_state)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SimulationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
