#!/usr/bin/env python
from __future__ import annotations

"""Tiny demo that wires the simulator components and serves the repeating trace.

Runs DyHypes on an 8-node cube over `data/example_trace.jsonl`, prints every
telemetry event and then the run summary.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.adapters.telemetry.print_sink import PrintSink  # noqa: E402
from src.adapters.traces.jsonl_trace_store import JSONLTraceStore  # noqa: E402
from src.engine.dyhypes import DyHypesServer  # noqa: E402
from src.sim.config import build_run_config, env_overrides  # noqa: E402
from src.sim.runner import SimulationRunner  # noqa: E402

# Load environment variables from .env if present (developer convenience)
try:
    from dotenv import load_dotenv  # type: ignore

    load_dotenv()
except Exception:
    pass


def main() -> None:
    """Wire components and run one small simulation end to end."""
    config = build_run_config({
        "dimension": 3,
        "algorithm": "dyhypes",
        "workload": {"kind": "trace", "path": "data/example_trace.jsonl"},
        "m": 7,
        "sample_every": 0,
        **env_overrides(),
    })
    server = DyHypesServer(config["dimension"], seed=config["seed"])
    runner = SimulationRunner(config, server, PrintSink())
    outcome = runner.run(JSONLTraceStore(config["workload"]["path"]))
    summary = {k: v for k, v in outcome.summary.items() if k not in ("config", "message_fit")}
    print({"summary": summary})


if __name__ == "__main__":
    main()
