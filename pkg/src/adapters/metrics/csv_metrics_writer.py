from __future__ import annotations
"""Per-request metrics as CSV, run summary as JSON next to it.

The CSV keeps the fixed column set; diagnostics (α, phases, K-order) only
reach the summary and telemetry. Output is byte-stable for a given run.
"""
import csv
import json
from pathlib import Path

from src.core.interfaces import MetricsSink
from src.core.types import RequestMetrics, RunSummary

COLUMNS = ["t", "u", "v", "hops", "rounds", "messages", "ws", "log_ws", "cost", "invariant_ok"]


class CSVMetricsWriter(MetricsSink):
    def __init__(self, path: str | Path, summary_path: str | Path | None = None) -> None:
        self.path = Path(path)
        self.summary_path = Path(summary_path) if summary_path else self.path.with_suffix(".summary.json")
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("w", newline="") as f:
            csv.writer(f).writerow(COLUMNS)

    def write_row(self, row: RequestMetrics) -> None:
        with self.path.open("a", newline="") as f:
            csv.writer(f).writerow([int(row[c]) if c == "invariant_ok" else row[c] for c in COLUMNS])

    def write_summary(self, summary: RunSummary) -> None:
        self.summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def read_metrics(path: str | Path) -> list[dict[str, int]]:
    with Path(path).open(newline="") as f:
        return [{k: int(v) for k, v in row.items()} for row in csv.DictReader(f)]
