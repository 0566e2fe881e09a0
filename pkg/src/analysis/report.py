from __future__ import annotations
"""Aggregate run summaries and verification reports into one table."""
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable

from src.core.errors import ConfigError

RUN_COLUMNS = [
    "run_id", "requests", "total_cost", "total_hops", "total_rounds", "total_messages",
    "ws_bound", "ratio", "hops_ratio", "max_cost", "invariant_failures", "audit_violations",
]
VERIFY_COLUMNS = ["name", "statistic", "bound", "slack", "ci_low", "ci_high", "samples", "passed", "fitted_c"]


def load_documents(paths: Iterable[str | Path]) -> list[dict[str, Any]]:
    docs = []
    for p in paths:
        try:
            docs.append(json.loads(Path(p).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read report input {p}: {exc}") from None
    return docs


def tabulate(docs: list[dict[str, Any]]) -> tuple[list[str], list[dict[str, Any]]]:
    """Verification reports and run summaries never share a table."""
    if docs and all("claim" in d for d in docs):
        columns = VERIFY_COLUMNS
    elif all("claim" not in d for d in docs):
        columns = RUN_COLUMNS
    else:
        raise ConfigError("cannot mix run summaries and verification reports")
    return columns, [{c: d.get(c) for c in columns} for d in docs]


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return "" if value is None else str(value)


def render(docs: list[dict[str, Any]], fmt: str) -> str:
    columns, rows = tabulate(docs)
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "md":
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        lines += ["| " + " | ".join(_cell(r[c]) for c in columns) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown report format {fmt!r}")
