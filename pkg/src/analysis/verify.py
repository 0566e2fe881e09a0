from __future__ import annotations
"""Statistical verification campaigns.

A campaign is a grid of (dimension, workload, seed) cells. Each cell is one
run; the claim's statistic is aggregated over cells (or over sampled
fractions) and compared with the stated bound plus the configured slack.
Reports carry the full campaign and seed list so any cell can be replayed.
"""
from typing import Any, Callable, Mapping, Optional

import numpy as np

from src.adapters.telemetry.null_sink import NullSink
from src.core.errors import ConfigError
from src.core.interfaces import TelemetrySink
from src.core.types import VerifyReport
from src.sim.config import build_run_config
from src.sim.runner import RunOutcome, run

CLAIMS = {
    "routing_thm": ("dyhypes", "mean total hops / (WS + m) at most 2", 2.0),
    "ss_thm": ("dyhypes_s", "mean total hops / (WS + m) at most 1", 1.0),
    "ts_lemma": ("dyhypes", "sampled share of s^u_d reached since T^u_d at least 0.63", 0.63),
    "ss_time_lemma": ("dyhypes_s", "share of s^server_d seen in the last 2^(N-d) requests at least 0.72", 0.72),
    "ws_property": ("dyhypes", "share of requests with tree distance at most ceil(log2 T) is 1", 1.0),
    "msg_complexity": ("dyhypes", "messages per request fit c * 2^(N - alpha) with stable c", 0.2),
    "cost_symmetry": ("dyhypes", "rounds per request fit c * (N - alpha) with stable c", 0.2),
}


def _workload(spec: Any) -> dict[str, Any]:
    if isinstance(spec, str):
        return {"kind": spec, "s": 1.2} if spec == "zipf" else {"kind": spec}
    return dict(spec)


def _cells(campaign: Mapping[str, Any], algorithm: str, sample_every: int):
    seeds = campaign.get("seed_list") or list(range(int(campaign.get("seeds", 5))))
    for N in campaign.get("dimensions", [campaign.get("dimension", 5)]):
        for spec in campaign.get("workloads", ["uniform"]):
            workload = _workload(spec)
            if workload["kind"] == "repeating" and "pattern" not in workload:
                workload["pattern"] = [[0, 1], [0, 2], [1, 2]]
            for seed in seeds:
                yield build_run_config({
                    "dimension": N,
                    "algorithm": algorithm,
                    "workload": workload,
                    "m": campaign.get("m", 500),
                    "seed": seed,
                    "server": campaign.get("server", 0),
                    "checks": ["adjacency"],
                    "sample_every": sample_every,
                })


def _interval(values: list[float], sigma: float) -> tuple[float, float, float]:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean()) if arr.size else 0.0
    se = float(arr.std(ddof=1) / np.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, mean - sigma * se, mean + sigma * se


def fit_constant(pairs: list[list[int]], basis: Callable[[int], float]) -> Optional[float]:
    """Least-squares c through the origin for y ≈ c · basis(distance)."""
    x = np.asarray([basis(d) for d, _ in pairs], dtype=float)
    y = np.asarray([m for _, m in pairs], dtype=float)
    if not pairs or not x.any():
        return None
    return float(x @ y / (x @ x))


def fit_message_constant(pairs: list[list[int]]) -> Optional[float]:
    return fit_constant(pairs, lambda d: 2.0 ** d)


def fit_rounds_constant(pairs: list[list[int]]) -> Optional[float]:
    return fit_constant(pairs, float)


def verify_theorem(
    name: str,
    campaign: Mapping[str, Any],
    statistics: Optional[Mapping[str, Any]] = None,
    telemetry: Optional[TelemetrySink] = None,
    runner: Callable[..., RunOutcome] = run,
) -> VerifyReport:
    if name not in CLAIMS:
        raise ConfigError(f"unknown theorem {name!r}; expected one of {sorted(CLAIMS)}")
    statistics = dict(statistics or {})
    slack = float(statistics.get("expectation_slack", 0.10))
    sigma = float(statistics.get("fraction_sigma", 2.0))
    if slack < 0 or sigma < 0:
        raise ConfigError("slack and sigma must be non-negative")
    algorithm, claim, bound = CLAIMS[name]
    telemetry = telemetry or NullSink()
    sample_every = int(campaign.get("sample_every", 5)) if name in ("ts_lemma", "ss_time_lemma") else 0

    cells: list[dict[str, Any]] = []
    per_cell: list[float] = []
    samples: list[float] = []
    fit_pairs: dict[int, list[list[int]]] = {}
    for config in _cells(campaign, algorithm, sample_every):
        outcome = runner(config, telemetry)
        s = outcome.summary
        rows = outcome.rows
        cell = {
            "dimension": config["dimension"],
            "workload": config["workload"]["kind"],
            "seed": config["seed"],
            "requests": s["requests"],
            "ws_bound": s["ws_bound"],
            "hops_ratio": s["hops_ratio"],
            "ratio": s["ratio"],
        }
        if name in ("routing_thm", "ss_thm"):
            per_cell.append(s["hops_ratio"])
        elif name == "ts_lemma":
            samples.extend(s["samples"].get("ts_fraction", []))
        elif name == "ss_time_lemma":
            samples.extend(s["samples"].get("ss_fraction", []))
        elif name == "ws_property":
            held = sum(1 for r in rows if config["dimension"] - r["alpha"] <= r["log_ws"])
            cell["held"] = held
            per_cell.append(held / len(rows) if rows else 1.0)
        else:
            series = s["message_fit"] if name == "msg_complexity" else s["rounds_fit"]
            fit_pairs.setdefault(config["dimension"], []).extend(series)
        cells.append(cell)

    fitted_c = None
    if name in ("routing_thm", "ss_thm"):
        statistic, low, high = _interval(per_cell, sigma)
        passed = statistic <= bound * (1 + slack)
        n = len(per_cell)
    elif name in ("ts_lemma", "ss_time_lemma"):
        statistic, low, high = _interval(samples, sigma)
        passed = bool(samples) and high >= bound
        n = len(samples)
    elif name == "ws_property":
        statistic, low, high = _interval(per_cell, sigma)
        passed = statistic >= bound - slack
        n = len(per_cell)
    else:
        fit = fit_message_constant if name == "msg_complexity" else fit_rounds_constant
        per_dim = {N: fit(pairs) for N, pairs in sorted(fit_pairs.items())}
        values = [c for c in per_dim.values() if c is not None]
        fitted_c = float(np.mean(values)) if values else None
        spread = max(abs(c - fitted_c) / fitted_c for c in values) if values and fitted_c else 0.0
        statistic, low, high = spread, min(values, default=0.0), max(values, default=0.0)
        passed = spread <= bound
        n = len(values)
        cells.append({"fitted_c_per_dimension": {str(k): v for k, v in per_dim.items()}})

    return VerifyReport(
        name=name,
        claim=claim,
        statistic=statistic,
        bound=bound,
        slack=slack,
        ci_low=low,
        ci_high=high,
        samples=n,
        passed=bool(passed),
        fitted_c=fitted_c,
        cells=cells,
        config={"campaign": dict(campaign), "statistics": statistics, "algorithm": algorithm},
    )
