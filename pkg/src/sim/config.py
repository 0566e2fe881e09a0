from __future__ import annotations
"""Run configuration: merge the layers and validate once, before any request.

Precedence is explicit flag > environment > YAML > built-in default.
"""
import os
from typing import Any, Mapping, Optional

from src.core.errors import ConfigError
from src.core.types import RunConfig

WORKLOAD_KINDS = {"uniform", "zipf", "repeating", "example", "trace", "adversarial"}
ALGORITHMS = {"dyhypes", "dyhypes_s"}
CHECKS = {"bijection", "invariant_I", "contiguity", "timestamps", "adjacency"}

BUILTIN_DEFAULTS: dict[str, Any] = {
    "dimension": 4,
    "algorithm": "dyhypes",
    "workload": {"kind": "uniform"},
    "m": 100,
    "seed": 0,
    "server": 0,
    "checks": sorted(CHECKS),
    "audit_c": 4.0,
    "strict": False,
    "sample_every": 0,
}


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> dict[str, Any]:
    environ = os.environ if environ is None else environ
    found: dict[str, Any] = {}
    try:
        if environ.get("HYPERSIM_SEED"):
            found["seed"] = int(environ["HYPERSIM_SEED"])
        if environ.get("HYPERSIM_AUDIT_C"):
            found["audit_c"] = float(environ["HYPERSIM_AUDIT_C"])
    except ValueError as exc:
        raise ConfigError(f"bad environment override: {exc}") from None
    return found


def merge_layers(*layers: Mapping[str, Any]) -> dict[str, Any]:
    """Later layers win; None values never override."""
    merged = dict(BUILTIN_DEFAULTS)
    for layer in layers:
        merged.update({k: v for k, v in layer.items() if v is not None})
    return merged


def _validate_workload(workload: Any) -> dict[str, Any]:
    if not isinstance(workload, Mapping) or workload.get("kind") not in WORKLOAD_KINDS:
        raise ConfigError(f"unknown workload {workload!r}")
    workload = dict(workload)
    kind = workload["kind"]
    if kind == "zipf" and float(workload.get("s", 1.0)) <= 0:
        raise ConfigError("zipf exponent must be positive")
    if kind == "repeating" and not workload.get("pattern"):
        raise ConfigError("repeating workload needs a pattern")
    if kind == "trace" and not workload.get("path"):
        raise ConfigError("trace workload needs a path")
    if kind == "adversarial":
        if float(workload.get("c", 1.0)) <= 0:
            raise ConfigError("adversarial constant must be positive")
        workload["base"] = _validate_workload(workload.get("base", {"kind": "uniform"}))
    return workload


def build_run_config(mapping: Mapping[str, Any]) -> RunConfig:
    merged = merge_layers(mapping)
    try:
        N = int(merged["dimension"])
        m = int(merged["m"])
        seed = int(merged["seed"])
        server = int(merged["server"])
        audit_c = float(merged["audit_c"])
        sample_every = int(merged["sample_every"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed numeric field: {exc}") from None
    if not 2 <= N <= 20:
        raise ConfigError(f"dimension {N} outside [2, 20]")
    if m < 1:
        raise ConfigError(f"m must be at least 1, got {m}")
    if merged["algorithm"] not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {merged['algorithm']!r}")
    if merged["algorithm"] == "dyhypes_s" and not 0 <= server < (1 << N):
        raise ConfigError(f"server {server} is not a node of a {N}-cube")
    if audit_c <= 0:
        raise ConfigError("audit constant must be positive")
    if sample_every < 0:
        raise ConfigError("sample_every must be non-negative")
    checks = list(merged["checks"] or [])
    unknown = set(checks) - CHECKS
    if unknown:
        raise ConfigError(f"unknown checks {sorted(unknown)}")
    return RunConfig(
        dimension=N,
        algorithm=merged["algorithm"],
        workload=_validate_workload(merged["workload"]),  # type: ignore[typeddict-item]
        m=m,
        seed=seed,
        server=server,
        checks=checks,
        audit_c=audit_c,
        strict=bool(merged["strict"]),
        sample_every=sample_every,
    )
