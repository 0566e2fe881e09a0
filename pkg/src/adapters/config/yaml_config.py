from __future__ import annotations
"""Run defaults and campaign grids backed by YAML.

Reads `config/simulation.yaml` once. Campaign grids and named workloads live
in config so a campaign can be widened without code changes.
"""
from pathlib import Path
from typing import Any, Dict

import yaml

from src.core.errors import ConfigError
from src.core.interfaces import ConfigSource


class YAMLConfigSource(ConfigSource):
    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._data: Dict[str, Any] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            raise ConfigError(f"config file {self.path} not found")
        self._data = yaml.safe_load(self.path.read_text()) or {}

    def defaults(self) -> dict[str, Any]:
        """The `run` section plus the audit constant as `audit_c`."""
        merged = dict(self._data.get("run", {}) or {})
        audit = self._data.get("audit", {}) or {}
        if "c" in audit:
            merged["audit_c"] = audit["c"]
        return merged

    def statistics(self) -> dict[str, Any]:
        return dict(self._data.get("statistics", {}) or {})

    def workload(self, name: str) -> dict[str, Any]:
        """A named workload spec; bare kinds such as "uniform" map to themselves."""
        named = self._data.get("workloads", {}) or {}
        if name in named:
            return dict(named[name])
        return {"kind": name}

    def campaign(self, name: str) -> dict[str, Any]:
        campaigns = self._data.get("campaigns", {}) or {}
        if name not in campaigns:
            raise ConfigError(f"unknown campaign {name!r}")
        return dict(campaigns[name])
