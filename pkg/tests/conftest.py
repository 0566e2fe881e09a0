from __future__ import annotations
"""Shared fixtures: small cubes, fresh tables, recording telemetry."""
from pathlib import Path

import pytest

from src.adapters.telemetry.recording_sink import RecordingSink
from src.hypercube.network import NetworkState
from src.nodestate.state import GroupTable
from src.sim.config import build_run_config

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def net3() -> NetworkState:
    return NetworkState.identity(3)


@pytest.fixture
def table3(net3: NetworkState) -> GroupTable:
    return GroupTable.initial(net3)


@pytest.fixture
def recording() -> RecordingSink:
    return RecordingSink()


@pytest.fixture
def make_config():
    """Factory for validated run configs with small defaults."""

    def _make(**overrides):
        base = {"dimension": 3, "m": 20, "seed": 1, "sample_every": 0}
        base.update(overrides)
        return build_run_config(base)

    return _make


@pytest.fixture
def repo_config_path() -> Path:
    return REPO_ROOT / "config" / "simulation.yaml"
