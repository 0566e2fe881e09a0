from __future__ import annotations

import pytest

from src.adapters.config.yaml_config import YAMLConfigSource
from src.core.errors import ConfigError
from src.sim.config import BUILTIN_DEFAULTS, build_run_config, env_overrides, merge_layers


def test_defaults_validate():
    config = build_run_config({})
    assert config["dimension"] == BUILTIN_DEFAULTS["dimension"]
    assert config["workload"] == {"kind": "uniform"}
    assert set(config["checks"]) == {"bijection", "invariant_I", "contiguity", "timestamps", "adjacency"}


@pytest.mark.parametrize(
    "bad",
    [
        {"dimension": 1},
        {"dimension": "five"},
        {"m": 0},
        {"algorithm": "splay"},
        {"workload": {"kind": "bursty"}},
        {"workload": {"kind": "repeating"}},
        {"workload": {"kind": "zipf", "s": 0}},
        {"workload": {"kind": "trace"}},
        {"workload": {"kind": "adversarial", "c": -1}},
        {"algorithm": "dyhypes_s", "dimension": 3, "server": 8},
        {"audit_c": 0},
        {"checks": ["bijection", "vibes"]},
        {"sample_every": -1},
    ],
)
def test_invalid_configs_fail_before_any_request(bad):
    with pytest.raises(ConfigError):
        build_run_config(bad)


def test_adversarial_base_is_validated_too():
    config = build_run_config({"workload": {"kind": "adversarial"}})
    assert config["workload"]["base"] == {"kind": "uniform"}
    with pytest.raises(ConfigError):
        build_run_config({"workload": {"kind": "adversarial", "base": {"kind": "adversarial", "base": {"kind": "?"}}}})


def test_environment_overrides():
    assert env_overrides({"HYPERSIM_SEED": "9", "HYPERSIM_AUDIT_C": "2.5"}) == {"seed": 9, "audit_c": 2.5}
    assert env_overrides({}) == {}
    with pytest.raises(ConfigError):
        env_overrides({"HYPERSIM_SEED": "nine"})


def test_later_layers_win_and_none_never_overrides():
    merged = merge_layers({"seed": 1, "m": 5}, {"seed": 2, "m": None})
    assert (merged["seed"], merged["m"]) == (2, 5)


def test_yaml_source_reads_the_shipped_config(repo_config_path):
    source = YAMLConfigSource(repo_config_path)
    defaults = source.defaults()
    assert defaults["audit_c"] == 4
    assert build_run_config(defaults)["dimension"] == 5
    assert source.workload("zipf") == {"kind": "zipf", "s": 1.2}
    assert source.workload("uniform") == {"kind": "uniform"}
    assert source.statistics()["expectation_slack"] == 0.10
    assert source.campaign("ss_thm")["algorithm"] == "dyhypes_s"
    with pytest.raises(ConfigError):
        source.campaign("nope")


def test_yaml_source_needs_the_file(tmp_path):
    with pytest.raises(ConfigError):
        YAMLConfigSource(tmp_path / "missing.yaml")
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    assert YAMLConfigSource(empty).defaults() == {}
