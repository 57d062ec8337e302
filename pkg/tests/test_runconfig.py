import json

import numpy as np
import pytest

from hetsample import ConfigError, SchemaGraph
from hetsample.runconfig import (
    load_config,
    parse_config,
    resolve_baseline_params,
    resolve_importance,
    resolve_sampler_params,
)


def schema():
    return SchemaGraph(("A", "P"), (("AP", "A", "P"),))


def importance_doc():
    return {
        "alpha": {"A": 0.6, "P": 0.4},
        "edge_weights": [["A", "P", 0.5]],
        "meta_paths": ["A-P-A"],
        "beta": [1.0],
    }


def test_parse_minimal_defaults():
    cfg = parse_config({})
    assert cfg.method == "heterosample"
    assert cfg.epsilon == 1e-9


def test_parse_rejects_unknown_top_level():
    with pytest.raises(ConfigError, match="unknown top-level"):
        parse_config({"wat": 1})


def test_parse_rejects_unknown_method():
    with pytest.raises(ConfigError, match="method"):
        parse_config({"method": "bogus"})


def test_parse_rejects_unknown_sampler_key():
    with pytest.raises(ConfigError, match="sampler"):
        parse_config({"sampler": {"bogus": 1}})


def test_parse_rejects_bad_sweep_ratio():
    with pytest.raises(ConfigError, match="sweep.ratios"):
        parse_config({"sweep": {"ratios": [0.5, 1.5]}})


def test_load_config_round_trip(tmp_path):
    doc = {"method": "irv", "sampler": {"ratio": 0.25}}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    cfg = load_config(str(path))
    assert cfg.method == "irv"
    assert cfg.sampler["ratio"] == 0.25


def test_load_config_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(str(path))


def test_resolve_importance_valid():
    cfg = resolve_importance(importance_doc(), schema())
    assert np.allclose(cfg.alpha, [0.6, 0.4])
    assert cfg.W[0, 1] == 0.5
    assert cfg.W[1, 0] == 0.5
    assert len(cfg.paths) == 1


def test_resolve_importance_missing_alpha_key_names_field():
    doc = importance_doc()
    del doc["alpha"]["P"]
    with pytest.raises(ConfigError, match="importance.alpha.P"):
        resolve_importance(doc, schema())


def test_resolve_importance_unknown_alpha_label():
    doc = importance_doc()
    doc["alpha"]["X"] = 0.1
    with pytest.raises(ConfigError, match="unknown type labels"):
        resolve_importance(doc, schema())


def test_resolve_importance_bad_sum():
    doc = importance_doc()
    doc["alpha"] = {"A": 0.6, "P": 0.6}
    with pytest.raises(ConfigError, match="sum to 1"):
        resolve_importance(doc, schema())


def test_resolve_importance_w_sum_counts_symmetry():
    # off-diagonal 0.5 contributes twice: matrix sum 1.0 exactly
    cfg = resolve_importance(importance_doc(), schema())
    assert abs(cfg.W.sum() - 1.0) < 1e-12


def test_resolve_importance_default_beta_uniform():
    doc = importance_doc()
    del doc["beta"]
    doc["meta_paths"] = ["A-P-A", "A-P"]
    # uniform beta must still validate: W sums to 1, alpha ok
    cfg = resolve_importance(doc, schema())
    assert np.allclose(cfg.beta, [0.5, 0.5])


def test_resolve_importance_requires_meta_paths():
    doc = importance_doc()
    doc["meta_paths"] = []
    with pytest.raises(ConfigError, match="meta_paths"):
        resolve_importance(doc, schema())


def test_resolve_sampler_params_overrides():
    params = resolve_sampler_params({"ratio": 0.5, "seed": 3}, ratio=0.2, seed=9)
    assert params.ratio == 0.2
    assert params.seed == 9


def test_resolve_sampler_params_requires_ratio():
    with pytest.raises(ConfigError, match="ratio"):
        resolve_sampler_params({})


def test_resolve_sampler_params_rejects_bad_values():
    with pytest.raises(ConfigError):
        resolve_sampler_params({"ratio": 2.0})


def test_resolve_baseline_params():
    params = resolve_baseline_params({"restart": 0.5}, ratio=0.3, seed=1)
    assert params.ratio == 0.3
    assert params.restart == 0.5
    with pytest.raises(ConfigError):
        resolve_baseline_params({"burn_prob": 2.0}, ratio=0.3)
