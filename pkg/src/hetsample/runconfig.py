"""The single JSON run-configuration document.

One file carries everything a run needs: file paths, the importance
weights, sampler and baseline knobs, the method name and an optional sweep
grid.  Weight dictionaries are keyed by type labels so configs stay
readable; they are resolved against the graph schema at run time.

Example:

    {
      "paths": {"nodes": "nodes.tsv", "edges": "edges.tsv",
                "schema": "schema.json", "out_dir": "out"},
      "method": "heterosample",
      "epsilon": 1e-9,
      "importance": {
        "alpha": {"A": 0.5, "P": 0.3, "C": 0.2},
        "edge_weights": [["A", "P", 0.3], ["P", "C", 0.2]],
        "meta_paths": ["A-P-A", "A-P-C-P-A"],
        "beta": [0.6, 0.4]
      },
      "sampler": {"ratio": 0.3, "delta": 10, "max_len": 4, "k_mp": 3,
                  "walks_per_schema": 2, "seed": 0, "mode": "deterministic"},
      "baseline": {"pagerank_damping": 0.85, "pagerank_iters": 50,
                   "restart": 0.15, "burn_prob": 0.4},
      "sweep": {"methods": ["heterosample", "irv"],
                "ratios": [0.1, 0.3], "seeds": [0, 1]},
      "synthetic": {"node_counts": {"A": 100},
                    "edge_types": [{"label": "AA", "endpoints": ["A", "A"],
                                    "count": 300}],
                    "skew": 1.0, "seed": 7}
    }

Off-diagonal edge_weights entries fill both (a, b) and (b, a); the matrix
sum over all entries must be 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .baselines import BASELINES, BaselineParams
from .errors import ConfigError, ParameterError
from .graph import SchemaGraph
from .metapath import MetaPathSchema, parse_schema
from .sampler import ImportanceConfig, SamplerParams

KNOWN_METHODS = ("heterosample",) + tuple(BASELINES)

SAMPLER_KEYS = {
    "ratio",
    "k",
    "delta",
    "max_len",
    "k_mp",
    "walks_per_schema",
    "seed",
    "mode",
    "disable_ts",
    "disable_bne",
    "disable_mgne",
    "disable_mp",
}
BASELINE_KEYS = {"ratio", "seed", "pagerank_damping", "pagerank_iters", "restart", "burn_prob"}


@dataclass
class RunConfig:
    """Parsed but unresolved configuration; weights bind to a schema later."""

    paths: dict[str, str] = field(default_factory=dict)
    method: str = "heterosample"
    epsilon: float = 1e-9
    importance: dict = field(default_factory=dict)
    sampler: dict = field(default_factory=dict)
    baseline: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    synthetic: dict | None = None

    def out_dir(self) -> str:
        return self.paths.get("out_dir", ".")


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from None
    return parse_config(doc, source=path)


def parse_config(doc: dict, source: str = "<config>") -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: config must be a JSON object")
    unknown = set(doc) - {
        "paths",
        "method",
        "epsilon",
        "importance",
        "sampler",
        "baseline",
        "sweep",
        "synthetic",
    }
    if unknown:
        raise ConfigError(f"{source}: unknown top-level keys {sorted(unknown)}")
    cfg = RunConfig(
        paths=dict(doc.get("paths", {})),
        method=doc.get("method", "heterosample"),
        epsilon=float(doc.get("epsilon", 1e-9)),
        importance=dict(doc.get("importance", {})),
        sampler=dict(doc.get("sampler", {})),
        baseline=dict(doc.get("baseline", {})),
        sweep=dict(doc.get("sweep", {})),
        synthetic=doc.get("synthetic"),
    )
    if cfg.method not in KNOWN_METHODS:
        raise ConfigError(f"{source}: field 'method': unknown method {cfg.method!r}")
    if not 0.0 < cfg.epsilon < 1.0:
        raise ConfigError(f"{source}: field 'epsilon' must be in (0, 1)")
    bad = set(cfg.sampler) - SAMPLER_KEYS
    if bad:
        raise ConfigError(f"{source}: field 'sampler': unknown keys {sorted(bad)}")
    bad = set(cfg.baseline) - BASELINE_KEYS
    if bad:
        raise ConfigError(f"{source}: field 'baseline': unknown keys {sorted(bad)}")
    for m in cfg.sweep.get("methods", []):
        if m not in KNOWN_METHODS:
            raise ConfigError(f"{source}: field 'sweep.methods': unknown method {m!r}")
    for r in cfg.sweep.get("ratios", []):
        if not 0.0 < float(r) <= 1.0:
            raise ConfigError(f"{source}: field 'sweep.ratios': ratio {r} outside (0, 1]")
    return cfg


def resolve_importance(importance: dict, schema: SchemaGraph) -> ImportanceConfig:
    """Bind label-keyed weight dictionaries to a concrete schema."""
    m = schema.num_node_types
    alpha_doc = importance.get("alpha")
    if alpha_doc is None:
        raise ConfigError("field 'importance.alpha' is required")
    alpha = np.zeros(m)
    for label in schema.node_types:
        if label not in alpha_doc:
            raise ConfigError(f"field 'importance.alpha.{label}' is missing")
        alpha[schema.type_id(label)] = float(alpha_doc[label])
    extra = set(alpha_doc) - set(schema.node_types)
    if extra:
        raise ConfigError(f"field 'importance.alpha': unknown type labels {sorted(extra)}")

    w_doc = importance.get("edge_weights")
    if w_doc is None:
        raise ConfigError("field 'importance.edge_weights' is required")
    W = np.zeros((m, m))
    for entry in w_doc:
        try:
            a, b, w = entry
        except (TypeError, ValueError):
            raise ConfigError(
                "field 'importance.edge_weights' entries must be [type_a, type_b, weight]"
            ) from None
        ia, ib = schema.type_id(a), schema.type_id(b)
        W[ia, ib] = float(w)
        W[ib, ia] = float(w)

    mp_doc = importance.get("meta_paths")
    if not mp_doc:
        raise ConfigError("field 'importance.meta_paths' is required and must be non-empty")
    paths = [parse_schema(text, schema) for text in mp_doc]

    beta_doc = importance.get("beta")
    if beta_doc is None:
        beta = np.full(len(paths), 1.0 / len(paths))
    else:
        beta = np.asarray([float(b) for b in beta_doc])

    config = ImportanceConfig(alpha=alpha, W=W, paths=paths, beta=beta)
    config.validate(schema)
    return config


def resolve_sampler_params(sampler_doc: dict, ratio: float | None = None, seed: int | None = None) -> SamplerParams:
    doc = dict(sampler_doc)
    if ratio is not None:
        doc["ratio"] = ratio
    if seed is not None:
        doc["seed"] = seed
    if "ratio" not in doc:
        raise ConfigError("field 'sampler.ratio' is required")
    try:
        return SamplerParams(**doc)
    except ParameterError as exc:
        raise ConfigError(f"field 'sampler': {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"field 'sampler': {exc}") from None


def resolve_baseline_params(baseline_doc: dict, ratio: float | None = None, seed: int | None = None) -> BaselineParams:
    doc = dict(baseline_doc)
    if ratio is not None:
        doc["ratio"] = ratio
    if seed is not None:
        doc["seed"] = seed
    if "ratio" not in doc:
        raise ConfigError("field 'baseline.ratio' (or sampler.ratio / --ratio) is required")
    try:
        return BaselineParams(**doc)
    except ParameterError as exc:
        raise ConfigError(f"field 'baseline': {exc}") from None
    except TypeError as exc:
        raise ConfigError(f"field 'baseline': {exc}") from None


def meta_paths_from_importance(importance: dict, schema: SchemaGraph) -> list[MetaPathSchema]:
    mp_doc = importance.get("meta_paths")
    if not mp_doc:
        raise ConfigError("field 'importance.meta_paths' is required and must be non-empty")
    return [parse_schema(text, schema) for text in mp_doc]
