"""Pipeline configuration: defaults, YAML file, and ``--set`` overrides."""

from __future__ import annotations

import copy
import math
from pathlib import Path

import yaml

from ..exceptions import ConfigError
from ..rng import DEFAULT_SEED

DL_FRACTIONS = [0.7225, 0.1275, 0.15]

DEFAULTS = {
    "seed": DEFAULT_SEED,
    "folds": 5,
    "threads": None,  # None: SENTIMEN_THREADS or 1
    "subsample": None,
    "paths": {
        "input": None,
        "output_dir": "out",
        "slang": None,
        "stopwords": None,
        "roots": None,
        "rules": None,
    },
    "preprocess": {"slang": True, "stopwords": True, "stemming": True},
    "tfidf": {"max_features": 3000},
    "smote": {"enabled": True, "k": 5},
    "classifiers": ["tree", "svm", "mnb"],
    "mnb": {"alpha": 1.0},
    "svm": {"C": 1.0},
    "tree": {"max_depth": None, "min_samples_leaf": 1, "min_samples_split": 2},
    "tune": {
        "n_iter": 50,
        "space": {
            "max_depth": [8, 12, 16, 24, 32, None],
            "min_samples_leaf": [1, 2, 4, 8],
            "min_samples_split": [2, 4, 8, 16],
        },
    },
    "neural": {
        "learning_rate": 1e-3,
        "batch_size": 64,
        "max_epochs": 10,
        "patience": 3,
        "dropout": 0.5,
        "embed_dim": 128,
        "hidden": 128,
        "layers": 2,
        "min_freq": 2,
        "length_percentile": 95,
        "max_len": None,
    },
    "split": {"fractions": DL_FRACTIONS, "min_per_class": 1},
}

# keys whose values are free-form mappings (not checked against DEFAULTS)
_OPEN = {("tune", "space")}
_CLASSIFIERS = {"tree", "svm", "mnb"}


def _merge(base, override, path=()):
    for key, value in override.items():
        where = ".".join((*path, str(key)))
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and (*path, key) not in _OPEN:
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be a mapping")
            _merge(base[key], value, (*path, key))
        else:
            base[key] = value


def parse_override(item):
    """``a.b=value`` -> nested dict; the value is parsed as YAML."""
    if "=" not in item:
        raise ConfigError(f"override {item!r} must look like key.path=value")
    key, raw = item.split("=", 1)
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigError(f"override {item!r} has an empty key")
    out = yaml.safe_load(raw)
    for p in reversed(parts):
        out = {p: out}
    return out


def load_config(path=None, overrides=()):
    """Defaults <- YAML file <- overrides (each a nested dict)."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"{p}: config file not found")
        try:
            data = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{p}: invalid YAML ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{p}: top level must be a mapping")
        _merge(cfg, data)
    for o in overrides:
        _merge(cfg, o)
    validate(cfg)
    return cfg


def _positive_int(cfg, dotted, allow_none=False):
    value = _get(cfg, dotted)
    if value is None and allow_none:
        return
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"config key {dotted!r} must be a positive integer, got {value!r}")


def _positive_real(cfg, dotted):
    value = _get(cfg, dotted)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
        raise ConfigError(f"config key {dotted!r} must be a positive number, got {value!r}")


def _get(cfg, dotted):
    node = cfg
    for part in dotted.split("."):
        node = node[part]
    return node


def validate(cfg):
    seed = cfg["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"config key 'seed' must be a non-negative integer, got {seed!r}")
    for key in ("folds", "tfidf.max_features", "smote.k", "tune.n_iter", "tree.min_samples_leaf",
                "neural.batch_size", "neural.max_epochs", "neural.patience", "neural.embed_dim",
                "neural.hidden", "neural.layers", "neural.min_freq"):
        _positive_int(cfg, key)
    for key in ("threads", "subsample", "tree.max_depth", "neural.max_len"):
        _positive_int(cfg, key, allow_none=True)
    if cfg["folds"] < 2:
        raise ConfigError("config key 'folds' must be at least 2")
    if not isinstance(cfg["tree"]["min_samples_split"], int) or cfg["tree"]["min_samples_split"] < 2:
        raise ConfigError("config key 'tree.min_samples_split' must be an integer >= 2")
    for key in ("mnb.alpha", "svm.C", "neural.learning_rate", "neural.length_percentile"):
        _positive_real(cfg, key)
    if not 0 <= cfg["neural"]["dropout"] < 1:
        raise ConfigError("config key 'neural.dropout' must be in [0, 1)")
    if cfg["neural"]["length_percentile"] > 100:
        raise ConfigError("config key 'neural.length_percentile' must be <= 100")
    clfs = cfg["classifiers"]
    if isinstance(clfs, str):
        clfs = cfg["classifiers"] = [clfs]
    bad = [c for c in clfs if c not in _CLASSIFIERS]
    if not clfs or bad:
        raise ConfigError(f"config key 'classifiers' must list some of {sorted(_CLASSIFIERS)}, got {clfs!r}")
    fr = cfg["split"]["fractions"]
    if not isinstance(fr, list) or len(fr) != 3:
        raise ConfigError("config key 'split.fractions' must be a list of three numbers")
    space = cfg["tune"]["space"]
    if not isinstance(space, dict) or not space:
        raise ConfigError("config key 'tune.space' must be a non-empty mapping")
    for name, values in space.items():
        if name not in DEFAULTS["tune"]["space"]:
            raise ConfigError(f"unknown config key 'tune.space.{name}'")
        if not isinstance(values, list) or not values:
            raise ConfigError(f"config key 'tune.space.{name}' must be a non-empty list")
    for key in ("slang", "stopwords", "roots", "rules"):
        p = cfg["paths"][key]
        if p is not None and not Path(p).exists():
            raise ConfigError(f"config key 'paths.{key}': {p} does not exist")
    return cfg
