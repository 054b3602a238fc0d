"""Run configuration: a JSON file with nested sections plus CLI overrides.

Unknown keys are rejected so typos fail loudly; every field has a default
documented in DEFAULTS below and in the README.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .classify import AAG, DEFAULT_SCREEN_RULES, METHODS
from .errors import ConfigError
from .evalbench import (
    DEFAULT_BW_LEVELS,
    DEFAULT_GAMMA_LEVELS,
    DEFAULT_K_LEVELS,
    DEFAULT_M_LEVELS,
    DoeDesign,
)
from .classify import HyperParams
from .ingest import DEFAULT_EXCLUDED_IDS
from .metrics import JACCARD_DIST, METRIC_KINDS
from .monotonicity import MONOTONICITY, REGULARIZATIONS, ZONE


@dataclass
class ScreeningConfig:
    bins: int = 16
    k: int = 25
    bw_par: float = 0.175
    m: int = 7
    rules: list = field(default_factory=lambda: [list(r) for r in DEFAULT_SCREEN_RULES])


@dataclass
class RunConfig:
    data_dir: str | None = None
    meta_file: str | None = None
    exclude_ids: list = field(default_factory=lambda: sorted(DEFAULT_EXCLUDED_IDS))
    max_id: int | None = None
    method: str = AAG
    metric: str = "pearson"
    regularization: str = "weighted"
    k: int = 25
    bw_par: float = 0.175
    m: int = 7
    gamma_star: float = 1.5e-11
    doe: dict = field(default_factory=dict)
    screening: ScreeningConfig = field(default_factory=ScreeningConfig)
    use_weights: bool = False
    screen: bool = False
    out_dir: str = "out"
    format: str = "csv"
    workers: int = 1
    seed: int = 1


_TOP_KEYS = set(RunConfig.__dataclass_fields__)
_SCREENING_KEYS = set(ScreeningConfig.__dataclass_fields__)
_DOE_KEYS = {"k", "bw_par", "m", "gamma_star", "methods"}


def load_config(path) -> RunConfig:
    """Parse a JSON config file, rejecting unknown keys at every level."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config_from_dict(raw, source=str(path))


def config_from_dict(raw: dict, source: str = "config") -> RunConfig:
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"{source}: unknown keys {sorted(unknown)}")
    config = RunConfig()
    for key, value in raw.items():
        if key == "screening":
            if not isinstance(value, dict):
                raise ConfigError(f"{source}: screening must be an object")
            bad = set(value) - _SCREENING_KEYS
            if bad:
                raise ConfigError(f"{source}: unknown screening keys {sorted(bad)}")
            for sub, sval in value.items():
                setattr(config.screening, sub, sval)
        elif key == "doe":
            if not isinstance(value, dict):
                raise ConfigError(f"{source}: doe must be an object")
            bad = set(value) - _DOE_KEYS
            if bad:
                raise ConfigError(f"{source}: unknown doe keys {sorted(bad)}")
            config.doe = value
        else:
            setattr(config, key, value)
    validate_config(config, source=source)
    return config


def validate_config(config: RunConfig, source: str = "config") -> None:
    if config.method not in METHODS:
        raise ConfigError(f"{source}: unknown method {config.method!r}")
    if config.metric not in METRIC_KINDS:
        raise ConfigError(f"{source}: unknown metric {config.metric!r}")
    if config.regularization not in REGULARIZATIONS:
        raise ConfigError(f"{source}: unknown regularization {config.regularization!r}")
    if config.format not in ("csv", "json"):
        raise ConfigError(f"{source}: format must be 'csv' or 'json'")
    if config.workers < 1:
        raise ConfigError(f"{source}: workers must be >= 1")
    for rule in config.screening.rules:
        if len(rule) != 3:
            raise ConfigError(f"{source}: screening rule must be [feature, op, threshold]")


def _expand_levels(spec, name: str, integer: bool = False):
    """A level list is either explicit or a {min, max, count} triple expanded
    linearly."""
    if isinstance(spec, (list, tuple)):
        values = list(spec)
    elif isinstance(spec, dict):
        missing = {"min", "max", "count"} - set(spec)
        extra = set(spec) - {"min", "max", "count"}
        if missing or extra:
            raise ConfigError(f"doe.{name}: triple must have exactly min/max/count keys")
        values = np.linspace(spec["min"], spec["max"], int(spec["count"])).tolist()
    else:
        raise ConfigError(f"doe.{name}: expected a list or a min/max/count object")
    if not values:
        raise ConfigError(f"doe.{name}: empty level list")
    if integer:
        out = []
        for v in values:
            if round(v) != round(v, 6):
                raise ConfigError(f"doe.{name}: level {v} is not an integer")
            out.append(int(round(v)))
        return tuple(out)
    return tuple(float(v) for v in values)


def make_design(config: RunConfig) -> DoeDesign:
    """DoeDesign from the config's doe section, defaulting each factor."""
    doe = config.doe or {}
    k_levels = _expand_levels(doe["k"], "k", integer=True) if "k" in doe else DEFAULT_K_LEVELS
    bw_levels = _expand_levels(doe["bw_par"], "bw_par") if "bw_par" in doe else DEFAULT_BW_LEVELS
    m_levels = _expand_levels(doe["m"], "m", integer=True) if "m" in doe else DEFAULT_M_LEVELS
    gamma_levels = (
        _expand_levels(doe["gamma_star"], "gamma_star")
        if "gamma_star" in doe
        else DEFAULT_GAMMA_LEVELS
    )
    if "methods" in doe:
        methods = []
        for entry in doe["methods"]:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ConfigError("doe.methods entries must be [method, variant] pairs")
            methods.append((entry[0], entry[1]))
        methods = tuple(methods)
    else:
        variant = config.metric if config.method == AAG else config.regularization
        methods = ((config.method, variant),)
    design = DoeDesign(
        k_levels=k_levels,
        bw_levels=bw_levels,
        m_levels=m_levels,
        gamma_levels=gamma_levels,
        methods=methods,
    )
    design.validate()
    return design


def make_hyperparams(config: RunConfig) -> HyperParams:
    """HyperParams for single-run commands; inapplicable fields stay unset."""
    if config.method == AAG:
        m = config.m if config.metric == JACCARD_DIST else None
        return HyperParams(k=config.k, bw_par=config.bw_par, metric=config.metric, m=m)
    gamma = config.gamma_star if config.regularization == ZONE else None
    return HyperParams(
        k=config.k,
        bw_par=config.bw_par,
        regularization=config.regularization,
        gamma_star=gamma,
    )


def effective_dict(config: RunConfig) -> dict:
    """JSON-ready view of the full effective configuration."""
    return {
        "data_dir": config.data_dir,
        "meta_file": config.meta_file,
        "exclude_ids": list(config.exclude_ids),
        "max_id": config.max_id,
        "method": config.method,
        "metric": config.metric,
        "regularization": config.regularization,
        "k": config.k,
        "bw_par": config.bw_par,
        "m": config.m,
        "gamma_star": config.gamma_star,
        "doe": config.doe,
        "screening": {
            "bins": config.screening.bins,
            "k": config.screening.k,
            "bw_par": config.screening.bw_par,
            "m": config.screening.m,
            "rules": [list(r) for r in config.screening.rules],
        },
        "use_weights": config.use_weights,
        "screen": config.screen,
        "out_dir": config.out_dir,
        "format": config.format,
        "workers": config.workers,
        "seed": config.seed,
    }


def effective_json(config: RunConfig) -> str:
    return json.dumps(effective_dict(config), sort_keys=True, separators=(",", ":"))
