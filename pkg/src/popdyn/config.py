"""Run configuration: JSON file plus flag overrides, validated into model objects."""
from __future__ import annotations

import copy
import datetime as dt
import json
from typing import Any, Mapping, Optional

from .model import ExactBayes, LinearF, ModelParams, SignalModel
from .simulator import MarketConfig


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field {field!r}: {message}")


# the reference market: large enough that both subsets detect the interaction
DEFAULTS: dict[str, Any] = {
    "num_traders": 2000,
    "fraction_good": 0.5,
    "population_size": 200,
    "alpha": 1.0,
    "f_spec": {"kind": "linear", "c0": 0.8, "c1": 0.05, "clamp_min": 0.0, "clamp_max": 10.0},
    "signal": {"mu_good": 3.0, "mu_bad": -3.0, "sigma": 10.0},
    "horizon": 100,
    "initial_popularity": 0,
    "date_start": "2011-09-09",
    "activity_rate": 1.0,
    "window": 5,
    "condition": "both",
    "bin_mode": "both",
    "cutoff": 100,
    "seed": 20111209,
}

_CHOICES = {
    "condition": ("zero-one", "not-top100", "both"),
    "bin_mode": ("left", "right", "both"),
}


def load_config(path: Optional[str]) -> dict[str, Any]:
    """Read a JSON config, or the ``config`` block of a run manifest."""
    cfg = copy.deepcopy(DEFAULTS)
    if path is None:
        return cfg
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ConfigError("<file>", f"{path}: top level must be an object")
    if "config" in data and "outputs" in data:
        data = data["config"]
    return merge(cfg, data)


def merge(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    out = copy.deepcopy(dict(base))
    for key, value in overrides.items():
        if key not in DEFAULTS and key != "input":
            raise ConfigError(key, "unknown field")
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            if key == "f_spec" and value.get("kind", out[key].get("kind")) != out[key].get("kind"):
                out[key] = dict(value)
            else:
                out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def _get(cfg, key, kind):
    value = cfg[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        value = float(value)
    return value


def validate(cfg: Mapping[str, Any]) -> None:
    for key, choices in _CHOICES.items():
        if cfg[key] not in choices:
            raise ConfigError(key, f"expected one of {choices}, got {cfg[key]!r}")
    if _get(cfg, "window", int) < 1:
        raise ConfigError("window", "must be >= 1")
    if _get(cfg, "cutoff", int) < 1:
        raise ConfigError("cutoff", "must be >= 1")


def _build(field, factory, **kwargs):
    try:
        return factory(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(field, str(exc)) from None


def market_config(cfg: Mapping[str, Any]) -> MarketConfig:
    validate(cfg)
    fs = cfg["f_spec"]
    kind = fs.get("kind")
    if kind == "linear":
        unknown = set(fs) - {"kind", "c0", "c1", "clamp_min", "clamp_max"}
        if unknown:
            raise ConfigError("f_spec", f"unknown keys {sorted(unknown)}")
        f_spec = _build("f_spec", LinearF, **{k: float(v) for k, v in fs.items() if k != "kind"})
    elif kind == "exact_bayes":
        f_spec = ExactBayes()
    else:
        raise ConfigError("f_spec", f"kind must be 'linear' or 'exact_bayes', got {kind!r}")
    sig = cfg["signal"]
    signal = _build("signal", SignalModel, **{k: float(v) for k, v in sig.items()})

    seed = _get(cfg, "seed", int)
    if not 0 <= seed < 2**64:
        raise ConfigError("seed", "must be a 64-bit unsigned integer")
    num_traders = _get(cfg, "num_traders", int)
    if num_traders < 1:
        raise ConfigError("num_traders", "must be >= 1")
    params = _build(
        "params",
        ModelParams,
        population_size=_get(cfg, "population_size", int),
        alpha=_get(cfg, "alpha", float),
        f_spec=f_spec,
        signal_model=signal,
        horizon=_get(cfg, "horizon", int),
        initial_popularity=_get(cfg, "initial_popularity", int),
        seed=seed,
    )
    try:
        start = dt.date.fromisoformat(cfg["date_start"])
    except (TypeError, ValueError):
        raise ConfigError("date_start", f"expected YYYY-MM-DD, got {cfg['date_start']!r}") from None
    return _build(
        "market",
        MarketConfig,
        num_traders=num_traders,
        fraction_good=_get(cfg, "fraction_good", float),
        params=params,
        date_start=start,
        master_seed=seed,
        window_len=_get(cfg, "window", int),
        activity_rate=_get(cfg, "activity_rate", float),
    )
