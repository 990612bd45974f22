"""Tool configuration: defaults < JSON file < ``VLPLAN_*`` env vars < flags."""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Mapping, Optional

from .videoplan import DEFAULT_BUDGET, DEFAULT_LEVELS

ENV_PREFIX = "VLPLAN_"


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key {key!r}: {message}")
        self.key = key


@dataclass(frozen=True)
class Config:
    budget: int = DEFAULT_BUDGET
    levels: tuple[int, ...] = DEFAULT_LEVELS
    max_seq_len: int = 16384
    group_size: int = 128
    iou_threshold: float = 0.5
    cost_a: float = 1.0
    cost_b: float = 0.0
    seed: int = 0

    def validate(self) -> "Config":
        if not self.levels or any(v <= 0 for v in self.levels):
            raise ConfigError("levels", "must be positive integers")
        if any(a <= b for a, b in zip(self.levels, self.levels[1:])):
            raise ConfigError("levels", "must be strictly decreasing")
        if self.budget < min(self.levels):
            raise ConfigError("budget", f"must be >= the lowest level {min(self.levels)}")
        if self.max_seq_len < 1:
            raise ConfigError("max_seq_len", "must be >= 1")
        if self.group_size < 1:
            raise ConfigError("group_size", "must be >= 1")
        if not 0 < self.iou_threshold <= 1:
            raise ConfigError("iou_threshold", "must lie in (0, 1]")
        for key in ("cost_a", "cost_b"):
            v = getattr(self, key)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigError(key, "must be a finite nonnegative number")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["levels"] = list(self.levels)
        return d


_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(key: str, value):
    kind = _TYPES[key]
    try:
        if kind == "tuple[int, ...]":
            if isinstance(value, str):
                value = [v for v in value.replace(",", " ").split()]
            if isinstance(value, (str, bytes)) or not hasattr(value, "__iter__"):
                raise TypeError
            return tuple(_as_int(v) for v in value)
        if kind == "int":
            return _as_int(value)
        if kind == "float":
            if isinstance(value, bool):
                raise TypeError
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError(key, f"invalid value {value!r}") from None
    raise AssertionError(kind)


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise TypeError
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError
        return int(v)
    return int(v)


def _merge(base: dict, source: Mapping, strict: bool) -> None:
    for key, value in source.items():
        if key not in _TYPES:
            if strict:
                raise ConfigError(key, "unknown key")
            continue
        base[key] = _coerce(key, value)


def load_config(
    path: Optional[str] = None,
    env: Optional[Mapping[str, str]] = None,
    overrides: Optional[Mapping] = None,
) -> Config:
    """Build a validated :class:`Config`.

    ``env`` defaults to ``os.environ``; only ``VLPLAN_<KEY>`` variables are
    read. ``overrides`` holds flag values, ``None`` entries are ignored.
    """
    values: dict = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config", "file must hold a flat JSON object")
        _merge(values, doc, strict=True)

    env = os.environ if env is None else env
    from_env = {
        k[len(ENV_PREFIX):].lower(): v for k, v in env.items() if k.startswith(ENV_PREFIX)
    }
    _merge(values, from_env, strict=False)

    if overrides:
        _merge(values, {k: v for k, v in overrides.items() if v is not None}, strict=True)

    return replace(Config(), **values).validate()
