"""Flat key=value experiment configuration."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, fields
from typing import Mapping

MODES = ("ingest", "simulate", "learn", "densest", "tridensest", "oracle", "compare", "bench")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    mode: str = "densest"
    eps: float = 0.1
    c: float = 0.6
    p: float | None = None
    q: float | None = None
    r: float | None = None
    seed: int = 0
    max_batch: int = 10**6
    input: str | None = None
    output: str | None = None
    initial_count: int | None = None
    initial_until: int | None = None
    # simulate / bench workload
    n: int = 1000
    m: int = 5000
    steps: int | None = None
    additions: int | None = None
    # learner knobs
    learn_eps: float | None = None
    learn_events: int | None = None
    support_floor: int = 5
    monitor_floor: int = 1000
    top_buckets: int = 16
    normalization: str = "clock"
    # rest-and-run
    clock: str = "time"
    oracle_every: int = 0
    kind: str = "densest"
    timings: int = 1
    format: str = "csv"

    def validate(self) -> "ExperimentConfig":
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {self.mode!r}")
        if not self.eps > 0:
            raise ConfigError("eps must be positive")
        if self.learn_eps is not None and not self.learn_eps > 0:
            raise ConfigError("learn_eps must be positive")
        if not 0 <= self.c <= 1:
            raise ConfigError("c must lie in [0, 1]")
        for name in ("p", "q", "r"):
            val = getattr(self, name)
            if val is not None and not 0 <= val <= 1:
                raise ConfigError(f"{name} must lie in [0, 1]")
        if self.max_batch < 1:
            raise ConfigError("max_batch must be at least 1")
        if self.initial_count is not None and self.initial_until is not None:
            raise ConfigError("give initial_count or initial_until, not both")
        if self.normalization not in ("clock", "literal"):
            raise ConfigError("normalization must be 'clock' or 'literal'")
        if self.clock not in ("time", "count"):
            raise ConfigError("clock must be 'time' or 'count'")
        if self.kind not in ("densest", "tridensest"):
            raise ConfigError("kind must be 'densest' or 'tridensest'")
        if self.oracle_every < 0:
            raise ConfigError("oracle_every must be nonnegative")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be 'csv' or 'json'")
        if self.n < 1 or self.m < 0:
            raise ConfigError("n must be positive and m nonnegative")
        return self

    @classmethod
    def from_mapping(cls, data: Mapping[str, str]) -> "ExperimentConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = {}
        for key, raw in data.items():
            kwargs[key] = _coerce(known[key], raw)
        return cls(**kwargs).validate()

    def with_overrides(self, data: Mapping[str, str]) -> "ExperimentConfig":
        merged = dataclasses.asdict(self)
        known = {f.name: f for f in fields(self)}
        unknown = sorted(set(data) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        for key, raw in data.items():
            merged[key] = _coerce(known[key], raw)
        return ExperimentConfig(**merged).validate()


def _coerce(f: dataclasses.Field, raw):
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    kind = str(f.type)
    if text.lower() in ("", "none", "null") and "None" in kind:
        return None
    try:
        if kind.startswith("int"):
            return int(float(text)) if "e" in text.lower() else int(text)
        if kind.startswith("float"):
            return float(text)
    except ValueError:
        raise ConfigError(f"{f.name}: cannot parse {raw!r}") from None
    return text


def parse_config_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        if "=" not in s:
            raise ConfigError(f"config line {lineno}: expected key=value")
        k, _, v = s.partition("=")
        out[k.strip()] = v.strip()
    return out


def load_config(path=None, overrides: Mapping[str, str] | None = None) -> ExperimentConfig:
    data: dict[str, str] = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            data.update(parse_config_text(fh.read()))
    data.update(overrides or {})
    return ExperimentConfig.from_mapping(data)
