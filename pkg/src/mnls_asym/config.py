"""Experiment configuration: a single JSON document, unknown keys rejected."""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .params import ModelParams

FAMILIES = ("sech", "gaussian", "file", "zero")


@dataclass
class InitialData:
    family: str = "sech"
    amplitude: float = 0.8
    chirp: float = 0.0
    path: str | None = None

    def validate(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"initial.family must be one of {FAMILIES}")
        if self.family == "file" and not self.path:
            raise ConfigError("initial.path is required for family 'file'")
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise ConfigError("initial.amplitude must be finite and >= 0")


@dataclass
class Schedule:
    """Geometric times ``t_min * (t_max/t_min)^(k/(n-1))``, rounded to the PDE step."""

    t_min: float = 20.0
    t_max: float = 200.0
    n: int = 13

    def validate(self, floor: float):
        if self.t_min < floor:
            raise ConfigError(f"schedule.t_min = {self.t_min} is below the validity floor {floor}")
        if not (self.t_max > self.t_min) or self.n < 3:
            raise ConfigError("schedule needs t_max > t_min and n >= 3")

    def times(self, dt: float) -> list[float]:
        raw = np.geomspace(self.t_min, self.t_max, self.n)
        return [round(float(t) / dt) * dt for t in raw]


@dataclass
class ScatteringKnobs:
    L: float = 30.0
    dx: float = 0.005
    lambda_half_width: float = 3.0
    lambda_spacing: float = 0.02
    refine_levels: int = 2

    def validate(self):
        if self.L <= 0 or self.dx <= 0 or self.dx >= self.L:
            raise ConfigError("scattering.L and scattering.dx must be positive with dx < L")
        if self.lambda_half_width <= 0 or self.lambda_spacing <= 0:
            raise ConfigError("lambda grid knobs must be positive")


@dataclass
class PDEKnobs:
    dt: float = 0.02
    half_length: float = 6000.0
    grid_size: int = 131072

    def validate(self):
        n = self.grid_size
        if n < 16 or n & (n - 1):
            raise ConfigError("pde.grid_size must be a power of two >= 16")
        if self.dt <= 0 or self.half_length <= 0:
            raise ConfigError("pde.dt and pde.half_length must be positive")


@dataclass
class ExperimentConfig:
    a: float = 1.0
    b: float = 0.5
    initial: InitialData = field(default_factory=InitialData)
    rays: list = field(default_factory=lambda: [-0.1, 0.75])
    schedule: Schedule = field(default_factory=Schedule)
    fit_exclude_fraction: float = 0.2
    validity_floor: float = 10.0
    scattering: ScatteringKnobs = field(default_factory=ScatteringKnobs)
    pde: PDEKnobs = field(default_factory=PDEKnobs)
    variant: str = "gauge"
    output_dir: str = "out"
    seed: int = 0

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.a, self.b)

    def validate(self) -> "ExperimentConfig":
        p = self.params
        if p.a <= 0:
            raise ConfigError("only a > 0 is supported by the comparison pipeline")
        self.initial.validate()
        self.schedule.validate(self.validity_floor)
        self.scattering.validate()
        self.pde.validate()
        if self.variant not in ("gauge", "literal"):
            raise ConfigError("variant must be 'gauge' or 'literal'")
        if not (0 <= self.fit_exclude_fraction < 1):
            raise ConfigError("fit_exclude_fraction must lie in [0, 1)")
        if not self.rays:
            raise ConfigError("rays must be a nonempty list")
        for z0 in self.rays:
            if p.b**2 + p.a * float(z0) < 0:
                raise ConfigError(f"ray z0 = {z0} has b^2 + a z0 < 0 (no real stationary preimage)")
        return self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_NESTED = {"initial": InitialData, "schedule": Schedule, "scattering": ScatteringKnobs, "pde": PDEKnobs}


def _build(cls, data: dict, where: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be a JSON object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    kwargs = {}
    for k, v in data.items():
        if cls is ExperimentConfig and k in _NESTED:
            kwargs[k] = _build(_NESTED[k], v, k)
        else:
            kwargs[k] = v
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def config_from_dict(data: dict) -> ExperimentConfig:
    cfg = _build(ExperimentConfig, data, "config")
    try:
        cfg.a, cfg.b = float(cfg.a), float(cfg.b)
        cfg.rays = [float(z) for z in cfg.rays]
        cfg.pde.grid_size = int(cfg.pde.grid_size)
        cfg.schedule.n = int(cfg.schedule.n)
        cfg.seed = int(cfg.seed)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value type: {exc}") from exc
    return cfg.validate()


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data)
