"""Experiment configuration: physical parameters, squeeze patterns, samplers."""
from __future__ import annotations

import dataclasses
import numbers
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError
from .gaussian import SqueezeSpec
from .interferometer import SEGMENT_ORDERS

PATTERN_KINDS = ("vacuum", "uniform", "alternating", "alternating-swapped")
SAMPLER_KINDS = ("none", "uniform")
TMSV_CONVENTIONS = ("appendix", "charfn")

DEFAULT_XI = 1.0
DEFAULT_ETA = 9 * np.pi / 20
DEFAULT_STEPS = 100
DEFAULT_SEED = 20200312


def _is_real(v) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _is_int(v) -> bool:
    return _is_real(v) and float(v).is_integer()


@dataclass(frozen=True)
class SqueezePattern:
    """Rule assigning a squeezed-vacuum input to every mode beyond S and M1.

    Positions are 0-based global mode indices (S is 0, M1 is 1).
    ``alternating`` uses angle 0 on even 0-based positions (odd 1-based
    ones) and ``pi`` on the others; ``alternating-swapped`` is the opposite
    parity. ``uniform`` squeezes every mode by ``r`` along ``phi``.
    """

    kind: str = "vacuum"
    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.kind not in PATTERN_KINDS:
            raise ConfigError(f"unknown squeeze pattern {self.kind!r}; expected one of {PATTERN_KINDS}",
                              field="kind")
        for name in ("r", "phi"):
            if not _is_real(getattr(self, name)):
                raise ConfigError(f"squeeze.{name} must be a real number", field=name)
        if not self.r >= 0:
            raise ConfigError(f"squeeze.r must be >= 0, got {self.r}", field="r")

    def spec_for(self, position: int) -> SqueezeSpec:
        if self.kind == "vacuum":
            return SqueezeSpec(0.0, 0.0)
        if self.kind == "uniform":
            return SqueezeSpec(self.r, self.phi)
        even = position % 2 == 0
        if self.kind == "alternating-swapped":
            even = not even
        return SqueezeSpec(self.r, 0.0 if even else np.pi)

    @property
    def uniform_strength(self) -> float:
        return 0.0 if self.kind == "vacuum" else self.r


@dataclass(frozen=True)
class SamplerSpec:
    """Static random values drawn once per run, uniformly on ``[low, high)``."""

    kind: str = "none"
    low: float = 0.0
    high: float = 0.0

    def __post_init__(self):
        if self.kind not in SAMPLER_KINDS:
            raise ConfigError(f"unknown sampler kind {self.kind!r}", field="kind")
        for name in ("low", "high"):
            if not _is_real(getattr(self, name)):
                raise ConfigError(f"sampler {name} must be a real number", field=name)
        if self.low > self.high:
            raise ConfigError(f"sampler low {self.low} exceeds high {self.high}", field="low")

    @property
    def active(self) -> bool:
        return self.kind != "none"

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if not self.active:
            return np.zeros(size)
        return rng.uniform(self.low, self.high, size)


@dataclass(frozen=True)
class ExperimentConfig:
    """All parameters of one collision-model run.

    Attributes:
        xi: TMSV squeezing between S and M1, in the convention selected by
            ``tmsv_convention``.
        eta: ideal beamsplitter transmission angle.
        n_memory: number of memory modes (M1 plus the M2 modes).
        steps: number of collision steps.
        squeeze: input pattern for M2 and environment modes.
        memory_disorder: phase on the M1-side coupler, applied every step.
        env_disorder: static phase per environment mode.
        imperfection: static offset of each coupler's transmission angle.
        segment_order: ``eq1`` (environment first, memory last) or ``eq7``.
        tmsv_convention: ``appendix`` uses ``cosh(2 xi)``; ``charfn`` halves xi.
        per_mode_bmi: also record I2(S:m) for every memory mode.
        seed: root seed for the static disorder draws.
    """

    xi: float = DEFAULT_XI
    eta: float = DEFAULT_ETA
    n_memory: int = 2
    steps: int = DEFAULT_STEPS
    squeeze: SqueezePattern = field(default_factory=SqueezePattern)
    memory_disorder: float = 0.0
    env_disorder: SamplerSpec = field(default_factory=SamplerSpec)
    imperfection: SamplerSpec = field(default_factory=SamplerSpec)
    segment_order: str = "eq1"
    tmsv_convention: str = "appendix"
    per_mode_bmi: bool = False
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        for name in ("xi", "eta", "memory_disorder"):
            if not _is_real(getattr(self, name)):
                raise ConfigError(f"{name} must be a real number", field=name)
        for name, typ in (("squeeze", SqueezePattern), ("env_disorder", SamplerSpec),
                          ("imperfection", SamplerSpec)):
            if not isinstance(getattr(self, name), typ):
                raise ConfigError(f"{name} must be a {typ.__name__}", field=name)
        if not self.xi >= 0:
            raise ConfigError(f"xi must be >= 0, got {self.xi}", field="xi")
        if not 0 <= self.eta <= np.pi / 2:
            raise ConfigError(f"eta must lie in [0, pi/2], got {self.eta}", field="eta")
        if not _is_int(self.n_memory) or self.n_memory < 2:
            raise ConfigError(f"n_memory must be an integer >= 2, got {self.n_memory}", field="n_memory")
        if not _is_int(self.steps) or self.steps < 1:
            raise ConfigError(f"steps must be an integer >= 1, got {self.steps}", field="steps")
        if self.segment_order not in SEGMENT_ORDERS:
            raise ConfigError(f"segment_order must be one of {SEGMENT_ORDERS}", field="segment_order")
        if self.tmsv_convention not in TMSV_CONVENTIONS:
            raise ConfigError(f"tmsv_convention must be one of {TMSV_CONVENTIONS}", field="tmsv_convention")
        if not _is_int(self.seed) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an integer in [0, 2**64)", field="seed")
        imp = self.imperfection
        if imp.active and (imp.low < 0 or self.eta + imp.high > np.pi / 2 + 1e-12):
            raise ConfigError(
                f"imperfection range [{imp.low}, {imp.high}] must lie within "
                f"[0, pi/2 - eta] = [0, {np.pi / 2 - self.eta:.6g}]",
                field="imperfection",
            )

    @property
    def effective_xi(self) -> float:
        """Squeezing in the ``cosh(2 xi)`` convention used internally."""
        return self.xi / 2 if self.tmsv_convention == "charfn" else self.xi

    @property
    def stochastic(self) -> bool:
        return self.env_disorder.active or self.imperfection.active

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}", field=unknown[0])
        nested = {"squeeze": SqueezePattern, "env_disorder": SamplerSpec, "imperfection": SamplerSpec}
        for key, typ in nested.items():
            if key in data and isinstance(data[key], Mapping):
                sub = dict(data[key])
                sub_known = {f.name for f in dataclasses.fields(typ)}
                bad = sorted(set(sub) - sub_known)
                if bad:
                    raise ConfigError(f"unknown key(s) in {key}: {', '.join(bad)}", field=f"{key}.{bad[0]}")
                try:
                    data[key] = typ(**sub)
                except ConfigError as exc:
                    raise ConfigError(f"{key}: {exc}", field=f"{key}.{exc.field}") from None
                except TypeError as exc:
                    raise ConfigError(f"{key}: invalid value: {exc}", field=key) from None
        for key in ("n_memory", "steps", "seed"):
            if key in data and isinstance(data[key], float) and data[key].is_integer():
                data[key] = int(data[key])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"invalid config value: {exc}") from None

    def with_override(self, key: str, value: Any) -> "ExperimentConfig":
        """Apply a dotted-key override such as ``squeeze.r`` or ``eta``."""
        data = self.to_dict()
        head, _, tail = key.partition(".")
        if head not in data:
            raise ConfigError(f"unknown config key {key!r}", field=key)
        if tail:
            if not isinstance(data[head], dict) or tail not in data[head]:
                raise ConfigError(f"unknown config key {key!r}", field=key)
            data[head][tail] = value
        else:
            data[head] = value
        return ExperimentConfig.from_dict(data)
