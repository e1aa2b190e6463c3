"""Named experiment sweeps, one per published figure."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

from .config import ExperimentConfig, SamplerSpec, SqueezePattern
from .ensembles import DEFAULT_SAMPLES
from .errors import ConfigError

PI = np.pi
ENV_PHASES = SamplerSpec("uniform", 0.0, 2 * PI)


@dataclass(frozen=True)
class SeriesSpec:
    """One exported curve: a configuration plus its ensemble size."""

    name: str
    config: ExperimentConfig
    samples: int = 1

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ConfigError(f"series {self.name!r}: samples must be an integer >= 1", field="samples")

    @property
    def is_ensemble(self) -> bool:
        return self.config.stochastic or self.samples > 1

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "samples": self.samples, "config": self.config.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SeriesSpec":
        unknown = sorted(set(data) - {"name", "samples", "config", "file"})
        if unknown:
            raise ConfigError(f"unknown series key(s): {', '.join(unknown)}", field=unknown[0])
        if "name" not in data:
            raise ConfigError("series entry is missing 'name'", field="name")
        return cls(str(data["name"]), ExperimentConfig.from_dict(data.get("config", {})),
                   int(data.get("samples", 1)))


@dataclass(frozen=True)
class Sweep:
    """A named list of series plus free-form notes copied into the metadata."""

    name: str
    series: tuple[SeriesSpec, ...]
    notes: Mapping[str, Any] = field(default_factory=dict)

    def map_configs(self, fn: Callable[[ExperimentConfig], ExperimentConfig]) -> "Sweep":
        return Sweep(self.name, tuple(SeriesSpec(s.name, fn(s.config), s.samples) for s in self.series), self.notes)


def _alternating(r=0.5):
    return SqueezePattern("alternating", r)


def fig2() -> Sweep:
    etas = {"eta_pi_4": PI / 4, "eta_pi_3": PI / 3, "eta_2pi_5": 2 * PI / 5, "eta_9pi_20": 9 * PI / 20}
    return Sweep("fig2", tuple(SeriesSpec(n, ExperimentConfig(eta=e)) for n, e in etas.items()),
                 {"description": "vacuum M2/environment inputs, transmission-angle sweep"})


def fig3() -> Sweep:
    eta = 9 * PI / 20
    return Sweep("fig3", (
        SeriesSpec("vacuum", ExperimentConfig(eta=eta)),
        SeriesSpec("uniform", ExperimentConfig(eta=eta, squeeze=SqueezePattern("uniform", 0.5, 0.0))),
        SeriesSpec("alternating", ExperimentConfig(eta=eta, squeeze=_alternating())),
    ), {"description": "vacuum vs identically squeezed vs alternately squeezed inputs"})


def fig4() -> Sweep:
    base = ExperimentConfig(eta=9 * PI / 20, squeeze=_alternating())
    return Sweep("fig4", (
        SeriesSpec("delta_0", base),
        SeriesSpec("delta_pi_2", base.replace(memory_disorder=PI / 2)),
        SeriesSpec("delta_0_env_disorder", base.replace(env_disorder=ENV_PHASES), DEFAULT_SAMPLES),
        SeriesSpec("delta_pi_2_env_disorder",
                   base.replace(memory_disorder=PI / 2, env_disorder=ENV_PHASES), DEFAULT_SAMPLES),
    ), {"description": "memory phase disorder with and without static environment phases"})


def fig5() -> Sweep:
    # eta = 2pi/5 keeps eta + pi/10 inside [0, pi/2]
    base = ExperimentConfig(eta=2 * PI / 5, squeeze=_alternating())
    return Sweep("fig5", (
        SeriesSpec("perfect", base),
        SeriesSpec("small_imperfection", base.replace(imperfection=SamplerSpec("uniform", 0.0, PI / 100)),
                   DEFAULT_SAMPLES),
        SeriesSpec("large_imperfection", base.replace(imperfection=SamplerSpec("uniform", 0.0, PI / 10)),
                   DEFAULT_SAMPLES),
    ), {"description": "static beamsplitter-angle imperfections"})


def fig6() -> Sweep:
    cfg = ExperimentConfig(eta=9 * PI / 20, n_memory=6, squeeze=_alternating(),
                           memory_disorder=PI / 2, per_mode_bmi=True)
    return Sweep("fig6", (SeriesSpec("memory_6", cfg),), {
        "description": "six-mode memory with memory phase disorder",
        "display_scale": {"bmi_mode_m2": 3, "bmi_mode_m3": 3, "bmi_mode_m4": 3,
                          "bmi_mode_m5": 3, "bmi_mode_m6": 3},
    })


PRESETS: dict[str, Callable[[], Sweep]] = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
}


def get_preset(name: str) -> Sweep:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}", field="preset") from None
