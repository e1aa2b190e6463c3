"""Seeded static disorder draws.

Every run derives its random stream from ``(config.seed, sample_index)``
through :class:`numpy.random.SeedSequence` spawn keys, so samples can be
evaluated in any order or in parallel and still reproduce bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ExperimentConfig

_ENV_STREAM = 0
_COUPLER_STREAM = 1


@dataclass(frozen=True, eq=False)
class StaticDisorder:
    """Frozen random values for one run.

    ``env_phases[j]`` belongs to the j-th environment mode (0-based, in order
    of creation); ``coupler_offsets[k]`` is added to the angle of the coupler
    acting on modes ``(k, k+1)``.
    """

    env_phases: np.ndarray
    coupler_offsets: np.ndarray

    @classmethod
    def none(cls, config: ExperimentConfig) -> "StaticDisorder":
        return cls(np.zeros(config.steps), np.zeros(config.n_memory + config.steps))


def child_rng(seed: int, sample_index: int, stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(sample_index), stream))
    return np.random.default_rng(ss)


def draw_static_disorder(config: ExperimentConfig, sample_index: int = 0) -> StaticDisorder:
    env = config.env_disorder.draw(child_rng(config.seed, sample_index, _ENV_STREAM), config.steps)
    couplers = config.imperfection.draw(
        child_rng(config.seed, sample_index, _COUPLER_STREAM), config.n_memory + config.steps
    )
    return StaticDisorder(env, couplers)
