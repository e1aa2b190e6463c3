"""Disorder ensembles: independent seeded runs and their per-step statistics."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import ExperimentConfig
from .disorder import draw_static_disorder
from .engine import iter_simulation
from .measures import InfoSeries, evaluate_steps

DEFAULT_SAMPLES = 128


def sample_run(config: ExperimentConfig, sample_index: int = 0) -> InfoSeries:
    """Measures of one disorder realisation, streamed step by step."""
    disorder = draw_static_disorder(config, sample_index)
    return evaluate_steps(iter_simulation(config, disorder, track_scattering=False), config.n_memory, config.per_mode_bmi)


def _sample_arrays(args):
    config, index = args
    series = sample_run(config, index)
    return series.steps, series.as_arrays()


@dataclass(frozen=True, eq=False)
class EnsembleStats:
    """Per-step sample mean and standard deviation (n-1 denominator)."""

    steps: np.ndarray
    mean: dict[str, np.ndarray]
    std: dict[str, np.ndarray]
    n_samples: int

    @property
    def columns(self) -> list[str]:
        return list(self.mean)


def aggregate(samples: list[dict[str, np.ndarray]], steps: np.ndarray) -> EnsembleStats:
    """Reduce per-sample columns in index order, so results do not depend on completion order."""
    n = len(samples)
    mean, std = {}, {}
    for col in samples[0]:
        stack = np.stack([s[col] for s in samples])
        mean[col] = stack.mean(axis=0)
        std[col] = stack.std(axis=0, ddof=1) if n > 1 else np.zeros(stack.shape[1])
    return EnsembleStats(steps, mean, std, n)


def ensemble(config: ExperimentConfig, n_samples: int = DEFAULT_SAMPLES, workers: Optional[int] = None) -> EnsembleStats:
    """Run ``n_samples`` independent realisations and aggregate them.

    Args:
        config: experiment parameters; its seed roots every sample's stream.
        n_samples: number of realisations, at least 1.
        workers: process count; ``None`` or 1 runs serially.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    jobs = [(config, i) for i in range(n_samples)]
    if workers and workers > 1 and n_samples > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sample_arrays, jobs, chunksize=max(1, n_samples // (4 * workers))))
    else:
        results = [_sample_arrays(j) for j in jobs]
    return aggregate([arrays for _, arrays in results], results[0][0])
