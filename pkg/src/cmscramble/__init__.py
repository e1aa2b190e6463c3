"""Information scrambling of Gaussian states in a collision-model interferometer."""

__version__ = "0.1.0"

from .config import ExperimentConfig, SamplerSpec, SqueezePattern  # noqa: E402
from .engine import run_simulation  # noqa: E402
from .ensembles import ensemble, sample_run  # noqa: E402
from .measures import bmi, info_record, tmi  # noqa: E402

__all__ = [
    "ExperimentConfig",
    "SamplerSpec",
    "SqueezePattern",
    "bmi",
    "ensemble",
    "info_record",
    "run_simulation",
    "sample_run",
    "tmi",
]
