"""Stroboscopic collision-model evolution of the joint covariance matrix."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .config import ExperimentConfig
from .disorder import StaticDisorder, draw_static_disorder
from .errors import InvalidMatrixError, ShapeError, UnphysicalStateError
from .gaussian import (
    PHYSICALITY_TOL,
    CovarianceState,
    direct_sum,
    raw_symplectic_spectrum,
    smsv_block,
    tmsv_block,
)
from .interferometer import (
    UNITARITY_TOL,
    CouplerSpec,
    ScatteringMatrix,
    cumulative_scattering,
    step_scattering,
    unitarity_defect,
)

RETAIN_MODES = ("full", "latest")


@dataclass(frozen=True)
class ModeRegistry:
    """Labels of the active modes at a given step.

    Index 0 is the system, 1 is M1, ``2..n_memory`` are the M2 modes and
    everything after is environment, in order of creation.
    """

    labels: tuple[str, ...]
    step: int = 0

    @classmethod
    def initial(cls, n_memory: int) -> "ModeRegistry":
        labels = ("S", "M1") + tuple(f"M2({j})" for j in range(1, n_memory))
        return cls(labels, 0)

    def advance(self, add_env: bool) -> "ModeRegistry":
        labels = self.labels
        if add_env:
            labels = labels + (f"E({self.n_env + 1})",)
        return ModeRegistry(labels, self.step + 1)

    @property
    def n_modes(self) -> int:
        return len(self.labels)

    @property
    def n_memory(self) -> int:
        return sum(1 for lab in self.labels if lab == "M1" or lab.startswith("M2"))

    @property
    def n_env(self) -> int:
        return sum(1 for lab in self.labels if lab.startswith("E"))

    system = 0
    m1 = 1

    @property
    def m2(self) -> list[int]:
        return list(range(2, self.n_memory + 1))

    @property
    def memory(self) -> list[int]:
        return list(range(1, self.n_memory + 1))

    @property
    def environment(self) -> list[int]:
        return list(range(self.n_memory + 1, self.n_modes))


@dataclass(frozen=True, eq=False)
class TraceStep:
    step: int
    state: CovarianceState
    scattering: Optional[ScatteringMatrix]
    registry: ModeRegistry


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Per-step record of a run. ``steps`` excludes the initial (L=0) entry."""

    config: ExperimentConfig
    initial: TraceStep
    steps: tuple[TraceStep, ...]

    def __len__(self):
        return len(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    def __iter__(self):
        return iter(self.steps)

    @property
    def final(self) -> TraceStep:
        return self.steps[-1]


def initial_joint_state(config: ExperimentConfig) -> tuple[CovarianceState, ModeRegistry]:
    """TMSV on (S, M1) and the squeeze pattern on every M2 mode."""
    registry = ModeRegistry.initial(config.n_memory)
    blocks = [tmsv_block(config.effective_xi)]
    blocks += [smsv_block(config.squeeze.spec_for(p)) for p in registry.m2]
    return CovarianceState(direct_sum(*blocks)), registry


def complex_to_quadrature(s: ScatteringMatrix | np.ndarray) -> np.ndarray:
    """Real orthogonal-symplectic action of a passive unitary on (x, p) pairs.

    ``a_out = S a_in`` gives ``[[Re S, -Im S], [Im S, Re S]]`` per 2x2 block.
    """
    u = s.matrix if isinstance(s, ScatteringMatrix) else np.asarray(s, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InvalidMatrixError(f"expected a square matrix, got shape {u.shape}")
    if unitarity_defect(u) > UNITARITY_TOL:
        raise InvalidMatrixError("complex_to_quadrature requires a unitary matrix")
    n = u.shape[0]
    m = np.empty((2 * n, 2 * n))
    m[0::2, 0::2] = u.real
    m[0::2, 1::2] = -u.imag
    m[1::2, 0::2] = u.imag
    m[1::2, 1::2] = u.real
    return m


def propagate(state: CovarianceState, s: ScatteringMatrix) -> CovarianceState:
    if s.dim != state.n_modes:
        raise ShapeError(f"scattering matrix dim {s.dim} does not match {state.n_modes} modes")
    m = complex_to_quadrature(s)
    return CovarianceState(m @ state.matrix @ m.T)


def step_couplers(config: ExperimentConfig, dim: int, disorder: StaticDisorder) -> list[tuple[int, CouplerSpec]]:
    """Couplers acting at one step on a chain of ``dim`` modes.

    Pair ``k`` joins modes ``(k, k+1)`` for ``k = 1..dim-2``; the system mode
    never collides. The phase of a coupler sits on its lower-index mode: the
    memory disorder on M1, the static phase of environment mode ``j`` on the
    coupler to its right.
    """
    n_mem = config.n_memory
    couplers = []
    for k in range(1, dim - 1):
        if k == 1:
            phase = config.memory_disorder
        elif k > n_mem:
            phase = float(disorder.env_phases[k - n_mem - 1])
        else:
            phase = 0.0
        eta = min(config.eta + float(disorder.coupler_offsets[k - 1]), np.pi / 2)
        couplers.append((k, CouplerSpec(eta, phase)))
    return couplers


def iter_simulation(
    config: ExperimentConfig,
    disorder: Optional[StaticDisorder] = None,
    check_physical: bool = False,
    track_scattering: bool = True,
) -> Iterator[TraceStep]:
    """Yield the state after every step, starting with the L=0 input.

    With ``check_physical`` the full joint symplectic spectrum is verified at
    every step (costly for long runs). Without ``track_scattering`` the
    cumulative matrix is not formed and ``TraceStep.scattering`` is None.
    """
    if disorder is None:
        disorder = draw_static_disorder(config, 0)
    state, registry = initial_joint_state(config)
    cumulative = ScatteringMatrix.identity(registry.n_modes) if track_scattering else None
    yield TraceStep(0, state, cumulative, registry)

    for step in range(1, config.steps + 1):
        try:
            add_env = step >= 2
            if add_env:
                spec = config.squeeze.spec_for(registry.n_modes)
                state = CovarianceState(direct_sum(state.matrix, smsv_block(spec)))
            registry = registry.advance(add_env)
            s_step = step_scattering(
                registry.n_modes, step_couplers(config, registry.n_modes, disorder), config.segment_order
            )
            state = propagate(state, s_step)
            if track_scattering:
                cumulative = cumulative_scattering(cumulative, s_step)
            if check_physical:
                nu = raw_symplectic_spectrum(state.matrix)
                if nu.min() < 0.5 - PHYSICALITY_TOL:
                    raise UnphysicalStateError(f"joint state unphysical (min nu {nu.min():.12g})")
        except UnphysicalStateError as exc:
            exc.step = step
            raise
        yield TraceStep(step, state, cumulative, registry)


def run_simulation(
    config: ExperimentConfig,
    disorder: Optional[StaticDisorder] = None,
    retain: str = "full",
    check_physical: bool = False,
) -> SimulationTrace:
    """Run all steps and collect a trace.

    ``retain="latest"`` keeps only the last step in memory.
    """
    if retain not in RETAIN_MODES:
        raise ValueError(f"retain must be one of {RETAIN_MODES}")
    it = iter_simulation(config, disorder, check_physical)
    initial = next(it)
    steps: list[TraceStep] = []
    for ts in it:
        if retain == "latest":
            steps[:] = [ts]
        else:
            steps.append(ts)
    return SimulationTrace(config, initial, tuple(steps))
