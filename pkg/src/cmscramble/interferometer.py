"""Beamsplitter/phase-shifter chain scattering matrices.

Mode indices are 0-based throughout: the pair ``k`` couples modes ``k`` and
``k + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    InvalidGrowthError,
    InvalidMatrixError,
    InvalidParameterError,
    InvalidSizeError,
    ModeIndexError,
)

SEGMENT_ORDERS = ("eq1", "eq7")

#: loose structural check on construction; the tests pin 1e-12
UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class CouplerSpec:
    """A beamsplitter with transmission angle ``eta`` followed by a phase shift.

    Reflectivity is ``sin(eta)`` and transmissivity ``cos(eta)``.
    """

    eta: float
    phase: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.eta <= np.pi / 2 + 1e-12:
            raise InvalidParameterError(f"eta must lie in [0, pi/2], got {self.eta}")

    @property
    def r(self) -> float:
        return float(np.sin(self.eta))

    @property
    def t(self) -> float:
        return float(np.cos(self.eta))


def unitarity_defect(u: np.ndarray) -> float:
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


@dataclass(frozen=True, eq=False)
class ScatteringMatrix:
    """Complex unitary matrix mapping input mode amplitudes to outputs."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidSizeError(f"scattering matrix must be square, got {m.shape}")
        defect = unitarity_defect(m)
        if defect > UNITARITY_TOL:
            raise InvalidMatrixError(f"scattering matrix is not unitary (defect {defect:.3g})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "ScatteringMatrix":
        return cls(np.eye(dim, dtype=complex))

    def inverse(self) -> "ScatteringMatrix":
        return ScatteringMatrix(self.matrix.conj().T)

    def __repr__(self):
        return f"ScatteringMatrix(dim={self.dim})"


def bs_matrix(spec: CouplerSpec) -> np.ndarray:
    """``[[r e^{i delta}, t e^{i delta}], [-t, r]]``."""
    ph = np.exp(1j * spec.phase)
    return np.array([[spec.r * ph, spec.t * ph], [-spec.t, spec.r]], dtype=complex)


def embed_pair(block: np.ndarray, dim: int, k: int) -> ScatteringMatrix:
    """Identity of size ``dim`` with ``block`` on rows/columns ``(k, k+1)``."""
    if dim < 2:
        raise InvalidSizeError(f"need dim >= 2 to embed a pair, got {dim}")
    if not 0 <= k <= dim - 2:
        raise ModeIndexError(f"pair index {k} out of range for dim {dim}")
    m = np.eye(dim, dtype=complex)
    m[k:k + 2, k:k + 2] = block
    return ScatteringMatrix(m)


def application_order(ks: Iterable[int], order: str = "eq1") -> list[int]:
    """Pair indices in the order their unitaries act on the state.

    ``eq1`` acts from the environment end of the chain towards the memory, so
    the memory pair is applied last; ``eq7`` acts in ascending ``k``.
    """
    if order not in SEGMENT_ORDERS:
        raise ConfigError(f"unknown segment order {order!r}", field="segment_order")
    ks = list(ks)
    return sorted(ks, reverse=(order == "eq1"))


def step_scattering(
    dim: int,
    couplers: Sequence[tuple[int, CouplerSpec]],
    order: str = "eq1",
) -> ScatteringMatrix:
    """Scattering matrix of one collision step."""
    if dim < 2:
        raise InvalidSizeError(f"step_scattering needs dim >= 2, got {dim}")
    specs = dict()
    for k, spec in couplers:
        if k in specs:
            raise ConfigError(f"duplicate pair index {k} within one step", field="couplers")
        if not 0 <= k <= dim - 2:
            raise ModeIndexError(f"pair index {k} out of range for dim {dim}")
        specs[k] = spec
    m = np.eye(dim, dtype=complex)
    # left-multiplying by an embedded pair only touches its two rows
    for k in application_order(specs, order):
        m[k:k + 2, :] = bs_matrix(specs[k]) @ m[k:k + 2, :]
    return ScatteringMatrix(m)


def pad_identity(s: ScatteringMatrix, dim: int) -> np.ndarray:
    if dim < s.dim:
        raise InvalidGrowthError(f"cannot shrink scattering matrix from {s.dim} to {dim}")
    m = np.eye(dim, dtype=complex)
    m[:s.dim, :s.dim] = s.matrix
    return m


def cumulative_scattering(previous: ScatteringMatrix, step: ScatteringMatrix) -> ScatteringMatrix:
    """``step @ previous``, with ``previous`` padded by identity on new modes."""
    return ScatteringMatrix(step.matrix @ pad_identity(previous, step.dim))
