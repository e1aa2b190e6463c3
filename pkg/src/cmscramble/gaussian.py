"""Covariance-matrix representation of zero-mean multimode Gaussian states.

Quadratures are interleaved as ``(x_1, p_1, x_2, p_2, ...)`` and the vacuum
has variance 1/2 per quadrature, so a pure mode has symplectic eigenvalue 1/2
and zero von Neumann entropy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import eigh
from scipy.special import xlogy

from .errors import (
    InvalidParameterError,
    InvalidSizeError,
    ModeIndexError,
    ShapeError,
    UnphysicalStateError,
)

#: symplectic eigenvalues this far below 1/2 are clamped rather than rejected
PHYSICALITY_TOL = 1e-9
#: eigenvalues within this distance above 1/2 are round-off on a pure mode;
#: f has infinite slope at 1/2, so they are snapped to exactly 1/2
PURE_SNAP_TOL = 1e-12


@lru_cache(maxsize=None)
def _omega(n: int) -> np.ndarray:
    om = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    om.flags.writeable = False
    return om


@dataclass(frozen=True)
class SymplecticForm:
    """Block-diagonal symplectic form with 2x2 blocks ``[[0, 1], [-1, 0]]``."""

    n_modes: int

    def __post_init__(self):
        if self.n_modes < 1:
            raise InvalidSizeError(f"n_modes must be >= 1, got {self.n_modes}")

    @property
    def matrix(self) -> np.ndarray:
        return _omega(self.n_modes)


@dataclass(frozen=True, eq=False)
class CovarianceState:
    """Real symmetric ``2N x 2N`` covariance matrix of an N-mode Gaussian state.

    The stored matrix is symmetrised on construction and marked read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
            raise ShapeError(f"covariance matrix must be square of even size, got {m.shape}")
        m = 0.5 * (m + m.T)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __repr__(self):
        return f"CovarianceState(n_modes={self.n_modes})"


@dataclass(frozen=True)
class SqueezeSpec:
    """Single-mode squeezing ``r * exp(i*phi)``; ``strength`` must be nonnegative."""

    strength: float = 0.0
    angle: float = 0.0

    def __post_init__(self):
        if not self.strength >= 0:
            raise InvalidParameterError(f"squeezing strength must be >= 0, got {self.strength}")


def _quadrature_index(modes: Sequence[int]) -> np.ndarray:
    return np.array([[2 * m, 2 * m + 1] for m in modes], dtype=int).reshape(-1)


def vacuum_state(n: int) -> CovarianceState:
    if n < 1:
        raise InvalidSizeError(f"vacuum_state needs n >= 1, got {n}")
    return CovarianceState(0.5 * np.eye(2 * n))


def smsv_block(spec: SqueezeSpec) -> np.ndarray:
    """2x2 covariance block of a single-mode squeezed vacuum.

    ``angle = 0`` antisqueezes ``x`` and squeezes ``p``; ``angle = pi`` swaps them.
    """
    c = np.cosh(2 * spec.strength)
    s = np.sinh(2 * spec.strength)
    cphi, sphi = np.cos(spec.angle), np.sin(spec.angle)
    return 0.5 * np.array([[c + s * cphi, s * sphi], [s * sphi, c - s * cphi]])


def smsv_state(spec: SqueezeSpec) -> CovarianceState:
    return CovarianceState(smsv_block(spec))


def tmsv_block(xi: float) -> np.ndarray:
    if not xi >= 0:
        raise InvalidParameterError(f"TMSV squeezing must be >= 0, got {xi}")
    c = np.cosh(2 * xi)
    s = np.sinh(2 * xi)
    z = np.diag([1.0, -1.0])
    return 0.5 * np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])


def tmsv_state(xi: float) -> CovarianceState:
    """Two-mode squeezed vacuum with marginal symplectic eigenvalue ``cosh(2 xi)/2``."""
    return CovarianceState(tmsv_block(xi))


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    i = 0
    for b in blocks:
        n = b.shape[0]
        out[i:i + n, i:i + n] = b
        i += n
    return out


def reduce_state(state: CovarianceState, modes: Sequence[int]) -> CovarianceState:
    """Marginal covariance of ``modes`` (order preserved)."""
    modes = [int(m) for m in modes]
    if not modes:
        raise ModeIndexError("cannot reduce onto an empty mode list")
    if len(set(modes)) != len(modes):
        raise ModeIndexError(f"duplicate mode index in {modes}")
    bad = [m for m in modes if not 0 <= m < state.n_modes]
    if bad:
        raise ModeIndexError(f"mode indices {bad} out of range for {state.n_modes} modes")
    idx = _quadrature_index(modes)
    return CovarianceState(state.matrix[np.ix_(idx, idx)])


def raw_symplectic_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a positive definite matrix, sorted descending.

    Computes the spectrum of ``Omega @ matrix`` through the similar Hermitian
    matrix ``i * sqrt(matrix) @ Omega @ sqrt(matrix)``, whose real eigenvalues
    come in exact ``+-nu`` pairs. No physicality check is done here.

    Uses the LAPACK MRRR driver; the divide-and-conquer one behind
    ``numpy.linalg.eigh`` can fail to converge on the highly degenerate
    spectra of large nearly pure states.
    """
    n = matrix.shape[0] // 2
    w, v = eigh(matrix, driver="evr")
    if w.min() <= 0:
        raise UnphysicalStateError("covariance matrix is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    ev = eigh(1j * (root @ _omega(n) @ root), eigvals_only=True, driver="evr")
    return np.sort(ev[n:])[::-1]


def symplectic_eigenvalues(state: CovarianceState) -> np.ndarray:
    nu = raw_symplectic_spectrum(state.matrix)
    if nu.min() < 0.5 - PHYSICALITY_TOL:
        raise UnphysicalStateError(
            f"smallest symplectic eigenvalue {nu.min():.12g} is below 1/2"
        )
    return np.where(nu < 0.5 + PURE_SNAP_TOL, 0.5, nu)


def entropy_function(x):
    """``(x+1/2) ln(x+1/2) - (x-1/2) ln(x-1/2)``, continuous at ``x = 1/2``."""
    x = np.asarray(x, dtype=float)
    lo = np.clip(x - 0.5, 0.0, None)
    return xlogy(x + 0.5, x + 0.5) - xlogy(lo, lo)


def von_neumann_entropy(state: CovarianceState) -> float:
    """Entropy in nats."""
    return float(np.sum(entropy_function(symplectic_eigenvalues(state))))
