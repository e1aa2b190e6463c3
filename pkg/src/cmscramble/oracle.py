"""Closed-form system+memory covariance blocks, independent of propagation.

Every block is written in terms of the elements ``S[i, j]`` of the inverse
cumulative scattering matrix and the input squeezing, then assembled as
``sigma_SM = 1/2 [[s_S, s_SM1, s_SM2], [., s_M1, s_M1M2], [., ., s_M2]]``.
Indices below are 0-based: row/column 1 is M1, ``2..n_memory`` are the M2
modes, and the input sums run over every mode from position 2 on.

The off-diagonal squeezing sums (``A``, ``C`` terms between two different
modes) carry ``conj(S[k, a]) * conj(S[k, b])``, the same structure as the
diagonal ``conj(S[k, a])**2`` terms.
"""
from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .config import ExperimentConfig
from .errors import InvalidParameterError, InvalidSizeError
from .gaussian import CovarianceState, SqueezeSpec
from .interferometer import ScatteringMatrix

CONVENTIONS = ("inverse", "direct", "transpose", "adjoint")
#: fixed by agreement with the propagation engine (see tests/test_oracle.py)
DEFAULT_CONVENTION = "inverse"


def oracle_matrix(cumulative: ScatteringMatrix, convention: str = DEFAULT_CONVENTION) -> np.ndarray:
    """Which matrix the closed forms index, given the cumulative scattering matrix."""
    u = cumulative.matrix
    if convention == "inverse":
        return np.linalg.inv(u)
    if convention == "direct":
        return u.copy()
    if convention == "transpose":
        return u.T.copy()
    if convention == "adjoint":
        return u.conj().T
    raise InvalidParameterError(f"unknown oracle convention {convention!r}")


@dataclass(frozen=True, eq=False)
class OracleInput:
    """Scattering data and input squeezing for the closed forms.

    ``pattern[j]`` is the squeeze spec of the mode at position ``j + 2``.
    All entries must share one strength.
    """

    scattering: np.ndarray
    xi: float
    pattern: tuple[SqueezeSpec, ...]
    n_memory: int = 2

    def __post_init__(self):
        s = np.asarray(self.scattering, dtype=complex)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] < 3:
            raise InvalidSizeError(f"oracle needs a square scattering matrix of dim >= 3, got {s.shape}")
        if len(self.pattern) != s.shape[0] - 2:
            raise InvalidSizeError(f"pattern has {len(self.pattern)} entries, expected {s.shape[0] - 2}")
        if self.n_memory + 1 > s.shape[0]:
            raise InvalidSizeError("scattering matrix smaller than the system+memory block")
        strengths = {p.strength for p in self.pattern}
        if len(strengths) > 1:
            raise InvalidParameterError("closed forms assume one squeezing strength for all inputs")
        object.__setattr__(self, "scattering", s)
        object.__setattr__(self, "pattern", tuple(self.pattern))

    @property
    def r(self) -> float:
        return self.pattern[0].strength if self.pattern else 0.0

    @property
    def phases(self) -> np.ndarray:
        return np.exp(1j * np.array([p.angle for p in self.pattern]))

    @classmethod
    def from_run(
        cls,
        config: ExperimentConfig,
        cumulative: ScatteringMatrix,
        convention: str = DEFAULT_CONVENTION,
    ) -> "OracleInput":
        pattern = tuple(config.squeeze.spec_for(p) for p in range(2, cumulative.dim))
        return cls(oracle_matrix(cumulative, convention), config.effective_xi, pattern, config.n_memory)


def _hyperbolics(inp: OracleInput):
    return (np.cosh(2 * inp.xi), np.sinh(2 * inp.xi), np.cosh(2 * inp.r), np.sinh(2 * inp.r))


def _correlation_block(sinh2xi: float, s: complex) -> np.ndarray:
    c = np.conj(s)
    return sinh2xi * np.array([[c.real, c.imag], [c.imag, -c.real]])


def _pair_block(inp: OracleInput, a: int, b: int) -> np.ndarray:
    """Unscaled covariance block between memory positions ``a`` and ``b``."""
    ch_xi, _, ch_r, sh_r = _hyperbolics(inp)
    s = inp.scattering
    col_a, col_b = s[2:, a], s[2:, b]
    e = inp.phases
    if a == b:
        alpha = 0.5 * sh_r * np.sum(e * np.conj(col_a) ** 2 + np.conj(e) * col_a**2)
        beta = ch_xi * abs(s[1, a]) ** 2 + ch_r * (1 - abs(s[1, a]) ** 2)
        gamma = sh_r / 2j * np.sum(e * np.conj(col_a) ** 2 - np.conj(e) * col_a**2)
        alpha, gamma = alpha.real, gamma.real
        return np.array([[alpha + beta, gamma], [gamma, -alpha + beta]])
    A = (0.5 * sh_r * np.sum(e * np.conj(col_a) * np.conj(col_b) + np.conj(e) * col_a * col_b)).real
    C = (sh_r / 2j * np.sum(e * np.conj(col_a) * np.conj(col_b) - np.conj(e) * col_a * col_b)).real
    prod = s[1, a] * np.conj(s[1, b])
    B = ch_xi * prod.real + ch_r * (-prod).real
    D = ch_xi * prod.imag + ch_r * (-prod).imag
    return np.array([[A + B, C + D], [C - D, -A + B]])


def oracle_sigma_s(inp: OracleInput) -> np.ndarray:
    ch_xi = np.cosh(2 * inp.xi)
    return 0.5 * np.diag([ch_xi, ch_xi])


def oracle_sigma_sm1(inp: OracleInput) -> np.ndarray:
    return 0.5 * _correlation_block(np.sinh(2 * inp.xi), inp.scattering[1, 1])


def oracle_sigma_m1(inp: OracleInput) -> np.ndarray:
    return 0.5 * _pair_block(inp, 1, 1)


def oracle_sigma_m2_blocks(inp: OracleInput) -> np.ndarray:
    """Full M2 covariance, ``2(n_memory-1)`` square."""
    m2 = range(2, inp.n_memory + 1)
    return 0.5 * np.block([[_pair_block(inp, a, b) for b in m2] for a in m2])


def oracle_sigma_cross(inp: OracleInput) -> tuple[np.ndarray, np.ndarray]:
    """``(sigma_SM2, sigma_M1M2)``, each a 2 x 2(n_memory-1) row of blocks."""
    sh_xi = np.sinh(2 * inp.xi)
    m2 = range(2, inp.n_memory + 1)
    s_m2 = np.hstack([_correlation_block(sh_xi, inp.scattering[1, a]) for a in m2])
    m1_m2 = np.hstack([_pair_block(inp, 1, a) for a in m2])
    return 0.5 * s_m2, 0.5 * m1_m2


def assemble_sigma_sm(inp: OracleInput) -> CovarianceState:
    s_s = oracle_sigma_s(inp)
    s_sm1 = oracle_sigma_sm1(inp)
    s_m1 = oracle_sigma_m1(inp)
    s_m2 = oracle_sigma_m2_blocks(inp)
    s_sm2, s_m1m2 = oracle_sigma_cross(inp)
    full = np.block([
        [s_s, s_sm1, s_sm2],
        [s_sm1.T, s_m1, s_m1m2],
        [s_sm2.T, s_m1m2.T, s_m2],
    ])
    return CovarianceState(full)


def oracle_from_run(
    config: ExperimentConfig,
    cumulative: ScatteringMatrix,
    convention: str = DEFAULT_CONVENTION,
) -> CovarianceState:
    """Closed-form sigma_SM at the step described by ``cumulative``."""
    return assemble_sigma_sm(OracleInput.from_run(config, cumulative, convention))

