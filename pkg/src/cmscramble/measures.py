"""Bipartite and tripartite mutual information of Gaussian states (nats)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import PartitionError, UnphysicalStateError
from .gaussian import (
    CovarianceState,
    raw_symplectic_spectrum,
    reduce_state,
    tmsv_block,
    von_neumann_entropy,
)

CLAMP_TOL = 1e-9
FIELDS = ("i2_s_m1", "i2_s_m2", "i2_s_m", "i3")


def _check_disjoint(*groups: Sequence[int]) -> None:
    seen: set[int] = set()
    for g in groups:
        g = set(g)
        if not g:
            raise PartitionError("mode groups must be non-empty")
        if seen & g:
            raise PartitionError(f"mode groups overlap on {sorted(seen & g)}")
        seen |= g


def bmi(state: CovarianceState, a: Sequence[int], b: Sequence[int]) -> float:
    """``S(A) + S(B) - S(AB)``, with round-off negatives above -1e-9 clamped to 0.

    Exactly 0 when the cross-covariance between ``a`` and ``b`` vanishes.
    """
    _check_disjoint(a, b)
    a, b = list(a), list(b)
    ia = np.array([[2 * m, 2 * m + 1] for m in a]).ravel()
    ib = np.array([[2 * m, 2 * m + 1] for m in b]).ravel()
    if not np.any(state.matrix[np.ix_(ia, ib)]):
        # zero cross-covariance means a product state
        return 0.0
    value = (
        von_neumann_entropy(reduce_state(state, a))
        + von_neumann_entropy(reduce_state(state, b))
        - von_neumann_entropy(reduce_state(state, a + b))
    )
    if -CLAMP_TOL < value < 0:
        return 0.0
    return value


def tmi(state: CovarianceState, s: Sequence[int], m1: Sequence[int], m2: Sequence[int]) -> float:
    """``I2(S:M1) + I2(S:M2) - I2(S:M1 M2)``; negative values signal scrambling."""
    _check_disjoint(s, m1, m2)
    return bmi(state, s, m1) + bmi(state, s, m2) - bmi(state, s, list(m1) + list(m2))


def log_negativity_tmsv_check(xi: float, convention: str = "appendix") -> float:
    """Logarithmic negativity of a TMSV, from its partial transpose.

    In the ``appendix`` convention the state has ``cosh(2 xi)`` marginals and the
    result is ``2 xi``; the ``charfn`` convention halves the parameter first and
    returns ``xi``.
    """
    eff = xi / 2 if convention == "charfn" else xi
    sigma = tmsv_block(eff).copy()
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    nu = raw_symplectic_spectrum(flip @ sigma @ flip)
    return float(max(0.0, -np.log(2 * nu.min())))


@dataclass(frozen=True)
class InfoRecord:
    step: int
    i2_s_m1: float
    i2_s_m2: float
    i2_s_m: float
    i3: float
    per_mode_bmi: Optional[tuple[float, ...]] = None


def info_record(
    state: CovarianceState,
    step: int,
    n_memory: int,
    per_mode: bool = False,
) -> InfoRecord:
    """All measures for a state whose first ``n_memory + 1`` modes are S, M1, M2.

    Only the S+M block is touched, so the environment can be arbitrarily large.
    """
    sm = reduce_state(state, range(n_memory + 1))
    s, m1, m2 = [0], [1], list(range(2, n_memory + 1))
    i2_1 = bmi(sm, s, m1)
    i2_2 = bmi(sm, s, m2)
    i2_m = bmi(sm, s, m1 + m2)
    per = tuple(bmi(sm, s, [k]) for k in range(1, n_memory + 1)) if per_mode else None
    return InfoRecord(step, i2_1, i2_2, i2_m, i2_1 + i2_2 - i2_m, per)


def mode_columns(n_memory: int) -> list[str]:
    return [f"bmi_mode_m{k}" for k in range(1, n_memory + 1)]


class InfoSeries:
    """Per-step information records of one run, exposed column-wise."""

    def __init__(self, records: Iterable[InfoRecord], n_memory: int):
        self.records = tuple(records)
        self.n_memory = n_memory

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def has_per_mode(self) -> bool:
        return bool(self.records) and self.records[0].per_mode_bmi is not None

    @property
    def columns(self) -> list[str]:
        cols = list(FIELDS)
        if self.has_per_mode:
            cols += mode_columns(self.n_memory)
        return cols

    @property
    def steps(self) -> np.ndarray:
        return np.array([r.step for r in self.records], dtype=int)

    def column(self, name: str) -> np.ndarray:
        if name in FIELDS:
            return np.array([getattr(r, name) for r in self.records])
        if name.startswith("bmi_mode_m") and self.has_per_mode:
            k = int(name[len("bmi_mode_m"):]) - 1
            return np.array([r.per_mode_bmi[k] for r in self.records])
        raise KeyError(name)

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {c: self.column(c) for c in self.columns}


def evaluate_steps(steps, n_memory: int, per_mode: bool = False) -> InfoSeries:
    """Measures for an iterable of trace steps; attaches the step to failures."""
    records = []
    for ts in steps:
        try:
            records.append(info_record(ts.state, ts.step, n_memory, per_mode))
        except UnphysicalStateError as exc:
            exc.step = ts.step
            raise
    return InfoSeries(records, n_memory)


def steady_state(values: Sequence[float], fraction: float = 0.2) -> float:
    """Mean over the final ``fraction`` of the series."""
    values = np.asarray(values, dtype=float)
    n = max(1, int(round(len(values) * fraction)))
    return float(values[-n:].mean())
