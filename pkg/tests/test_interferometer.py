import numpy as np
import pytest

from cmscramble.config import ExperimentConfig, SamplerSpec, SqueezePattern
from cmscramble.engine import run_simulation
from cmscramble.errors import (
    ConfigError,
    InvalidGrowthError,
    InvalidMatrixError,
    InvalidParameterError,
    ModeIndexError,
)
from cmscramble.interferometer import (
    CouplerSpec,
    ScatteringMatrix,
    application_order,
    bs_matrix,
    cumulative_scattering,
    embed_pair,
    step_scattering,
    unitarity_defect,
)

H = np.sqrt(2) / 2


def test_coupler_invariants():
    for eta in np.linspace(0, np.pi / 2, 11):
        c = CouplerSpec(eta)
        assert c.r**2 + c.t**2 == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(InvalidParameterError):
        CouplerSpec(2.0)
    with pytest.raises(InvalidParameterError):
        CouplerSpec(-0.1)


@pytest.mark.parametrize(
    "eta, phase, expected",
    [
        (np.pi / 2, 0.0, [[1, 0], [0, 1]]),
        (np.pi / 4, 0.0, [[H, H], [-H, H]]),
        (np.pi / 3, np.pi, [[-np.sqrt(3) / 2, -0.5], [-0.5, np.sqrt(3) / 2]]),
    ],
)
def test_bs_matrix(eta, phase, expected):
    np.testing.assert_allclose(bs_matrix(CouplerSpec(eta, phase)), expected, atol=1e-15)


def test_embed_pair():
    b = bs_matrix(CouplerSpec(0.3, 0.2))
    np.testing.assert_array_equal(embed_pair(np.eye(2), 4, 1).matrix, np.eye(4))
    top = embed_pair(b, 3, 0).matrix
    np.testing.assert_array_equal(top[:2, :2], b)
    np.testing.assert_array_equal(top[2], [0, 0, 1])
    low = embed_pair(b, 3, 1).matrix
    np.testing.assert_array_equal(low[1:, 1:], b)
    np.testing.assert_array_equal(low[0], [1, 0, 0])
    with pytest.raises(ModeIndexError):
        embed_pair(b, 3, 2)


class TestStepScattering:
    def test_single_pair(self):
        spec = CouplerSpec(0.9, 0.4)
        np.testing.assert_allclose(step_scattering(2, [(0, spec)]).matrix, bs_matrix(spec))

    def test_fully_reflective_is_identity(self):
        couplers = [(k, CouplerSpec(np.pi / 2)) for k in range(5)]
        np.testing.assert_allclose(step_scattering(6, couplers).matrix, np.eye(6), atol=1e-15)

    def test_three_mode_product(self):
        c = H
        b01 = np.array([[c, c, 0], [-c, c, 0], [0, 0, 1]])
        b12 = np.array([[1, 0, 0], [0, c, c], [0, -c, c]])
        spec = CouplerSpec(np.pi / 4)
        eq1 = step_scattering(3, [(0, spec), (1, spec)], "eq1").matrix
        eq7 = step_scattering(3, [(0, spec), (1, spec)], "eq7").matrix
        # eq1 acts from the far end: pair 1 first, pair 0 last
        np.testing.assert_allclose(eq1, b01 @ b12, atol=1e-15)
        np.testing.assert_allclose(eq7, b12 @ b01, atol=1e-15)
        assert unitarity_defect(eq1) < 1e-13

    def test_orders(self):
        assert application_order([1, 3, 2], "eq1") == [3, 2, 1]
        assert application_order([1, 3, 2], "eq7") == [1, 2, 3]
        with pytest.raises(ConfigError):
            application_order([1], "eq9")

    def test_duplicate_pair_rejected(self):
        with pytest.raises(ConfigError):
            step_scattering(3, [(1, CouplerSpec(0.2)), (1, CouplerSpec(0.3))])


class TestCumulative:
    def test_identity_previous(self):
        step = step_scattering(3, [(1, CouplerSpec(0.4, 1.0))])
        np.testing.assert_allclose(cumulative_scattering(ScatteringMatrix.identity(3), step).matrix, step.matrix)

    def test_identity_step_pads(self):
        prev = ScatteringMatrix(bs_matrix(CouplerSpec(0.7, 0.3)))
        out = cumulative_scattering(prev, ScatteringMatrix.identity(3)).matrix
        np.testing.assert_allclose(out[:2, :2], prev.matrix)
        np.testing.assert_allclose(out[2], [0, 0, 1])

    def test_two_steps_rotate_by_half_pi(self):
        s = ScatteringMatrix(bs_matrix(CouplerSpec(np.pi / 4)))
        np.testing.assert_allclose(cumulative_scattering(s, s).matrix, [[0, 1], [-1, 0]], atol=1e-15)

    def test_shrink_rejected(self):
        with pytest.raises(InvalidGrowthError):
            cumulative_scattering(ScatteringMatrix.identity(4), ScatteringMatrix.identity(3))

    def test_non_unitary_rejected(self):
        with pytest.raises(InvalidMatrixError):
            ScatteringMatrix(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_chain_properties_up_to_400_steps():
    cfg = ExperimentConfig(eta=1.2, steps=400, squeeze=SqueezePattern("alternating", 0.5),
                           memory_disorder=0.7, env_disorder=SamplerSpec("uniform", 0, 2 * np.pi),
                           imperfection=SamplerSpec("uniform", 0, 0.3))
    worst = 0.0
    trace = run_simulation(cfg)
    for ts in trace.steps[::25] + (trace.final,):
        u = ts.scattering.matrix
        worst = max(worst, unitarity_defect(u))
        e0 = np.zeros(u.shape[0])
        e0[0] = 1
        np.testing.assert_array_equal(u[0], e0)
        np.testing.assert_array_equal(u[:, 0], e0)
    assert worst <= 1e-12


def test_real_orthogonal_without_phases():
    trace = run_simulation(ExperimentConfig(eta=0.9, steps=30))
    u = trace.final.scattering.matrix
    assert np.all(u.imag == 0)
    np.testing.assert_allclose(u.real @ u.real.T, np.eye(u.shape[0]), atol=1e-13)
