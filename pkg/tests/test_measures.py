import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmscramble.config import ExperimentConfig, SamplerSpec, SqueezePattern
from cmscramble.engine import iter_simulation, run_simulation
from cmscramble.errors import PartitionError
from cmscramble.gaussian import CovarianceState, direct_sum, tmsv_block, vacuum_state
from cmscramble.measures import (
    FIELDS,
    InfoSeries,
    bmi,
    evaluate_steps,
    info_record,
    log_negativity_tmsv_check,
    mode_columns,
    steady_state,
    tmi,
)

# 2 f(cosh(1)/2) and 2 f(cosh(2)/2), frozen with mpmath
TWO_F_COSH1_HALF = 1.3189059183360734034
TWO_F_COSH2_HALF = 3.23964418579540452872
PI2 = np.pi / 2


class TestBMI:
    def test_tmsv(self):
        assert bmi(CovarianceState(tmsv_block(0.5)), [0], [1]) == pytest.approx(TWO_F_COSH1_HALF, rel=1e-13)

    def test_vacuum_is_exactly_zero(self):
        assert bmi(vacuum_state(3), [0], [1, 2]) == 0.0

    def test_product_state(self):
        s = CovarianceState(direct_sum(tmsv_block(1.0), 0.5 * np.eye(2)))
        assert bmi(s, [0], [2]) == 0.0
        assert bmi(s, [0], [1, 2]) == pytest.approx(TWO_F_COSH2_HALF, rel=1e-13)

    @pytest.mark.parametrize("a, b", [([0], [0, 1]), ([], [1])])
    def test_bad_partition(self, a, b):
        with pytest.raises(PartitionError):
            bmi(vacuum_state(2), a, b)


class TestTMI:
    def test_vacuum(self):
        assert tmi(vacuum_state(3), [0], [1], [2]) == 0.0

    def test_tmsv_with_spectator(self):
        s = CovarianceState(direct_sum(tmsv_block(0.5), 0.5 * np.eye(2)))
        assert tmi(s, [0], [1], [2]) == pytest.approx(0.0, abs=1e-12)

    def test_overlap_rejected(self):
        with pytest.raises(PartitionError):
            tmi(vacuum_state(3), [0], [1], [1])


@pytest.mark.parametrize("xi, convention, expected", [
    (0.0, "appendix", 0.0),
    (0.5, "appendix", 1.0),
    (0.5, "charfn", 0.5),
    (0.25, "appendix", 0.5),
])
def test_log_negativity(xi, convention, expected):
    assert log_negativity_tmsv_check(xi, convention) == pytest.approx(expected, abs=1e-12)


class TestRecords:
    def test_initial_record(self):
        rec = info_record(next(iter_simulation(ExperimentConfig(xi=1.0))).state, 0, 2)
        assert rec.i2_s_m1 == pytest.approx(TWO_F_COSH2_HALF, abs=1e-10)
        assert rec.i2_s_m2 == 0.0
        assert rec.i3 == pytest.approx(0.0, abs=1e-10)

    def test_per_mode_columns(self):
        cfg = ExperimentConfig(n_memory=4, steps=3, per_mode_bmi=True, memory_disorder=0.5)
        series = evaluate_steps(iter_simulation(cfg), 4, per_mode=True)
        assert series.columns == list(FIELDS) + mode_columns(4)
        assert mode_columns(2) == ["bmi_mode_m1", "bmi_mode_m2"]
        np.testing.assert_array_equal(series.steps, [0, 1, 2, 3])
        arrays = series.as_arrays()
        assert set(arrays) == set(series.columns)
        assert arrays["bmi_mode_m1"][0] == pytest.approx(TWO_F_COSH2_HALF, abs=1e-10)
        with pytest.raises(KeyError):
            series.column("nope")

    def test_tmi_identity_in_records(self):
        cfg = ExperimentConfig(steps=20, squeeze=SqueezePattern("alternating", 0.5), memory_disorder=PI2)
        series = evaluate_steps(iter_simulation(cfg), 2)
        np.testing.assert_allclose(series.column("i3"),
                                   series.column("i2_s_m1") + series.column("i2_s_m2") - series.column("i2_s_m"),
                                   atol=1e-14)

    def test_empty_series(self):
        s = InfoSeries([], 2)
        assert len(s) == 0 and s.columns == list(FIELDS)


def test_steady_state():
    assert steady_state(np.arange(10.0)) == 8.5
    assert steady_state([1.0, 2.0, 3.0], 0.01) == 3.0


def test_alternating_parities_agree():
    common = dict(steps=25, eta=1.2, memory_disorder=0.8)
    a = evaluate_steps(iter_simulation(ExperimentConfig(squeeze=SqueezePattern("alternating", 0.5), **common)), 2)
    b = evaluate_steps(iter_simulation(
        ExperimentConfig(squeeze=SqueezePattern("alternating-swapped", 0.5), **common)), 2)
    for name in FIELDS:
        np.testing.assert_allclose(a.column(name), b.column(name), atol=1e-9)


@settings(max_examples=25, deadline=None)
@given(
    eta=st.floats(0.1, np.pi / 2 - 0.1),
    xi=st.floats(0.0, 1.5),
    r=st.floats(0.0, 1.0),
    delta=st.floats(0.0, 2 * np.pi),
    steps=st.integers(1, 12),
    seed=st.integers(0, 1000),
)
def test_information_properties(eta, xi, r, delta, steps, seed):
    cfg = ExperimentConfig(xi=xi, eta=eta, steps=steps, squeeze=SqueezePattern("alternating", r),
                           memory_disorder=delta, env_disorder=SamplerSpec("uniform", 0, 2 * np.pi), seed=seed)
    state = run_simulation(cfg, retain="latest").final.state
    n = state.n_modes
    s, m1, m2 = [0], [1], [2]
    rest = list(range(3, n))
    assert bmi(state, s, m1) >= 0
    assert bmi(state, s, m1 + m2) >= bmi(state, s, m1) - 1e-9
    assert tmi(state, s, m1, m2) == pytest.approx(
        bmi(state, s, m1) + bmi(state, s, m2) - bmi(state, s, m1 + m2), abs=1e-12)
    if rest:
        # pure global state: I2(S:A) + I2(S:complement) = 2 S(S)
        total = bmi(state, s, m1 + m2) + bmi(state, s, rest)
        assert total == pytest.approx(bmi(state, s, list(range(1, n))), rel=1e-7, abs=1e-9)
