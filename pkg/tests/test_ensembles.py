import numpy as np
import pytest

from cmscramble.config import ExperimentConfig, SamplerSpec, SqueezePattern
from cmscramble.disorder import StaticDisorder, draw_static_disorder
from cmscramble.engine import iter_simulation, step_couplers
from cmscramble.ensembles import aggregate, ensemble, sample_run
from cmscramble.measures import FIELDS, evaluate_steps

PI = np.pi
BASE = ExperimentConfig(steps=12, squeeze=SqueezePattern("alternating", 0.5), memory_disorder=PI / 2)
DISORDERED = BASE.replace(env_disorder=SamplerSpec("uniform", 0, 2 * PI))


def test_inactive_samplers_reproduce_deterministic_run():
    stats = ensemble(BASE, 3)
    ref = evaluate_steps(iter_simulation(BASE, StaticDisorder.none(BASE)), 2).as_arrays()
    for col in FIELDS:
        np.testing.assert_allclose(stats.mean[col], ref[col], rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(stats.std[col], 0.0, atol=1e-14)


def test_single_sample_has_zero_spread():
    stats = ensemble(DISORDERED, 1)
    assert stats.n_samples == 1
    np.testing.assert_array_equal(stats.std["i3"], 0.0)


def test_same_seed_same_statistics():
    a = ensemble(DISORDERED, 4)
    b = ensemble(DISORDERED, 4)
    for col in a.columns:
        np.testing.assert_array_equal(a.mean[col], b.mean[col])
        np.testing.assert_array_equal(a.std[col], b.std[col])


def test_different_seed_changes_draws():
    a = draw_static_disorder(DISORDERED, 0).env_phases
    b = draw_static_disorder(DISORDERED.replace(seed=1), 0).env_phases
    c = draw_static_disorder(DISORDERED, 1).env_phases
    assert not np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.all((a >= 0) & (a < 2 * PI))


def test_aggregation_is_order_independent():
    samples = [sample_run(DISORDERED, i).as_arrays() for i in range(6)]
    steps = np.arange(BASE.steps + 1)
    fwd = aggregate(samples, steps)
    rev = aggregate(samples[::-1], steps)
    for col in fwd.columns:
        np.testing.assert_allclose(rev.mean[col], fwd.mean[col], atol=1e-12, rtol=0)
        np.testing.assert_allclose(rev.std[col], fwd.std[col], atol=1e-12, rtol=0)


def test_std_uses_unbiased_estimator():
    samples = [{"x": np.array([1.0, 0.0])}, {"x": np.array([3.0, 0.0])}]
    stats = aggregate(samples, np.arange(2))
    np.testing.assert_array_equal(stats.mean["x"], [2.0, 0.0])
    np.testing.assert_allclose(stats.std["x"], [np.sqrt(2.0), 0.0])


def test_parallel_matches_serial():
    serial = ensemble(DISORDERED, 4, workers=1)
    parallel = ensemble(DISORDERED, 4, workers=2)
    for col in serial.columns:
        np.testing.assert_array_equal(serial.mean[col], parallel.mean[col])


def test_imperfections_stay_in_range():
    cfg = BASE.replace(eta=2 * PI / 5, imperfection=SamplerSpec("uniform", 0, PI / 10))
    for i in range(5):
        dis = draw_static_disorder(cfg, i)
        assert dis.coupler_offsets.shape == (cfg.n_memory + cfg.steps,)
        for _, c in step_couplers(cfg, cfg.n_memory + cfg.steps, dis):
            assert cfg.eta <= c.eta <= PI / 2


def test_rejects_empty_ensemble():
    with pytest.raises(ValueError):
        ensemble(BASE, 0)
