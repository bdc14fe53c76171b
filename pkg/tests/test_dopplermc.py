"""Monte Carlo sweeps: seeding, reproducibility and output shape."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rydberg_dress import scenarios
from rydberg_dress.atomlib import DEFAULT_WAVEVECTORS, ThermalModel
from rydberg_dress.dopplermc import (
    THREADS_ENV,
    SweepSpec,
    default_threads,
    sample_noise,
    sample_rng,
    sweep,
)
from rydberg_dress.errors import ConfigError
from rydberg_dress.protocol import NoiseSample

TWO_PI = 2 * math.pi


def toy(noise: NoiseSample):
    """Cheap stand-in for a gate run."""
    return 1.0 - 1e-3 * (noise.delta_c**2 + noise.delta_t**2) - noise.delta_prime**2, noise.delta_c, 0.5


def test_sample_rng_is_keyed_on_all_indices():
    a = sample_rng(1, 2, 3).random(4)
    np.testing.assert_array_equal(a, sample_rng(1, 2, 3).random(4))
    assert not np.array_equal(a, sample_rng(1, 2, 4).random(4))
    assert not np.array_equal(a, sample_rng(1, 3, 3).random(4))
    assert not np.array_equal(a, sample_rng(2, 2, 3).random(4))


def test_noise_statistics():
    model = ThermalModel(1e-3)
    k = DEFAULT_WAVEVECTORS
    draws = [sample_noise(model, k, TWO_PI * 0.5, sample_rng(0, 0, s)) for s in range(4000)]
    dc = np.array([d.delta_c for d in draws])
    dt = np.array([d.delta_t for d in draws])
    dp = np.array([d.delta_prime for d in draws])
    sigma = k.k_r * model.v_rms
    assert np.std(dc) == pytest.approx(sigma, rel=0.05)
    assert np.std(dt) == pytest.approx(sigma, rel=0.05)
    assert abs(np.corrcoef(dc, dt)[0, 1]) < 0.05
    assert np.max(np.abs(dp)) <= TWO_PI * 0.5
    assert np.std(dp) == pytest.approx(TWO_PI * 0.5 / math.sqrt(3), rel=0.05)


def test_zero_bound_keeps_doppler_sequence():
    model = ThermalModel(1e-3)
    a = sample_noise(model, DEFAULT_WAVEVECTORS, 0.0, sample_rng(5, 0, 0))
    b = sample_noise(model, DEFAULT_WAVEVECTORS, 1.0, sample_rng(5, 0, 0))
    assert (a.delta_c, a.delta_t) == (b.delta_c, b.delta_t)
    assert a.delta_prime == 0.0


@given(st.integers(0, 1000), st.integers(1, 4))
def test_sweep_reproducible_across_threads(seed, threads):
    sw = SweepSpec("temperature", (1e-4, 1e-3), samples_per_point=12, master_seed=seed,
                   delta_prime_bound=0.3)
    one = sweep(None, sw, threads=1, evaluator=toy)
    many = sweep(None, sw, threads=threads, evaluator=toy)
    assert one.csv_rows() == many.csv_rows()


def test_stderr_and_degenerate_point():
    sw = SweepSpec("temperature", (0.0, 1e-3), samples_per_point=50, master_seed=3)
    res = sweep(None, sw, threads=1, evaluator=toy)
    zero, warm = res.rows
    assert zero.n_samples == 1 and zero.f_mean == 1.0 and zero.f_stderr == 0.0
    model = ThermalModel(1e-3)
    vals = [toy(sample_noise(model, DEFAULT_WAVEVECTORS, 0.0, sample_rng(3, 1, s)))[0] for s in range(50)]
    assert warm.f_mean == pytest.approx(np.mean(vals), rel=1e-14)
    assert warm.f_stderr == pytest.approx(np.std(vals, ddof=1) / math.sqrt(50), rel=1e-12)


def test_delta_axis_modes():
    grid = (-TWO_PI, 0.0, TWO_PI)
    common = sweep(None, SweepSpec("delta", grid), threads=1, evaluator=toy)
    control = sweep(None, SweepSpec("delta", grid, delta_mode="control"), threads=1, evaluator=toy)
    assert common.rows[0].f_mean == pytest.approx(1 - 2e-3 * TWO_PI**2)
    assert control.rows[0].f_mean == pytest.approx(1 - 1e-3 * TWO_PI**2)
    assert common.csv_rows()[0][0] == repr(-1.0)


def test_ratio2d_points_and_header():
    sw = SweepSpec("ratio2d", (0.0, 1e-3), grid2=(0.0, TWO_PI * 0.2), samples_per_point=3)
    assert sw.points() == [(0.0, 0.0), (0.0, TWO_PI * 0.2), (1e-3, 0.0), (1e-3, TWO_PI * 0.2)]
    assert sw.header() == ["T_K", "delta_prime_MHz", "F_mean", "F_stderr", "P_r_us", "P_a_us"]
    rows = sweep(None, sw, threads=1, evaluator=toy).csv_rows()
    assert rows[1][1] == repr(0.2)
    assert SweepSpec("temperature", (0.0,)).header() == ["T_K", "F_mean", "F_stderr", "P_r_us", "P_a_us"]


def test_sweep_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec("pressure", (1.0,))
    with pytest.raises(ConfigError):
        SweepSpec("temperature", ())
    with pytest.raises(ConfigError):
        SweepSpec("temperature", (1e-3, 0.0))
    with pytest.raises(ConfigError):
        SweepSpec("temperature", (-1e-3,))
    with pytest.raises(ConfigError):
        SweepSpec("ratio2d", (0.0,))
    with pytest.raises(ConfigError):
        SweepSpec("delta", (0.0,), delta_mode="target")
    with pytest.raises(ConfigError):
        SweepSpec("temperature", (0.0,), samples_per_point=0)
    with pytest.raises(ConfigError):
        sweep(None, SweepSpec("delta", (0.0,)))


def test_thread_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_threads() == 3
    monkeypatch.setenv(THREADS_ENV, "zero")
    with pytest.raises(ConfigError):
        default_threads()
    monkeypatch.setenv(THREADS_ENV, "0")
    with pytest.raises(ConfigError):
        default_threads()
    monkeypatch.delenv(THREADS_ENV)
    assert default_threads() >= 1


def test_real_gate_sweep_small():
    cfg = scenarios.load("t1-no-c").cfg
    sw = SweepSpec("temperature", (0.0, 1e-3), samples_per_point=3, master_seed=1)
    res = sweep(cfg, sw, threads=1)
    assert res.rows[0].f_mean == pytest.approx(0.99945, abs=5e-4)
    assert res.rows[1].f_mean < res.rows[0].f_mean
    assert res.rows[1].p_r > 0


def test_stderr_shrinks_as_inverse_sqrt_n():
    small = sweep(None, SweepSpec("temperature", (1e-3,), samples_per_point=75, master_seed=9),
                  threads=1, evaluator=toy).rows[0].f_stderr
    large = sweep(None, SweepSpec("temperature", (1e-3,), samples_per_point=300, master_seed=9),
                  threads=1, evaluator=toy).rows[0].f_stderr
    # 2x expected; sample-to-sample scatter of the std itself is well under 30% here
    assert small / large == pytest.approx(2.0, rel=0.3)


def test_degenerate_point_equals_deterministic_gate():
    from rydberg_dress.gatemetrics import gate_fidelity
    cfg = scenarios.load("t1-no-c").cfg
    row = sweep(cfg, SweepSpec("temperature", (0.0,), samples_per_point=300), threads=1).rows[0]
    assert row.f_mean == gate_fidelity(cfg).fidelity
