"""Pulse envelopes, phase profiles and the dressing coupling."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rydberg_dress.errors import ConfigError, OutOfWindow
from rydberg_dress.pulseshape import (
    DressingConfig,
    GaussianAmplitude,
    NO_DRESSING,
    PhaseProfile,
    PulseSet,
    amplitude_at,
    complex_rabi,
    phase_at,
    pulses_from_table,
)

TWO_PI = 2 * math.pi


def test_gaussian_peak_and_width():
    a = GaussianAmplitude(TWO_PI * 10, 0.1, 1.0)
    assert amplitude_at(a, 0.5) == pytest.approx(TWO_PI * 10)
    assert amplitude_at(a, 0.6) == pytest.approx(TWO_PI * 10 * math.exp(-0.5))


@given(st.floats(0.0, 1.0))
def test_gaussian_symmetric_about_center(t):
    a = GaussianAmplitude(3.0, 0.2, 1.0)
    assert amplitude_at(a, t) == pytest.approx(amplitude_at(a, 1.0 - t), rel=1e-12)


def test_window_is_enforced():
    a = GaussianAmplitude(1.0, 0.1, 1.0)
    with pytest.raises(OutOfWindow):
        amplitude_at(a, 1.01)
    with pytest.raises(OutOfWindow):
        phase_at(PhaseProfile(), -0.1, 1.0)
    amplitude_at(a, 1.0 + 1e-14)  # round-off slack at the edge


def test_phase_profiles():
    tg = 2.0
    lin = PhaseProfile(3.0, kind="linear")
    assert phase_at(lin, 0.5, tg) == pytest.approx(1.5)
    comp = PhaseProfile(3.0, 0.4, -0.7, kind="composite")
    t = 0.3
    expect = 3.0 * t + 0.4 * math.sin(4 * math.pi * t / tg) - 0.7 * math.cos(2 * math.pi * t / tg)
    assert phase_at(comp, t, tg) == pytest.approx(expect)
    gen = PhaseProfile(3.0, 0.4, -0.7, 1.3, kind="generalized")
    expect = 3.0 * t + 0.4 * math.sin(4 * math.pi * t / tg) - 0.7 * math.cos(1.3 * math.pi * t / tg)
    assert phase_at(gen, t, tg) == pytest.approx(expect)


def test_phase_profile_validation():
    with pytest.raises(ConfigError):
        PhaseProfile(kind="cubic")
    with pytest.raises(ConfigError):
        PhaseProfile(1.0, 0.5, kind="linear")
    with pytest.raises(ConfigError):
        PhaseProfile(alpha=1.5, kind="composite")


def test_dressing_is_real_cosine():
    d = DressingConfig(TWO_PI * 200, TWO_PI * 288.5, True)
    t = np.linspace(0, 1, 7)
    np.testing.assert_allclose(d.evaluate(t), TWO_PI * 200 * np.cos(TWO_PI * 288.5 * t))
    assert d.ratio == pytest.approx(200 / 288.5)
    np.testing.assert_array_equal(NO_DRESSING.evaluate(t), 0.0)
    assert NO_DRESSING.ratio == 0.0
    with pytest.raises(ConfigError):
        DressingConfig(1.0, 0.0, True)
    with pytest.raises(ConfigError):
        DressingConfig(-1.0, 1.0, True)


@given(st.floats(0.0, 0.62))
def test_complex_rabi_modulus_and_phase(t):
    p = pulses_from_table(0.62, 9.19, 0.1018, 8.96, 0.1026, -0.117, 0.589, -0.0006)
    w = complex_rabi(p, "r", t)
    assert abs(w) == pytest.approx(amplitude_at(p.amp_r, t), rel=1e-12, abs=1e-12)
    if abs(w) > 1e-6:
        assert np.angle(w * np.exp(-1j * phase_at(p.phase, t, 0.62))) == pytest.approx(0.0, abs=1e-9)
    w2 = complex_rabi(p, "rp", t)
    assert abs(w2) == pytest.approx(amplitude_at(p.amp_rp, t), rel=1e-12, abs=1e-12)


def test_complex_rabi_vectorized_and_bad_drive():
    p = pulses_from_table(1.0, 10.0, 0.2, 10.0, 0.2)
    t = np.linspace(0, 1, 5)
    out = complex_rabi(p, "r", t)
    assert out.shape == (5,)
    assert out[2] == pytest.approx(TWO_PI * 10)
    with pytest.raises(ConfigError):
        complex_rabi(p, "x", 0.5)


def test_table_units():
    p = pulses_from_table(3.6, 9.89, 0.1091, 9.95, 0.1093, -4.77, -0.57, -2.07,
                          omega_d_mhz=201.4, delta_d_mhz=288.5)
    assert p.amp_r.omega_max == pytest.approx(TWO_PI * 9.89)
    assert p.phase.delta0 == pytest.approx(TWO_PI * -4.77)
    assert p.phase.delta1 == pytest.approx(TWO_PI * -0.57)
    assert p.dressing.enabled and p.dressing.delta_d == pytest.approx(TWO_PI * 288.5)
    assert p.t_gate == 3.6


def test_pulse_set_window_mismatch():
    with pytest.raises(ConfigError):
        PulseSet(GaussianAmplitude(1, 0.1, 1.0), GaussianAmplitude(1, 0.1, 2.0))
    with pytest.raises(ConfigError):
        GaussianAmplitude(1.0, 0.0, 1.0)


@given(st.floats(1e-3, 1.0 - 1e-3), st.floats(-50, 50))
def test_linear_phase_slope(t, d0):
    p = PhaseProfile(d0, kind="linear")
    h = 1e-4
    lo, hi = max(t - h, 0.0), min(t + h, 1.0)
    slope = (phase_at(p, hi, 1.0) - phase_at(p, lo, 1.0)) / (hi - lo)
    assert slope == pytest.approx(d0, rel=1e-6, abs=1e-9)


def test_generalized_alpha_two_is_composite():
    t = np.linspace(0, 2.5, 1000)
    comp = PhaseProfile(1.1, -0.4, 0.9, kind="composite")
    gen = PhaseProfile(1.1, -0.4, 0.9, 2.0, kind="generalized")
    np.testing.assert_array_equal(comp.evaluate(t, 2.5), gen.evaluate(t, 2.5))
