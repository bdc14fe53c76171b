"""Drive envelopes: Gaussian amplitudes, phase profiles and the dressing field.

Internal units are rad/μs for every frequency and μs for times. The
``*_mhz`` helpers accept the table convention (``2π × MHz`` for Rabi
frequencies and phase slopes, ``2π`` for the phase coefficients).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, OutOfWindow

TWO_PI = 2.0 * math.pi
PHASE_KINDS = ("linear", "composite", "generalized")
_WINDOW_SLACK = 1e-12


def _check_window(t, t_gate: float) -> None:
    arr = np.asarray(t, dtype=float)
    slack = _WINDOW_SLACK * max(t_gate, 1.0)
    if np.any(arr < -slack) or np.any(arr > t_gate + slack):
        raise OutOfWindow(f"time {t} outside the gate window [0, {t_gate}] μs")


@dataclass(frozen=True)
class GaussianAmplitude:
    """``Ω_max · exp(−(t − T_g/2)² / (2 width²))``."""

    omega_max: float
    width: float
    t_gate: float

    def __post_init__(self) -> None:
        if self.omega_max < 0:
            raise ConfigError(f"omega_max must be >= 0, got {self.omega_max}")
        if not self.width > 0:
            raise ConfigError(f"pulse width must be > 0, got {self.width}")
        if not self.t_gate > 0:
            raise ConfigError(f"t_gate must be > 0, got {self.t_gate}")

    def evaluate(self, t):
        """Unchecked vectorized evaluation (no window test)."""
        t = np.asarray(t, dtype=float)
        return self.omega_max * np.exp(-((t - 0.5 * self.t_gate) ** 2) / (2.0 * self.width**2))


@dataclass(frozen=True)
class PhaseProfile:
    """Laser phase ``δ₀t + δ₁ sin(4πt/T_g) + δ₂ cos(απt/T_g)``.

    ``linear`` keeps only the slope, ``composite`` fixes ``α = 2`` and
    ``generalized`` leaves ``α`` free.
    """

    delta0: float = 0.0
    delta1: float = 0.0
    delta2: float = 0.0
    alpha: float = 2.0
    kind: str = "composite"

    def __post_init__(self) -> None:
        if self.kind not in PHASE_KINDS:
            raise ConfigError(f"unknown phase kind {self.kind!r}; expected one of {PHASE_KINDS}")
        if self.kind == "linear" and (self.delta1 != 0.0 or self.delta2 != 0.0):
            raise ConfigError("a linear phase profile cannot carry delta1/delta2")
        if self.kind == "composite" and self.alpha != 2.0:
            raise ConfigError("the composite phase profile uses alpha = 2")

    def evaluate(self, t, t_gate: float):
        t = np.asarray(t, dtype=float)
        out = self.delta0 * t
        if self.kind != "linear":
            out = out + self.delta1 * np.sin(4.0 * math.pi * t / t_gate)
            out = out + self.delta2 * np.cos(self.alpha * math.pi * t / t_gate)
        return out


@dataclass(frozen=True)
class DressingConfig:
    omega_d: float = 0.0
    delta_d: float = 0.0
    enabled: bool = False

    def __post_init__(self) -> None:
        if self.omega_d < 0:
            raise ConfigError(f"omega_d must be >= 0, got {self.omega_d}")
        if self.enabled and not self.delta_d > 0:
            raise ConfigError(f"an enabled dressing field needs delta_d > 0, got {self.delta_d}")

    @property
    def ratio(self) -> float:
        """``Ω_d / Δ_d`` (0 when disabled)."""
        return self.omega_d / self.delta_d if self.enabled else 0.0

    def evaluate(self, t):
        """Real coupling ``Ω_d (e^{iΔt} + e^{−iΔt}) / 2 = Ω_d cos(Δ_d t)``."""
        t = np.asarray(t, dtype=float)
        if not self.enabled:
            return np.zeros_like(t)
        return self.omega_d * np.cos(self.delta_d * t)


NO_DRESSING = DressingConfig()


@dataclass(frozen=True)
class PulseSet:
    amp_r: GaussianAmplitude
    amp_rp: GaussianAmplitude
    phase: PhaseProfile = field(default_factory=PhaseProfile)
    dressing: DressingConfig = NO_DRESSING
    t_gate: float | None = None

    def __post_init__(self) -> None:
        tg = self.t_gate if self.t_gate is not None else self.amp_r.t_gate
        object.__setattr__(self, "t_gate", tg)
        for amp in (self.amp_r, self.amp_rp):
            if not math.isclose(amp.t_gate, tg, rel_tol=0, abs_tol=1e-12):
                raise ConfigError(f"amplitude window {amp.t_gate} differs from t_gate {tg}")

    def with_dressing(self, dressing: DressingConfig) -> "PulseSet":
        return replace(self, dressing=dressing)


def amplitude_at(a: GaussianAmplitude, t: float) -> float:
    _check_window(t, a.t_gate)
    return float(a.evaluate(t))


def phase_at(p: PhaseProfile, t: float, t_gate: float) -> float:
    _check_window(t, t_gate)
    return float(p.evaluate(t, t_gate))


def complex_rabi(pulses: PulseSet, which: str, t):
    """Complex Rabi frequency ``|Ω(t)| e^{iφ(t)}`` for ``which`` in {"r", "rp"}.

    Both drives share the phase profile. Accepts scalars or arrays.
    """
    _check_window(t, pulses.t_gate)
    return _complex_rabi(pulses, which, t)


def _complex_rabi(pulses: PulseSet, which: str, t):
    if which == "r":
        amp = pulses.amp_r
    elif which in ("rp", "r'", "r′"):
        amp = pulses.amp_rp
    else:
        raise ConfigError(f"unknown drive {which!r}; expected 'r' or 'rp'")
    value = amp.evaluate(t) * np.exp(1j * pulses.phase.evaluate(t, pulses.t_gate))
    return complex(value) if np.ndim(value) == 0 else value


def pulses_from_table(
    t_gate: float,
    omega_max_mhz: float,
    width: float,
    omega_max_p_mhz: float,
    width_p: float,
    delta0_mhz: float = 0.0,
    delta1_2pi: float = 0.0,
    delta2_2pi: float = 0.0,
    alpha: float = 2.0,
    kind: str = "composite",
    omega_d_mhz: float | None = None,
    delta_d_mhz: float | None = None,
) -> PulseSet:
    """Build a :class:`PulseSet` from table-style numbers (2π·MHz, 2π·rad)."""
    phase = PhaseProfile(TWO_PI * delta0_mhz, TWO_PI * delta1_2pi, TWO_PI * delta2_2pi, alpha, kind)
    if omega_d_mhz is None:
        dressing = NO_DRESSING
    else:
        dressing = DressingConfig(TWO_PI * omega_d_mhz, TWO_PI * delta_d_mhz, True)
    return PulseSet(
        GaussianAmplitude(TWO_PI * omega_max_mhz, width, t_gate),
        GaussianAmplitude(TWO_PI * omega_max_p_mhz, width_p, t_gate),
        phase,
        dressing,
        t_gate,
    )
