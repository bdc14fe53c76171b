"""JSON run configuration.

Keys ending in ``_mhz`` are frequencies ``f`` given as ``ω/2π`` and are
multiplied by ``2π`` on load; keys ending in ``_rate_per_us`` are plain decay
rates. Unknown keys are rejected. A document may start from a built-in
scenario (``"scenario": "<id>"``) and override individual entries.

Example::

    {
      "scenario": "t1-with-c",
      "protocol": {"gamma_a_mhz": 0.5},
      "integrator": {"samples_per_period": 40},
      "sweep": {"axis": "temperature", "grid": [0, 0.001], "samples": 50, "seed": 7}
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from . import scenarios
from .dopplermc import SweepSpec
from .errors import ConfigError
from .evolve import IntegratorSpec
from .protocol import GAMMA_AUX, GAMMA_P, GAMMA_RYDBERG, V_DEFAULT, ProtocolConfig
from .pulseshape import DressingConfig, GaussianAmplitude, PhaseProfile, PulseSet

TWO_PI = 2.0 * math.pi

SECTIONS = {"scenario", "protocol", "pulses", "integrator", "sweep"}
PROTOCOL_KEYS = {
    "kind", "chi", "v_mhz",
    "gamma_r_rate_per_us", "gamma_r_mhz", "gamma_a_rate_per_us", "gamma_a_mhz",
    "gamma_s_rate_per_us", "gamma_s_mhz", "gamma_p_rate_per_us", "gamma_p_mhz",
    "gamma_pp_rate_per_us", "gamma_pp_mhz",
}
PULSE_KEYS = {
    "t_gate_us", "omega_max_mhz", "width_us", "omega_max_p_mhz", "width_p_us",
    "delta0_mhz", "delta1_2pi", "delta2_2pi", "alpha", "phase_kind",
    "omega_d_mhz", "delta_d_mhz", "dressing_ratio",
}
INTEGRATOR_KEYS = {"dt_us", "samples_per_period"}
SWEEP_KEYS = {
    "axis", "grid", "grid2", "samples", "seed", "delta_mode", "temperature_K",
    "delta_prime_bound_mhz",
}


@dataclass(frozen=True)
class RunConfig:
    protocol: ProtocolConfig
    integrator: IntegratorSpec
    sweep: SweepSpec | None = None
    scenario: str | None = None


def _check_keys(section: str, doc: dict, allowed: set[str]) -> None:
    if not isinstance(doc, dict):
        raise ConfigError(f"section {section!r} must be an object")
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {section!r}: {', '.join(unknown)}")


def _num(doc: dict, key: str, default: float | None = None) -> float | None:
    if key not in doc:
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{key} must be a finite number, got {value!r}")
    return float(value)


def _rate(doc: dict, name: str, default: float) -> float:
    plain = f"{name}_rate_per_us"
    angular = f"{name}_mhz"
    if plain in doc and angular in doc:
        raise ConfigError(f"give either {plain} or {angular}, not both")
    if plain in doc:
        return _num(doc, plain)
    if angular in doc:
        return TWO_PI * _num(doc, angular)
    return default


def _pulses(doc: dict, base: PulseSet | None) -> PulseSet:
    _check_keys("pulses", doc, PULSE_KEYS)
    if base is None:
        required = {"t_gate_us", "omega_max_mhz", "width_us", "omega_max_p_mhz", "width_p_us"}
        missing = sorted(required - set(doc))
        if missing:
            raise ConfigError(f"pulses section is missing: {', '.join(missing)}")
    b = base
    t_gate = _num(doc, "t_gate_us", b.t_gate if b else None)
    amp_r = GaussianAmplitude(
        _mhz(doc, "omega_max_mhz", b.amp_r.omega_max if b else None),
        _num(doc, "width_us", b.amp_r.width if b else None),
        t_gate,
    )
    amp_rp = GaussianAmplitude(
        _mhz(doc, "omega_max_p_mhz", b.amp_rp.omega_max if b else None),
        _num(doc, "width_p_us", b.amp_rp.width if b else None),
        t_gate,
    )
    ph = b.phase if b else PhaseProfile(kind="linear")
    kind = doc.get("phase_kind", ph.kind)
    if not isinstance(kind, str):
        raise ConfigError("phase_kind must be a string")
    phase = PhaseProfile(
        _mhz(doc, "delta0_mhz", ph.delta0),
        TWO_PI * _num(doc, "delta1_2pi", ph.delta1 / TWO_PI),
        TWO_PI * _num(doc, "delta2_2pi", ph.delta2 / TWO_PI),
        _num(doc, "alpha", ph.alpha),
        kind,
    )
    dr = b.dressing if b else DressingConfig()
    omega_d = _mhz(doc, "omega_d_mhz", dr.omega_d)
    if "delta_d_mhz" in doc and "dressing_ratio" in doc:
        raise ConfigError("give either delta_d_mhz or dressing_ratio, not both")
    if "dressing_ratio" in doc:
        ratio = _num(doc, "dressing_ratio")
        if not ratio > 0:
            raise ConfigError("dressing_ratio must be positive")
        delta_d = omega_d / ratio
    else:
        delta_d = _mhz(doc, "delta_d_mhz", dr.delta_d)
    dressing = DressingConfig(omega_d, delta_d, omega_d > 0) if omega_d > 0 else DressingConfig()
    return PulseSet(amp_r, amp_rp, phase, dressing, t_gate)


def _mhz(doc: dict, key: str, default: float | None) -> float | None:
    if key in doc:
        return TWO_PI * _num(doc, key)
    return default


def _protocol(doc: dict, pulses: PulseSet, base: ProtocolConfig | None) -> ProtocolConfig:
    _check_keys("protocol", doc, PROTOCOL_KEYS)
    kind = doc.get("kind", base.kind if base else None)
    if kind is None:
        raise ConfigError("protocol.kind is required when no scenario is given")
    excited_default = GAMMA_AUX if kind == "excited" else 0.0
    ground = kind == "ground"
    return ProtocolConfig(
        kind=kind,
        pulses=pulses,
        v=_mhz(doc, "v_mhz", base.v if base else V_DEFAULT),
        chi=_num(doc, "chi", base.chi if base else 1.627),
        gamma_r=_rate(doc, "gamma_r", base.gamma_r if base else (0.0 if ground else GAMMA_RYDBERG)),
        gamma_a=_rate(doc, "gamma_a", base.gamma_a if base else excited_default),
        gamma_s=_rate(doc, "gamma_s", base.gamma_s if base else (GAMMA_RYDBERG if ground else 0.0)),
        gamma_p=_rate(doc, "gamma_p", base.gamma_p if base else (GAMMA_P if ground else 0.0)),
        gamma_pp=_rate(doc, "gamma_pp", base.gamma_pp if base else (GAMMA_P if ground else 0.0)),
    )


def _integrator(doc: dict) -> IntegratorSpec:
    _check_keys("integrator", doc, INTEGRATOR_KEYS)
    spec = IntegratorSpec()
    if "samples_per_period" in doc:
        spp = doc["samples_per_period"]
        if isinstance(spp, bool) or not isinstance(spp, int):
            raise ConfigError("samples_per_period must be an integer")
        spec = replace(spec, samples_per_dressing_period=spp)
    if "dt_us" in doc:
        spec = replace(spec, dt=_num(doc, "dt_us"))
    return spec


def _grid(values: Any, key: str) -> tuple[float, ...]:
    if not isinstance(values, list) or not values:
        raise ConfigError(f"sweep.{key} must be a nonempty list of numbers")
    return tuple(_num({key: v}, key) for v in values)


def sweep_from_dict(doc: dict) -> SweepSpec:
    _check_keys("sweep", doc, SWEEP_KEYS)
    axis = doc.get("axis")
    if axis is None:
        raise ConfigError("sweep.axis is required")
    grid = _grid(doc.get("grid"), "grid")
    scale = TWO_PI if axis in ("delta", "delta_prime") else 1.0
    grid2 = _grid(doc["grid2"], "grid2") if "grid2" in doc else ()
    samples = doc.get("samples", 300)
    seed = doc.get("seed", 0)
    for name, value in (("samples", samples), ("seed", seed)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"sweep.{name} must be an integer")
    return SweepSpec(
        axis=axis,
        grid=tuple(g * scale for g in grid),
        samples_per_point=samples,
        master_seed=seed,
        delta_mode=doc.get("delta_mode", "common"),
        temperature=_num(doc, "temperature_K", 0.0),
        delta_prime_bound=TWO_PI * _num(doc, "delta_prime_bound_mhz", 0.0),
        grid2=tuple(g * TWO_PI for g in grid2),
    )


def from_dict(doc: dict) -> RunConfig:
    """Parse a configuration document (already decoded from JSON)."""
    _check_keys("top level", doc, SECTIONS)
    sid = doc.get("scenario")
    base = None
    if sid is not None:
        scn = scenarios.load(sid)
        if scn.cfg is None:
            raise ConfigError(f"scenario {sid!r} is a single-atom transfer, not a gate")
        base = scn.cfg
    pulses = _pulses(doc.get("pulses", {}), base.pulses if base else None)
    protocol = _protocol(doc.get("protocol", {}), pulses, base)
    integrator = _integrator(doc.get("integrator", {}))
    sweep = sweep_from_dict(doc["sweep"]) if "sweep" in doc else None
    return RunConfig(protocol, integrator, sweep, sid)


def load_config(path: str | Path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return from_dict(doc)
