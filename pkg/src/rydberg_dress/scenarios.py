"""Built-in parameter sets with their reference observables.

The raw numbers are stored once, in table units (``2π × MHz`` for
frequencies, ``2π`` for phase coefficients, μs for times), and a SHA-256
digest over them is checked on every load so that an accidental edit is
caught immediately.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

from .errors import ConfigError, UnknownScenario
from .protect import TransferConfig
from .protocol import GAMMA_AUX, GAMMA_P, GAMMA_RYDBERG, V_DEFAULT, ProtocolConfig
from .pulseshape import DressingConfig, NO_DRESSING, pulses_from_table

TWO_PI = 2.0 * math.pi

# gate rows: T_g, Ω_max, ω, Ω'_max, ω', δ₀, δ₁, δ₂, α, Ω_d, Δ_d (None = no dressing)
_GATES = {
    "t1-no-l": dict(kind="none", phase="linear", chi=1.627,
                    row=[1.00, 9.87, 0.1946, 10.0, 0.1938, 4.90, 0.0, 0.0, 2.0, None, None]),
    "t1-no-c": dict(kind="none", phase="composite", chi=1.627,
                    row=[0.62, 9.19, 0.1018, 8.96, 0.1026, -0.117, 0.589, -0.0006, 2.0, None, None]),
    "t1-with-l": dict(kind="excited", phase="linear", chi=1.627, tau_a=None,
                      row=[3.18, 9.56, 0.1007, 9.59, 0.1007, -4.97, 0.0, 0.0, 2.0, 195.7, "tie:0.698"]),
    "t1-with-c": dict(kind="excited", phase="composite", chi=1.627, tau_a=None,
                      row=[3.60, 9.89, 0.1091, 9.95, 0.1093, -4.77, -0.57, -2.07, 2.0, 201.4, 288.5]),
    "t3-rb-1.484": dict(kind="excited", phase="composite", chi=1.484, tau_a=0.158,
                        row=[3.59, 9.70, 0.1086, 9.70, 0.1080, -15.0, 2.72, 0.874, 2.0, 262.4, 362.0]),
    "t3-cs-1.554": dict(kind="excited", phase="composite", chi=1.554, tau_a=0.200,
                        row=[3.55, 9.43, 0.1073, 9.47, 0.1075, -7.37, 0.54, -0.98, 2.0, 218.6, 307.3]),
    "t3-virtual-15": dict(kind="excited", phase="composite", chi=15.0, tau_a=None,
                          row=[2.12, 10.00, 0.2383, 9.12, 0.2573, 10.00, -1.09, -0.15, 2.0, 240.0, 945.4]),
    "s6-ground": dict(kind="ground", phase="composite", chi=4.202,
                      row=[0.8, 8.39, 0.1179, 7.94, 0.1287, -14.81, 1.16, -0.014, 2.0, 163.0, 352.0]),
    "t5-with-c-improve": dict(kind="excited", phase="generalized", chi=1.627, tau_a=None,
                              row=[2.54, 19.64, 0.0769, 19.29, 0.0768, -10.44, 1.93, 16.56, 1.288,
                                   225.53, 323.11]),
    "t5-with-c-g-improve": dict(kind="ground", phase="generalized", chi=4.202,
                                row=[1.14, 19.85, 0.1179, 19.38, 0.1202, 20.0, 0.90, -15.99, 0.002,
                                     173.36, 374.42]),
}

# single-atom transfer columns: Ω_r, Ω_d, Δ_d, χ (τ = 1 μs)
_TRANSFERS = {
    "t4-nodress": [1.0, None, None, 1.0],
    "t4-chi-0.5": [10.0, 200.0, 45.0, 0.5],
    "t4-chi-1": [3.0, 85.0, 35.0, 1.0],
    "t4-chi-50": [4.0, 183.0, 460.0, 50.0],
}

# observable -> [low, high, note]; see Expected for the observable names
_EXPECTED = {
    "t1-no-l": {"fidelity_ideal": [0.99445, 1.0, "0.99945 ± 0.005"]},
    "t1-no-c": {"fidelity_ideal": [0.99459, 1.0, "0.99959 ± 0.005"],
                "infidelity_delta_1mhz": [0.05, 0.2, "no dressing, δ/2π = 1 MHz"]},
    "t1-with-l": {"fidelity_ideal": [0.99226, 1.0, "0.99726 ± 0.005"]},
    "t1-with-c": {"fidelity_ideal": [0.99471, 1.0, "0.99971 ± 0.005"],
                  "fidelity@T=0.001": [0.9866, 0.9946, "0.9906 ± 0.004, 300 samples"],
                  "fidelity@T=0.005": [0.9866, 0.9946, "0.9906 ± 0.004, 300 samples"]},
    "t3-rb-1.484": {"fidelity_ideal": [0.99380, 1.0, "0.99880 ± 0.005"],
                    "p_r": [0.0717, 0.1075, "0.0896 μs ± 20%"],
                    "p_a": [0.0490, 0.0734, "0.0612 μs ± 20%"]},
    "t3-cs-1.554": {"fidelity_ideal": [0.99397, 1.0, "0.99897 ± 0.005"],
                    "p_r": [0.0782, 0.1172, "0.0977 μs ± 20%"],
                    "p_a": [0.0510, 0.0766, "0.0638 μs ± 20%"]},
    "t3-virtual-15": {"fidelity_ideal": [0.99497, 1.0, "0.99997 ± 0.005"],
                      "p_r": [0.2270, 0.3404, "0.2837 μs ± 20%"],
                      "p_a": [0.0154, 0.0230, "0.0192 μs ± 20%"]},
    "s6-ground": {"fidelity@T=5e-05": [0.9925, 1.0, "0.9965 ± 0.004, 300 samples"],
                  "fidelity@T=0.005": [0.9842, 0.9942, "0.9892 ± 0.005, 300 samples"]},
    "t5-with-c-improve": {"fidelity": [0.99247, 0.99847, "0.99547 ± 0.003 at T = 0"]},
    "t5-with-c-g-improve": {"fidelity": [0.9995, 1.0, "≥ 0.9995 at T = 0"]},
    "t4-nodress": {"infidelity_delta_1mhz": [0.3, 0.6, "≈ 0.5 at δ/2π = 1 MHz"]},
    "t4-chi-0.5": {"infidelity_max": [1e-3, 1e-1, "order 1e-2"]},
    "t4-chi-1": {"infidelity_max": [0.0, 5e-4, "< 5e-4 over |δ|/2π ≤ 1 MHz"]},
    "t4-chi-50": {"infidelity_max": [0.0, 1e-4, "< 1e-4 over |δ|/2π ≤ 1 MHz"]},
}

_TITLES = {
    "t1-no-l": "no dressing, linear phase",
    "t1-no-c": "no dressing, composite phase",
    "t1-with-l": "excited-state dressing, linear phase",
    "t1-with-c": "excited-state dressing, composite phase",
    "t3-rb-1.484": "Rb case (a), chi = 1.484",
    "t3-cs-1.554": "Cs case (g), chi = 1.554",
    "t3-virtual-15": "virtual chi = 15",
    "s6-ground": "ground-state dressing with Forster exchange",
    "t5-with-c-improve": "excited-state dressing, larger amplitudes",
    "t5-with-c-g-improve": "ground-state dressing, larger amplitudes",
    "t4-nodress": "single-atom transfer without dressing",
    "t4-chi-0.5": "single-atom transfer, chi = 0.5",
    "t4-chi-1": "single-atom transfer, chi = 1",
    "t4-chi-50": "single-atom transfer, chi = 50",
}

_CHECKSUM = "ae69192a39385d5d188f4af3ae25f627fca502b02401027669ccb4d4903a4e0f"


def _digest() -> str:
    blob = json.dumps([_GATES, _TRANSFERS, _EXPECTED], sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class Expected:
    """Acceptance window for one observable.

    Observable names: ``fidelity_ideal`` (no decay, no noise), ``fidelity``
    (with decays, no noise), ``fidelity@T=<kelvin>`` (with decays, thermal
    Monte Carlo), ``p_r``/``p_a`` (ideal run), ``infidelity_delta_1mhz`` and
    ``infidelity_max`` (over ``|δ|/2π ≤ 1 MHz``).
    """

    low: float
    high: float
    note: str

    def contains(self, value: float) -> bool:
        return self.low <= value <= self.high


@dataclass(frozen=True)
class NamedScenario:
    id: str
    title: str
    cfg: ProtocolConfig | None = None
    transfer: TransferConfig | None = None
    expected: dict[str, Expected] = field(default_factory=dict)
    table_ratio: float | None = None  # Ω_d/Δ_d as printed

    @property
    def is_transfer(self) -> bool:
        return self.transfer is not None


def _gate(sid: str) -> NamedScenario:
    d = _GATES[sid]
    t_g, om, w, omp, wp, d0, d1, d2, alpha, od, dd = d["row"]
    ratio = None
    if isinstance(dd, str):
        ratio = float(dd.split(":")[1])
        dd = od / ratio
    elif od is not None:
        ratio = od / dd
    pulses = pulses_from_table(t_g, om, w, omp, wp, d0, d1, d2, alpha, d["phase"],
                               omega_d_mhz=od, delta_d_mhz=dd)
    if d["kind"] == "ground":
        cfg = ProtocolConfig("ground", pulses, V_DEFAULT, d["chi"], gamma_s=GAMMA_RYDBERG,
                             gamma_p=GAMMA_P, gamma_pp=GAMMA_P)
    elif d["kind"] == "excited":
        # the alternate-species rows use 1/τ_a of their auxiliary level, the rest 2π × 1 MHz
        gamma_a = 1.0 / d["tau_a"] if d.get("tau_a") else GAMMA_AUX
        cfg = ProtocolConfig("excited", pulses, V_DEFAULT, d["chi"], gamma_r=GAMMA_RYDBERG,
                             gamma_a=gamma_a)
    else:
        cfg = ProtocolConfig("none", pulses, V_DEFAULT, d["chi"], gamma_r=GAMMA_RYDBERG)
    return NamedScenario(sid, _TITLES[sid], cfg=cfg, expected=_expected(sid), table_ratio=ratio)


def _transfer(sid: str) -> NamedScenario:
    om, od, dd, chi = _TRANSFERS[sid]
    dressing = NO_DRESSING if od is None else DressingConfig(TWO_PI * od, TWO_PI * dd, True)
    n = int(round(om))
    t = TransferConfig(TWO_PI * om, 1.0, dressing, chi, n)
    return NamedScenario(sid, _TITLES[sid], transfer=t, expected=_expected(sid),
                         table_ratio=None if od is None else od / dd)


def _expected(sid: str) -> dict[str, Expected]:
    return {k: Expected(float(v[0]), float(v[1]), v[2]) for k, v in _EXPECTED[sid].items()}


def verify_checksum() -> None:
    if _digest() != _CHECKSUM:
        raise ConfigError("built-in scenario table failed its checksum; the constants were edited")


def ids() -> list[str]:
    return list(_GATES) + list(_TRANSFERS)


def load(sid: str) -> NamedScenario:
    """Return the named scenario; raises :class:`UnknownScenario` listing the ids."""
    verify_checksum()
    if sid in _GATES:
        return _gate(sid)
    if sid in _TRANSFERS:
        return _transfer(sid)
    raise UnknownScenario(f"unknown scenario {sid!r}; available: {', '.join(ids())}")


def list_scenarios() -> list[tuple[str, str]]:
    return [(sid, _TITLES[sid]) for sid in ids()]
