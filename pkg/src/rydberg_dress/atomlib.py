"""Species constants, excitation wavevectors and thermal velocity statistics.

Lengths are in micrometres and wavelengths in nanometres. A wavevector in
μm⁻¹ multiplied by a velocity in m/s gives an angular frequency in rad/μs
directly (``1 μm⁻¹ · 1 m/s = 10⁶ s⁻¹ = 1 μs⁻¹``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, NonPositiveWavelength, ZeroReferenceWavevector

AMU = 1.66053907e-27  # kg
K_BOLTZMANN = 1.380649e-23  # J/K


@dataclass(frozen=True)
class SpeciesData:
    name: str
    mass: float  # kg
    transitions: dict[str, float] = field(default_factory=dict)  # state label -> wavelength (nm)

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise ConfigError(f"species mass must be positive, got {self.mass}")


RB87 = SpeciesData(
    "Rb87",
    86.9091835 * AMU,
    {"5P1/2": 795.0, "5P3/2": 780.0, "up(5P1/2)": 475.0, "up(5P3/2)": 480.0},
)
CS133 = SpeciesData(
    "Cs133",
    132.9054519 * AMU,
    {"6P1/2": 895.0, "6P3/2": 852.0, "up(6P1/2)": 495.0, "up(6P3/2)": 509.0},
)
SPECIES = {s.name: s for s in (RB87, CS133)}

# one-photon UV dressing |p>,|p'> <-> hyperfine ground state, 297 nm
GROUND_DRESSING_WAVELENGTH_NM = 297.0


@dataclass(frozen=True)
class DressingCase:
    """One column of the intermediate/auxiliary state table."""

    case: str
    species: SpeciesData
    intermediate: str
    lambda_up: float
    lambda_lower: float
    auxiliary: str
    lambda_a: float
    tau_a: float  # μs
    chi_quoted: float


TABLE2_CASES: dict[str, DressingCase] = {
    c.case: c
    for c in (
        DressingCase("a", RB87, "5P1/2", 475.0, 795.0, "5P1/2", 475.0, 0.158, 1.484),
        DressingCase("b", RB87, "5P1/2", 475.0, 795.0, "5P3/2", 480.0, 0.150, 1.458),
        DressingCase("c", RB87, "5P3/2", 480.0, 780.0, "5P1/2", 475.0, 0.158, 1.627),
        DressingCase("d", RB87, "5P3/2", 480.0, 780.0, "5P3/2", 480.0, 0.150, 1.6),
        DressingCase("e", CS133, "6P1/2", 495.0, 895.0, "6P1/2", 495.0, 0.200, 1.238),
        DressingCase("f", CS133, "6P1/2", 495.0, 895.0, "6P3/2", 509.0, 0.174, 1.176),
        DressingCase("g", CS133, "6P3/2", 509.0, 852.0, "6P1/2", 495.0, 0.200, 1.554),
        DressingCase("h", CS133, "6P3/2", 509.0, 852.0, "6P3/2", 509.0, 0.174, 1.484),
    )
}


@dataclass(frozen=True)
class WavevectorSpec:
    """Signed wavevectors along the beam axis, μm⁻¹.

    ``k_a`` carries the propagation direction of the dressing light; it is
    negative (counter-propagating) for every built-in configuration.
    """

    k_r: float
    k_a: float


@dataclass(frozen=True)
class ThermalModel:
    temperature: float  # K
    species: SpeciesData = RB87

    def __post_init__(self) -> None:
        if not self.temperature >= 0:
            raise ConfigError(f"temperature must be >= 0 K, got {self.temperature}")

    @property
    def v_rms(self) -> float:
        return v_rms(self)


def _check_wavelength(value: float, name: str) -> None:
    if not value > 0:
        raise NonPositiveWavelength(f"{name} must be positive, got {value}")


def two_photon_k(lambda_up: float, lambda_lower: float) -> float:
    """Effective two-photon wavevector ``2π(1/λ_up − 1/λ_lower)`` in μm⁻¹."""
    _check_wavelength(lambda_up, "lambda_up")
    _check_wavelength(lambda_lower, "lambda_lower")
    return 2.0 * math.pi * (1e3 / lambda_up - 1e3 / lambda_lower)


def dressing_k(lambda_a: float) -> float:
    """Counter-propagating dressing wavevector ``−2π/λ_a`` in μm⁻¹."""
    _check_wavelength(lambda_a, "lambda_a")
    return -2.0 * math.pi * 1e3 / lambda_a


def case_wavevectors(case: DressingCase) -> WavevectorSpec:
    return WavevectorSpec(two_photon_k(case.lambda_up, case.lambda_lower), dressing_k(case.lambda_a))


def sensitivity_chi(k: WavevectorSpec) -> float:
    """Sensitivity factor ``|1 + k_a/k_r|``."""
    if k.k_r == 0:
        raise ZeroReferenceWavevector("k_r must be nonzero")
    return abs(1.0 + k.k_a / k.k_r)


def v_rms(model: ThermalModel) -> float:
    """One-dimensional thermal velocity spread ``sqrt(k_B T / m)`` in m/s."""
    return math.sqrt(K_BOLTZMANN * model.temperature / model.species.mass)


def doppler_shift(k: float, v: float) -> float:
    """Doppler shift ``k·v`` in rad/μs for ``k`` in μm⁻¹ and ``v`` in m/s."""
    return k * v


# the level scheme used throughout the gate simulations: Rb case (c)
DEFAULT_WAVEVECTORS = case_wavevectors(TABLE2_CASES["c"])
GROUND_WAVEVECTORS = WavevectorSpec(DEFAULT_WAVEVECTORS.k_r, dressing_k(GROUND_DRESSING_WAVELENGTH_NM))
# quoted for the ground-state dressing scheme; |1 + k_a/k_r| gives 3.202 instead
GROUND_CHI_QUOTED = 4.202
