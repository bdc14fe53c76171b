"""Dressing protection of a single Rydberg transition against Doppler shifts.

Two views of the same effect:

* closed form: averaging the dressed ``{|r⟩, |a⟩}`` pair over the dressing
  period to first order in the Magnus expansion leaves a ``δ``-dependent
  2×2 generator whose Rydberg-like eigenvalue vanishes when
  ``J₀(Ω_d/Δ_d) = (χ − 1) / (2(χ + 1))``;
* numerical: drive a ``2nπ`` transfer ``|1⟩ → |r⟩ → |1⟩`` under the full
  time-dependent Hamiltonian and look for the dressing ratio at which the
  return population is flattest in ``δ``.

The two do not agree in general; both are exposed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NoRoot
from .evolve import DEFAULT_SPEC, IntegratorSpec, integrate
from .model import LindbladModel, ket_bra
from .pulseshape import NO_DRESSING, DressingConfig

TWO_PI = 2.0 * math.pi
J0_FIRST_MINIMUM = 3.8317059702075125  # first zero of J₁
_J0_MIN_VALUE = -0.40275939570255315  # J₀ at its first minimum

S_PLUS = np.array([[0, 1], [0, 0]], dtype=np.complex128)
S_MINUS = S_PLUS.T.copy()


def bessel_j0(z: float) -> float:
    """Bessel function ``J₀`` from its power series ``Σ (−z²/4)^k / (k!)²``.

    Accurate to about 1e-13 on ``[0, 10]``; the series is summed with
    :func:`math.fsum` to limit cancellation.
    """
    z = abs(float(z))
    x = -0.25 * z * z
    term = 1.0
    terms = [term]
    k = 0
    while True:
        k += 1
        term *= x / (k * k)
        terms.append(term)
        if abs(term) < 1e-18 and k > 0.5 * z:
            break
    return math.fsum(terms)


def bessel_ratio(chi: float, tol: float = 1e-8) -> float:
    """Smallest positive ``z`` with ``J₀(z) = (χ − 1) / (2(χ + 1))``.

    Bisection on ``(0, j₁,₁]`` where ``J₀`` decreases monotonically from 1 to
    its first minimum. Raises :class:`NoRoot` if the target lies outside that
    range.
    """
    if not chi >= 0:
        raise ConfigError(f"chi must be >= 0, got {chi}")
    target = (chi - 1.0) / (2.0 * (chi + 1.0))
    if target >= 1.0 or target < _J0_MIN_VALUE:
        raise NoRoot(f"J0(z) = {target:.6g} has no root on (0, {J0_FIRST_MINIMUM:.6g}]")
    lo, hi = 0.0, J0_FIRST_MINIMUM
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bessel_j0(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class DressedPair:
    chi: float
    omega_d: float
    delta_d: float

    @property
    def z(self) -> float:
        if self.delta_d == 0:
            raise ConfigError("delta_d must be nonzero")
        return self.omega_d / self.delta_d


def magnus_first_order(pair: DressedPair, delta: float) -> np.ndarray:
    """First-order Magnus generator of the doubly dressed pair (rotated frame).

    ``(δ/2)[(χ − 1) I + 2 J₀(z)(χ + 1)(S₊ e^{−z} + S₋ e^{z})]`` with
    ``z = Ω_d/Δ_d``. Its eigenvalues are ``(δ/2)[(χ − 1) ± 2J₀(z)(χ + 1)]``.
    """
    z = pair.z
    j0 = bessel_j0(z)
    off = S_PLUS * math.exp(-z) + S_MINUS * math.exp(z)
    return 0.5 * delta * ((pair.chi - 1.0) * np.eye(2) + 2.0 * j0 * (pair.chi + 1.0) * off)


@dataclass(frozen=True)
class TransferConfig:
    """Single-atom ``|1⟩ ↔ |r⟩`` transfer with optional dressing ``|r⟩ ↔ |a⟩``.

    Parameters
    ----------
    omega_r : float
        Constant Rabi frequency (rad/μs).
    tau : float
        Transfer duration (μs).
    n : int, optional
        When given, ``Ω_r τ`` must equal ``2nπ``.
    """

    omega_r: float
    tau: float = 1.0
    dressing: DressingConfig = NO_DRESSING
    chi: float = 1.0
    n: int | None = None

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.n is not None and abs(self.omega_r * self.tau - TWO_PI * self.n) > 1e-9:
            raise ConfigError(f"omega_r·tau = {self.omega_r * self.tau} is not 2·{self.n}·π")


class _Const:
    def __init__(self, value: complex):
        self.value = value

    def __call__(self, t):
        return np.full(np.shape(t), self.value, dtype=np.complex128)


class _Cos:
    def __init__(self, dressing: DressingConfig):
        self.dressing = dressing

    def __call__(self, t):
        return np.asarray(self.dressing.evaluate(t), dtype=np.complex128)


def transfer_model(t: TransferConfig, delta: float) -> LindbladModel:
    """Three-level ``{|1⟩, |r⟩, |a⟩}`` model, no decay."""
    static = np.diag([0.0, -delta, t.chi * delta]).astype(np.complex128)
    drive = ket_bra(3, 0, 1) + ket_bra(3, 1, 0)
    terms = [(drive, _Const(0.5 * t.omega_r))]
    if t.dressing.enabled:
        terms.append((ket_bra(3, 1, 2) + ket_bra(3, 2, 1), _Cos(t.dressing)))
    return LindbladModel(static, tuple(terms), (), (3,), (("1", "r", "a"),), t.tau)


def transfer_demo(t: TransferConfig, delta: float, spec: IntegratorSpec = DEFAULT_SPEC) -> float:
    """Transfer infidelity ``1 − ⟨1|ρ(τ)|1⟩`` starting from ``|1⟩``."""
    rho0 = np.zeros((3, 3), dtype=np.complex128)
    rho0[0, 0] = 1.0
    d = t.dressing
    traj = integrate(transfer_model(t, delta), rho0, spec, d.delta_d if d.enabled else None)
    return float(1.0 - traj.final_state[0, 0].real)


@dataclass
class ScanResult:
    best_ratio: float
    ratios: np.ndarray
    scores: np.ndarray
    infidelity: np.ndarray = field(repr=False)  # (ratio, delta)


def insensitive_scan(chi: float, omega_d: float, ratio_grid, delta_grid,
                     probe: TransferConfig, spec: IntegratorSpec = DEFAULT_SPEC,
                     threads: int = 1) -> ScanResult:
    """Scan ``Ω_d/Δ_d`` for the flattest transfer fidelity over ``δ``.

    For each ratio ``r`` the dressing is set to ``(Ω_d, Ω_d/r)`` and the
    score is ``max_δ |F(δ) − F(0)|``. ``F(0)`` is always evaluated, whether
    or not ``0`` is in ``delta_grid``.
    """
    ratios = np.asarray(ratio_grid, dtype=float)
    deltas = np.asarray(delta_grid, dtype=float)
    if ratios.size == 0 or deltas.size == 0:
        raise ConfigError("ratio and delta grids must be nonempty")
    if np.any(ratios <= 0):
        raise ConfigError("dressing ratios must be positive")
    all_deltas = np.concatenate([[0.0], deltas])

    def probe_at(r: float) -> TransferConfig:
        dressing = DressingConfig(omega_d, omega_d / r, True) if omega_d > 0 else NO_DRESSING
        return TransferConfig(probe.omega_r, probe.tau, dressing, chi, probe.n)

    jobs = [(probe_at(r), d) for r in ratios for d in all_deltas]

    def run(job):
        return transfer_demo(job[0], job[1], spec)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flat = list(pool.map(run, jobs))
    else:
        flat = [run(j) for j in jobs]
    infid = np.array(flat).reshape(ratios.size, all_deltas.size)
    scores = np.max(np.abs(infid[:, 1:] - infid[:, :1]), axis=1)
    best = float(ratios[int(np.argmin(scores))])
    return ScanResult(best, ratios, scores, infid[:, 1:])
