"""Gate fidelity against the ideal CNOT and the decay-error budget.

The gate fidelity is the average over the four computational inputs of the
Uhlmann fidelity between the evolved state and the ideal image,

    F = ¼ Σ_q sqrt(⟨Oq| ρ_q(T_g) |Oq⟩).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DimensionMismatch, NumericalError
from .evolve import DEFAULT_SPEC, IntegratorSpec, evolve
from .protocol import NO_NOISE, NoiseSample, ProtocolConfig
from .qmat import as_matrix, check_density_matrix, herm_eig, psd_sqrt

INPUTS = ("00", "01", "10", "11")
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


@dataclass(frozen=True)
class IdealGate:
    """Ideal two-qubit unitary on ``span{|00⟩, |01⟩, |10⟩, |11⟩}``."""

    matrix: np.ndarray = field(default_factory=lambda: CNOT.copy())

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise DimensionMismatch(f"ideal gate must be 4x4, got {m.shape}")
        if np.max(np.abs(m.conj().T @ m - np.eye(4))) > 1e-12:
            raise DimensionMismatch("ideal gate is not unitary")
        object.__setattr__(self, "matrix", m)

    def embed(self, level_dim: int) -> np.ndarray:
        """Columns are the ideal images of ``|q⟩`` in the ``level_dim²`` space."""
        idx = [q0 * level_dim + q1 for q0 in (0, 1) for q1 in (0, 1)]
        out = np.zeros((level_dim * level_dim, 4), dtype=np.complex128)
        out[idx, :] = self.matrix
        return out


def computational_indices(level_dim: int) -> list[int]:
    return [q0 * level_dim + q1 for q0 in (0, 1) for q1 in (0, 1)]


@dataclass
class GateResult:
    """Fidelity and time-integrated populations of one gate run.

    Attributes
    ----------
    fidelity : float
        Mean of ``per_state``.
    per_state : dict
        ``F_q`` for ``q`` in 00, 01, 10, 11.
    p_r, p_a : float
        Time spent in the Rydberg level(s) and in ``|a⟩`` (μs), summed over
        both atoms and averaged over the four inputs. For the ground protocol
        ``p_r`` counts ``|s⟩`` and ``|p⟩``/``|p'⟩`` together.
    populations : dict
        Every monitored level, same accounting.
    epsilon_r, epsilon_a : float or None
        Filled in by :func:`error_decomposition`.
    """

    fidelity: float
    per_state: dict[str, float]
    p_r: float
    p_a: float
    populations: dict[str, float] = field(default_factory=dict)
    epsilon_r: float | None = None
    epsilon_a: float | None = None


def uhlmann(rho, sigma, pure: bool | None = None) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(σ) ρ sqrt(σ))``.

    When ``σ`` is a pure projector the closed form ``sqrt(⟨ψ|ρ|ψ⟩)`` is used.
    ``pure=None`` detects that case from ``Tr σ² ≈ 1``.
    """
    rho = as_matrix(rho)
    sigma = as_matrix(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")
    if pure is None:
        pure = abs(np.trace(sigma @ sigma).real - 1.0) < 1e-10
    if pure:
        _, vecs = herm_eig(sigma)
        psi = vecs[:, -1]
        overlap = float(np.real(psi.conj() @ rho @ psi))
        return _clip(math.sqrt(max(overlap, 0.0)))
    root = psd_sqrt(sigma)
    inner = root @ rho @ root
    inner = 0.5 * (inner + inner.conj().T)
    return _clip(float(np.trace(psd_sqrt(inner)).real))


def _clip(f: float) -> float:
    if f > 1.0 + 1e-9 or f < -1e-9:
        raise NumericalError(f"fidelity {f} outside [0, 1]")
    return min(max(f, 0.0), 1.0)


def pure_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """``sqrt(⟨ψ|ρ|ψ⟩)`` for a normalized ket ``psi``."""
    return _clip(math.sqrt(max(float(np.real(psi.conj() @ rho @ psi)), 0.0)))


def gate_fidelity(cfg: ProtocolConfig, noise: NoiseSample = NO_NOISE,
                  spec: IntegratorSpec = DEFAULT_SPEC, gate: IdealGate | None = None,
                  executor=None) -> GateResult:
    """Evolve the four computational inputs and score them against the gate.

    ``executor`` (any ``concurrent.futures`` executor) runs the four
    evolutions concurrently; results are combined in fixed input order.
    """
    gate = gate or IdealGate()
    n = cfg.scheme.dim
    targets = gate.embed(n)
    idx = computational_indices(n)

    def run(k: int):
        rho0 = np.zeros((n * n, n * n), dtype=np.complex128)
        rho0[idx[k], idx[k]] = 1.0
        return evolve(cfg, noise, rho0, spec)

    trajs = list(executor.map(run, range(4))) if executor is not None else [run(k) for k in range(4)]
    per_state = {}
    pops: dict[str, float] = {}
    for k, traj in enumerate(trajs):
        per_state[INPUTS[k]] = pure_fidelity(traj.final_state, targets[:, k])
        for label in traj.populations:
            pops[label] = pops.get(label, 0.0) + 0.25 * traj.population(label)
    fidelity = float(np.mean([per_state[q] for q in INPUTS]))
    if cfg.kind == "ground":
        p_r = pops.get("s", 0.0) + pops.get("p", 0.0) + pops.get("p'", 0.0)
    else:
        p_r = pops.get("r", 0.0)
    p_a = pops.get("a", 0.0)
    return GateResult(fidelity, per_state, p_r, p_a, pops)


def _decay_split(cfg: ProtocolConfig) -> tuple[ProtocolConfig, ProtocolConfig]:
    """Configurations keeping only Rydberg decay and only auxiliary decay."""
    rydberg_only = replace(cfg, gamma_a=0.0)
    aux_only = replace(cfg, gamma_r=0.0, gamma_s=0.0, gamma_p=0.0, gamma_pp=0.0)
    return rydberg_only, aux_only


def error_decomposition(cfg: ProtocolConfig, noise: NoiseSample = NO_NOISE,
                        spec: IntegratorSpec = DEFAULT_SPEC) -> tuple[float, float]:
    """``(ε_r, ε_a)``: ``1 − F`` with only Rydberg decay, then only ``|a⟩`` decay.

    The ground protocol's auxiliary level is a long-lived ground state, so its
    ``ε_a`` run has no decay at all.
    """
    rydberg_only, aux_only = _decay_split(cfg)
    eps_r = 1.0 - gate_fidelity(rydberg_only, noise, spec).fidelity
    eps_a = 1.0 - gate_fidelity(aux_only, noise, spec).fidelity
    return eps_r, eps_a


def superposition_fidelity(cfg: ProtocolConfig, noise: NoiseSample = NO_NOISE,
                           spec: IntegratorSpec = DEFAULT_SPEC,
                           gate: IdealGate | None = None) -> float:
    """Fidelity of the evolved ``½ Σ_q |q⟩`` against its ideal image.

    Sensitive to relative phases between the branches, which the per-input
    average ignores. Diagnostic only.
    """
    gate = gate or IdealGate()
    n = cfg.scheme.dim
    psi = np.zeros(n * n, dtype=np.complex128)
    psi[computational_indices(n)] = 0.5
    rho0 = np.outer(psi, psi.conj())
    traj = evolve(cfg, noise, rho0, spec)
    check_density_matrix(traj.final_state, herm_tol=1e-9, trace_tol=1e-6)
    target = gate.embed(n) @ np.full(4, 0.5, dtype=np.complex128)
    return pure_fidelity(traj.final_state, target)
