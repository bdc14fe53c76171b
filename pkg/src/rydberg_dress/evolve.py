"""Fixed-step RK4 integration of the two-atom Lindblad master equation.

The step is fixed a priori: it resolves the dressing oscillation with a set
number of samples per period and never exceeds ``T_g/2000``. Runs with the
same :class:`IntegratorSpec` are bit-reproducible.

Before integrating, the state space is cut down to the block reachable from
the support of ``ρ₀`` through the Hamiltonian and the jump operators. This is
exact (the discarded block stays empty for all times) and shrinks, for
instance, the ``|0x⟩`` inputs of the excited protocol from 16 to 4 levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .errors import DimensionMismatch, NotHermitian, NumericalError, StepTooLarge, TraceDrift
from .model import LindbladModel
from .protocol import NO_NOISE, NoiseSample, ProtocolConfig, hamiltonian_model

TRACE_TOLERANCE = 1e-6
HERMITICITY_TOLERANCE = 1e-9
MAX_STEPS_PER_GATE = 2000  # dt <= T_g / 2000


@dataclass(frozen=True)
class IntegratorSpec:
    """Step control.

    Parameters
    ----------
    dt : float, optional
        Explicit step in μs. When omitted the largest step allowed by the two
        limits below is used, shrunk so that it divides ``T_g`` exactly.
    samples_per_dressing_period : int
        Minimum number of steps per dressing period ``2π/Δ_d``.
    method : str
        Only ``"rk4"`` is provided.
    """

    dt: float | None = None
    samples_per_dressing_period: int = 160
    method: str = "rk4"

    def __post_init__(self) -> None:
        if self.method != "rk4":
            raise StepTooLarge(f"unsupported integration method {self.method!r}")
        if self.samples_per_dressing_period < 1:
            raise StepTooLarge("samples_per_dressing_period must be >= 1")
        if self.dt is not None and not self.dt > 0:
            raise StepTooLarge(f"dt must be positive, got {self.dt}")

    def max_step(self, t_gate: float, delta_d: float | None) -> float:
        limit = t_gate / MAX_STEPS_PER_GATE
        if delta_d:
            limit = min(limit, 2.0 * math.pi / (self.samples_per_dressing_period * abs(delta_d)))
        return limit

    def grid(self, t_gate: float, delta_d: float | None) -> tuple[float, int]:
        """Return ``(dt, n_steps)`` with ``n_steps · dt = T_g``."""
        limit = self.max_step(t_gate, delta_d)
        if self.dt is not None:
            if self.dt > limit * (1.0 + 1e-12):
                raise StepTooLarge(f"dt={self.dt} μs exceeds the allowed {limit:.6g} μs")
            n = max(1, int(round(t_gate / self.dt)))
            if not math.isclose(n * self.dt, t_gate, rel_tol=1e-9):
                n = int(math.ceil(t_gate / self.dt))
        else:
            n = int(math.ceil(t_gate / limit * (1.0 - 1e-12)))
        return t_gate / n, n


DEFAULT_SPEC = IntegratorSpec()


@dataclass
class Trajectory:
    """Result of one evolution.

    Attributes
    ----------
    final_state : ndarray
        ``ρ(T_g)`` in the full two-atom space.
    populations : dict
        ``label -> (control, target)`` time integrals ``∫ P(t) dt`` in μs.
    n_steps : int
        Number of RK4 steps taken.
    trace_drift : float
        Largest ``|Tr ρ − 1|`` seen along the way.
    """

    final_state: np.ndarray
    populations: dict[str, tuple[float, float]] = field(default_factory=dict)
    n_steps: int = 0
    trace_drift: float = 0.0

    def population(self, label: str) -> float:
        """Time-integrated population of ``label`` summed over both atoms."""
        c, t = self.populations.get(label, (0.0, 0.0))
        return c + t


def lindblad_rhs(cfg: ProtocolConfig, noise: NoiseSample, t: float, rho: np.ndarray) -> np.ndarray:
    """Dense reference ``−i[H, ρ] + Σ (LρL† − ½{L†L, ρ})``."""
    model = hamiltonian_model(cfg, noise)
    return model_rhs(model.hamiltonian(t), model.jumps, rho)


def model_rhs(h: np.ndarray, jumps, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    out = -1j * (h @ rho - rho @ h)
    for op in jumps:
        op_dag = op.conj().T
        ldl = op_dag @ op
        out += op @ rho @ op_dag - 0.5 * (ldl @ rho + rho @ ldl)
    return out


def reachable(model: LindbladModel, support: np.ndarray) -> np.ndarray:
    """Indices reachable from ``support`` through ``H`` and the jumps.

    ``adj[i, j]`` means population can flow ``j → i``. The Hamiltonian
    couples both ways, a jump ``|i⟩⟨j|`` only one way.
    """
    adj = np.abs(model.static) > 0
    for gen, _ in model.terms:
        adj |= np.abs(gen) > 0
    adj = adj | adj.T
    for op in model.jumps:
        adj |= np.abs(op) > 0
    seen = np.zeros(model.dim, dtype=bool)
    seen[support] = True
    frontier = list(np.flatnonzero(seen))
    while frontier:
        nxt = np.flatnonzero(adj[:, frontier].any(axis=1) & ~seen)
        seen[nxt] = True
        frontier = list(nxt)
    return np.flatnonzero(seen)


def _coo(m: np.ndarray):
    rows, cols = np.nonzero(m)
    return rows.astype(np.int64), cols.astype(np.int64), m[rows, cols].astype(np.complex128)


def integrate(model: LindbladModel, rho0: np.ndarray, spec: IntegratorSpec = DEFAULT_SPEC,
              delta_d: float | None = None) -> Trajectory:
    """Integrate a :class:`LindbladModel` from ``t=0`` to ``model.t_final``."""
    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (model.dim, model.dim):
        raise DimensionMismatch(f"rho0 has shape {rho0.shape}, model dimension is {model.dim}")
    herm = np.max(np.abs(rho0 - rho0.conj().T)) if rho0.size else 0.0
    if herm > HERMITICITY_TOLERANCE:
        raise NumericalError(f"initial state not Hermitian (residue {herm:.3g})")
    dt, n_steps = spec.grid(model.t_final, delta_d)

    support = np.flatnonzero(np.any(np.abs(rho0) > 0, axis=1))
    keep = reachable(model, support)
    sub = np.ix_(keep, keep)

    gamma = np.zeros((keep.size, keep.size), dtype=np.complex128)
    j_rows, j_cols, j_vals, j_ptr = [], [], [], [0]
    for op in model.jumps:
        op_s = op[sub]
        if not np.any(op_s):
            continue
        gamma += op_s.conj().T @ op_s
        r, c, v = _coo(op_s)
        j_rows.append(r)
        j_cols.append(c)
        j_vals.append(v)
        j_ptr.append(j_ptr[-1] + r.size)
    k_static = -1j * model.static[sub] - 0.5 * gamma
    s_rows, s_cols, s_vals = _coo(k_static)

    times = np.arange(2 * n_steps + 1) * (0.5 * dt)
    t_rows, t_cols, t_vals, t_term, coef_rows = [], [], [], [], []
    for gen, fn in model.terms:
        g = gen[sub]
        if not np.any(g):
            continue
        r, c, v = _coo(g)
        t_rows.append(r)
        t_cols.append(c)
        t_vals.append(v)
        t_term.append(np.full(r.size, len(coef_rows), dtype=np.int64))
        coef_rows.append(np.asarray(fn(times), dtype=np.complex128))
    coef = np.array(coef_rows, dtype=np.complex128).reshape(len(coef_rows), times.size)

    def cat(parts, dtype):
        return np.concatenate(parts).astype(dtype) if parts else np.zeros(0, dtype=dtype)

    keys, weights = model.monitors()
    rho_f, acc, drift, herm = _kernel.rk4_lindblad(
        np.ascontiguousarray(rho0[sub]),
        s_rows, s_cols, s_vals,
        cat(t_rows, np.int64), cat(t_cols, np.int64), cat(t_vals, np.complex128),
        cat(t_term, np.int64), coef,
        np.asarray(j_ptr, dtype=np.int64), cat(j_rows, np.int64), cat(j_cols, np.int64),
        cat(j_vals, np.complex128),
        np.ascontiguousarray(weights[:, keep]), dt, n_steps,
    )
    if not np.all(np.isfinite(rho_f)):
        raise NumericalError("integration produced non-finite values")
    if drift > TRACE_TOLERANCE:
        raise TraceDrift(f"trace drifted by {drift:.3g} (dt={dt:.4g} μs)")
    if herm > HERMITICITY_TOLERANCE:
        raise NotHermitian(f"state lost Hermiticity during a step (residue {herm:.3g})")

    final = np.zeros((model.dim, model.dim), dtype=np.complex128)
    final[sub] = rho_f
    pops: dict[str, list[float]] = {}
    for (atom, label), value in zip(keys, acc):
        pops.setdefault(label, [0.0] * len(model.dims))[atom] = float(max(value, 0.0))
    return Trajectory(final, {k: tuple(v) for k, v in pops.items()}, n_steps, float(drift))


def evolve(cfg: ProtocolConfig, noise: NoiseSample = NO_NOISE, rho0: np.ndarray | None = None,
           spec: IntegratorSpec = DEFAULT_SPEC) -> Trajectory:
    """Evolve ``rho0`` over the gate window of ``cfg``."""
    if rho0 is None:
        raise DimensionMismatch("an initial density matrix is required")
    model = hamiltonian_model(cfg, noise)
    d = cfg.pulses.dressing
    delta_d = d.delta_d if d.enabled and cfg.kind != "none" else None
    return integrate(model, rho0, spec, delta_d)
