"""Two-atom Hamiltonians and decay channels for the three gate protocols.

``none``
    Plain blockade gate. Each atom carries ``|0⟩, |1⟩, |r⟩, |a⟩``; the
    auxiliary level is kept only as a sink for the ``|r⟩ → |a⟩`` decay branch.
``excited``
    The Rydberg level of each atom is dressed to a short-lived lower excited
    state ``|a⟩`` by a symmetric pair of sidebands ``±Δ_d``.
``ground``
    Förster exchange ``|ss⟩ ↔ |pp'⟩``; the dressing couples ``|p⟩`` (control)
    and ``|p'⟩`` (target) to a hyperfine ground state ``|a⟩``. Both atoms use a
    five-level space ``|0⟩, |1⟩, |s⟩, |p⟩ or |p'⟩, |a⟩``.

Convention for the laser phase: the excitation term ``|r⟩⟨1|`` carries the
complex Rabi frequency ``|Ω(t)| e^{+iφ(t)}``, so the instantaneous two-photon
detuning seen by ``|r⟩`` is ``+dφ/dt``. With this choice the tabulated phase
slopes reproduce the reference no-dressing fidelities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, UnknownKind
from .model import LindbladModel, ket_bra, lift
from .pulseshape import PulseSet, _check_window, _complex_rabi

KINDS = ("none", "excited", "ground")
TWO_PI = 2.0 * math.pi

V_DEFAULT = TWO_PI * 200.0
GAMMA_RYDBERG = 2.6e-3  # μs⁻¹, 1/τ_r quoted as 2.6 kHz
GAMMA_P = 1.3e-3  # μs⁻¹
GAMMA_AUX = TWO_PI * 1.0  # rad/μs, 2π × 1 MHz

# level indices inside one atom
G0, G1, RYD, AUX3 = 0, 1, 2, 3  # none / excited: |0>,|1>,|r>,|a>
S_LVL, P_LVL, AUX5 = 2, 3, 4  # ground: |0>,|1>,|s>,|p>,|a>


@dataclass(frozen=True)
class LevelScheme:
    control: tuple[str, ...]
    target: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.control)


SCHEMES = {
    "none": LevelScheme(("0", "1", "r", "a"), ("0", "1", "r", "a")),
    "excited": LevelScheme(("0", "1", "r", "a"), ("0", "1", "r", "a")),
    "ground": LevelScheme(("0", "1", "s", "p", "a"), ("0", "1", "s", "p'", "a")),
}


def level_scheme(kind: str) -> LevelScheme:
    try:
        return SCHEMES[kind]
    except KeyError:
        raise UnknownKind(f"unknown protocol kind {kind!r}; expected one of {KINDS}") from None


@dataclass(frozen=True)
class NoiseSample:
    """Detuning errors in rad/μs.

    ``delta_c``/``delta_t`` are the Doppler shifts of control and target;
    ``delta_prime`` is an extra detuning error common to the Rydberg levels of
    both atoms (it does not reach ``|a⟩``).
    """

    delta_c: float = 0.0
    delta_t: float = 0.0
    delta_prime: float = 0.0

    def __post_init__(self) -> None:
        for name in ("delta_c", "delta_t", "delta_prime"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")


NO_NOISE = NoiseSample()


@dataclass(frozen=True)
class ProtocolConfig:
    """Everything needed to build ``H(t)`` and the jump operators.

    Decay rates are plain rates in μs⁻¹. ``gamma_r``/``gamma_a`` apply to the
    ``none``/``excited`` protocols, ``gamma_s``/``gamma_p``/``gamma_pp`` to
    ``ground``.
    """

    kind: str
    pulses: PulseSet
    v: float = V_DEFAULT
    chi: float = 1.627
    gamma_r: float = 0.0
    gamma_a: float = 0.0
    gamma_s: float = 0.0
    gamma_p: float = 0.0
    gamma_pp: float = 0.0

    def __post_init__(self) -> None:
        level_scheme(self.kind)
        if self.kind == "none" and self.pulses.dressing.enabled:
            raise ConfigError("protocol kind 'none' cannot carry an enabled dressing field")
        for name in ("gamma_r", "gamma_a", "gamma_s", "gamma_p", "gamma_pp"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ConfigError(f"{name} must be a finite rate >= 0, got {value}")
        if not math.isfinite(self.chi) or self.chi < 0:
            raise ConfigError(f"chi must be finite and >= 0, got {self.chi}")

    @property
    def scheme(self) -> LevelScheme:
        return level_scheme(self.kind)

    @property
    def t_gate(self) -> float:
        return self.pulses.t_gate

    def without_decay(self) -> "ProtocolConfig":
        return replace(self, gamma_r=0.0, gamma_a=0.0, gamma_s=0.0, gamma_p=0.0, gamma_pp=0.0)

    def replace(self, **changes) -> "ProtocolConfig":
        return replace(self, **changes)


class _Rabi:
    """Half complex Rabi frequency of one drive (optionally conjugated)."""

    def __init__(self, pulses: PulseSet, which: str, conj: bool):
        self.pulses, self.which, self.conj = pulses, which, conj

    def __call__(self, t):
        v = 0.5 * np.asarray(_complex_rabi(self.pulses, self.which, t), dtype=np.complex128)
        return np.conj(v) if self.conj else v


class _Dressing:
    def __init__(self, pulses: PulseSet):
        self.dressing = pulses.dressing

    def __call__(self, t):
        return np.asarray(self.dressing.evaluate(t), dtype=np.complex128)


def _single_atom_diag(n: int, entries: dict[int, float]) -> np.ndarray:
    m = np.zeros((n, n), dtype=np.complex128)
    for idx, val in entries.items():
        m[idx, idx] += val
    return m


def hamiltonian_model(cfg: ProtocolConfig, noise: NoiseSample = NO_NOISE) -> LindbladModel:
    """Decompose ``H(t)`` into a static part and driven terms, with jumps."""
    n = cfg.scheme.dim
    dims = (n, n)
    dressed = cfg.pulses.dressing.enabled
    dp = noise.delta_prime
    static = np.zeros((n * n, n * n), dtype=np.complex128)

    if cfg.kind in ("none", "excited"):
        ryd, aux = RYD, AUX3
        for atom, delta in ((0, noise.delta_c), (1, noise.delta_t)):
            shifts = {ryd: -(delta + dp)}
            if cfg.kind == "excited":
                shifts[aux] = cfg.chi * delta
            static += lift(_single_atom_diag(n, shifts), atom, dims)
        rr = ryd * n + ryd
        static[rr, rr] += cfg.v
        dress_pairs = ((ryd, aux), (ryd, aux))
    else:
        ryd, aux = S_LVL, AUX5
        for atom, delta in ((0, noise.delta_c), (1, noise.delta_t)):
            shifts = {S_LVL: -(delta + dp), P_LVL: -(delta + dp), AUX5: cfg.chi * delta}
            static += lift(_single_atom_diag(n, shifts), atom, dims)
        ss = S_LVL * n + S_LVL
        pp = P_LVL * n + P_LVL
        static[ss, pp] += cfg.v
        static[pp, ss] += cfg.v
        dress_pairs = ((P_LVL, aux), (P_LVL, aux))

    drive_1 = lift(ket_bra(n, ryd, G1), 0, dims) + lift(ket_bra(n, ryd, G1), 1, dims)
    drive_0 = lift(ket_bra(n, ryd, G0), 1, dims)
    terms = [
        (drive_1, _Rabi(cfg.pulses, "r", False)),
        (drive_1.conj().T.copy(), _Rabi(cfg.pulses, "r", True)),
        (drive_0, _Rabi(cfg.pulses, "rp", False)),
        (drive_0.conj().T.copy(), _Rabi(cfg.pulses, "rp", True)),
    ]
    if dressed and cfg.kind != "none":
        gen = np.zeros_like(static)
        for atom, (hi, lo) in enumerate(dress_pairs):
            gen += lift(ket_bra(n, hi, lo) + ket_bra(n, lo, hi), atom, dims)
        terms.append((gen, _Dressing(cfg.pulses)))

    return LindbladModel(
        static=static,
        terms=tuple(terms),
        jumps=tuple(lindblad_ops(cfg)),
        dims=dims,
        labels=(cfg.scheme.control, cfg.scheme.target),
        t_final=cfg.t_gate,
    )


def hamiltonian_at(cfg: ProtocolConfig, noise: NoiseSample, t: float) -> np.ndarray:
    """Dense two-atom Hamiltonian at time ``t`` (rad/μs)."""
    _check_window(t, cfg.t_gate)
    return hamiltonian_model(cfg, noise).hamiltonian(t)


def single_atom_jumps(kind: str, cfg: ProtocolConfig, atom: int) -> list[np.ndarray]:
    """Jump operators of one atom, before lifting to the pair space."""
    if kind in ("none", "excited"):
        n = 4
        ops = [math.sqrt(cfg.gamma_r / 3.0) * ket_bra(n, i, RYD) for i in (G0, G1, AUX3)]
        if kind == "excited":
            ops += [math.sqrt(cfg.gamma_a / 2.0) * ket_bra(n, j, AUX3) for j in (G0, G1)]
        return ops
    if kind == "ground":
        n = 5
        gp = cfg.gamma_p if atom == 0 else cfg.gamma_pp
        ops = [math.sqrt(cfg.gamma_s / 3.0) * ket_bra(n, i, S_LVL) for i in (G0, G1, AUX5)]
        ops += [math.sqrt(gp / 3.0) * ket_bra(n, i, P_LVL) for i in (G0, G1, AUX5)]
        return ops
    raise UnknownKind(f"unknown protocol kind {kind!r}")


def lindblad_ops(cfg: ProtocolConfig) -> list[np.ndarray]:
    """Two-atom jump operators (zero-rate channels are kept as zero matrices)."""
    n = cfg.scheme.dim
    dims = (n, n)
    out = []
    for atom in (0, 1):
        out.extend(lift(op, atom, dims) for op in single_atom_jumps(cfg.kind, cfg, atom))
    return out


def computational_index(kind: str, q_control: int, q_target: int) -> int:
    n = level_scheme(kind).dim
    return q_control * n + q_target
