"""Real-coded genetic algorithm for pulse-parameter search.

Tournament selection (size 3), elitism, BLX-α blend crossover and per-gene
Gaussian mutation with clamping to the box. A fixed seed gives the same
history whether or not fitness values are computed in parallel, because all
random draws happen in the main thread and evaluation order does not touch
the generator.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, NumericalError
from .evolve import DEFAULT_SPEC, IntegratorSpec
from .gatemetrics import gate_fidelity
from .protocol import ProtocolConfig
from .pulseshape import DressingConfig, GaussianAmplitude, PhaseProfile, PulseSet

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GAConfig:
    population: int = 64
    generations: int = 200
    tournament: int = 3
    elitism: int = 2
    blend_alpha: float = 0.5
    mutation_rate: float = 0.15
    mutation_sigma: float = 0.05  # fraction of each gene's range
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population < 4:
            raise ConfigError("population must be >= 4")
        if not 0 <= self.elitism < self.population:
            raise ConfigError("elitism must satisfy 0 <= elitism < population")
        if self.generations < 0 or self.tournament < 1:
            raise ConfigError("generations must be >= 0 and tournament >= 1")
        if not 0 <= self.mutation_rate <= 1:
            raise ConfigError("mutation_rate must lie in [0, 1]")


@dataclass
class GAResult:
    best: np.ndarray
    best_fitness: float
    history: list[float] = field(default_factory=list)
    evaluations: int = 0


def run_ga(bounds: Sequence[tuple[float, float]], fitness: Callable[[np.ndarray], float],
           ga: GAConfig = GAConfig(), threads: int = 1) -> GAResult:
    """Maximize ``fitness`` over the box ``bounds``.

    Genes with equal lower and upper bounds are held fixed. Fitness values
    are memoized on the exact gene vector.
    """
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    if lo.size == 0:
        raise ConfigError("search space is empty")
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))) or np.any(hi < lo):
        raise ConfigError("bounds must be finite with lower <= upper")
    span = hi - lo
    rng = np.random.default_rng(ga.seed)
    cache: dict[bytes, float] = {}
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    def evaluate(pop: np.ndarray) -> np.ndarray:
        if np.any(pop < lo) or np.any(pop > hi):
            raise NumericalError("individual escaped the search box")
        keys = [row.tobytes() for row in pop]
        todo = {k: row for k, row in zip(keys, pop) if k not in cache}
        if todo:
            rows = list(todo.values())
            values = list(pool.map(fitness, rows)) if pool else [fitness(r) for r in rows]
            for k, v in zip(todo.keys(), values):
                cache[k] = float(v) if math.isfinite(v) else -math.inf
        return np.array([cache[k] for k in keys])

    try:
        pop = lo + rng.random((ga.population, lo.size)) * span
        fit = evaluate(pop)
        order = np.argsort(-fit, kind="stable")
        history = [float(fit[order[0]])]
        for _ in range(ga.generations):
            children = [pop[i].copy() for i in order[: ga.elitism]]
            while len(children) < ga.population:
                pa = pop[_tournament(fit, ga.tournament, rng)]
                pb = pop[_tournament(fit, ga.tournament, rng)]
                for child in _blend(pa, pb, ga.blend_alpha, rng):
                    mask = rng.random(lo.size) < ga.mutation_rate
                    child = child + mask * rng.normal(0.0, 1.0, lo.size) * ga.mutation_sigma * span
                    children.append(np.clip(child, lo, hi))
            pop = np.array(children[: ga.population])
            fit = evaluate(pop)
            order = np.argsort(-fit, kind="stable")
            best = float(fit[order[0]])
            if ga.elitism and best < history[-1]:
                raise NumericalError("elitism violated: best fitness decreased")
            history.append(best)
    finally:
        if pool is not None:
            pool.shutdown()
    return GAResult(pop[order[0]].copy(), float(fit[order[0]]), history, len(cache))


def _tournament(fit: np.ndarray, size: int, rng: np.random.Generator) -> int:
    idx = rng.integers(0, fit.size, size=size)
    return int(idx[np.argmax(fit[idx])])


def _blend(a: np.ndarray, b: np.ndarray, alpha: float, rng: np.random.Generator):
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    ext = alpha * (hi - lo)
    for _ in range(2):
        yield lo - ext + rng.random(a.size) * (hi - lo + 2.0 * ext)


# gate parameter space ---------------------------------------------------------

PARAMETERS = ("t_gate", "omega_max", "width", "omega_max_p", "width_p",
              "delta0", "delta1", "delta2", "alpha", "omega_d", "delta_d")


@dataclass(frozen=True)
class SearchSpace:
    """Box bounds for the gate parameters, internal units (μs, rad/μs, rad).

    ``delta_d`` is ignored when ``tie_ratio`` is set; then
    ``Δ_d = Ω_d / tie_ratio``.
    """

    bounds: dict[str, tuple[float, float]]
    tie_ratio: float | None = None

    def __post_init__(self) -> None:
        unknown = set(self.bounds) - set(PARAMETERS)
        if unknown:
            raise ConfigError(f"unknown search parameters: {sorted(unknown)}")
        for name, (a, b) in self.bounds.items():
            if not (math.isfinite(a) and math.isfinite(b)) or b < a:
                raise ConfigError(f"bad bounds for {name}: ({a}, {b})")
        if self.tie_ratio is not None and not self.tie_ratio > 0:
            raise ConfigError("tie_ratio must be positive")

    @property
    def names(self) -> list[str]:
        names = [p for p in PARAMETERS if p in self.bounds]
        if self.tie_ratio is not None and "delta_d" in names:
            names.remove("delta_d")
        return names

    def box(self) -> list[tuple[float, float]]:
        return [self.bounds[n] for n in self.names]

    @classmethod
    def default(cls, dressed: bool, omega_cap_mhz: float = 10.0, tie_ratio: float | None = 0.698,
                generalized: bool = False) -> "SearchSpace":
        b = {
            "t_gate": (0.1, 5.0),
            "omega_max": (0.0, TWO_PI * omega_cap_mhz),
            "width": (0.02, 1.0),
            "omega_max_p": (0.0, TWO_PI * omega_cap_mhz),
            "width_p": (0.02, 1.0),
            "delta0": (-TWO_PI * 20.0, TWO_PI * 20.0),
            "delta1": (-TWO_PI * 20.0, TWO_PI * 20.0),
            "delta2": (-TWO_PI * 20.0, TWO_PI * 20.0),
        }
        if generalized:
            b["alpha"] = (0.0, 4.0)
        if dressed:
            b["omega_d"] = (0.0, TWO_PI * 300.0)
            b["delta_d"] = (TWO_PI * 1.0, TWO_PI * 1000.0)
        return cls(b, tie_ratio if dressed else None)

    @classmethod
    def around(cls, pulses: PulseSet, tie_ratio: float | None = None) -> "SearchSpace":
        """Degenerate box pinned to the parameters of ``pulses``."""
        values = pulse_values(pulses)
        b = {k: (v, v) for k, v in values.items()}
        return cls(b, tie_ratio)


def pulse_values(p: PulseSet) -> dict[str, float]:
    v = {
        "t_gate": p.t_gate,
        "omega_max": p.amp_r.omega_max,
        "width": p.amp_r.width,
        "omega_max_p": p.amp_rp.omega_max,
        "width_p": p.amp_rp.width,
        "delta0": p.phase.delta0,
        "delta1": p.phase.delta1,
        "delta2": p.phase.delta2,
        "alpha": p.phase.alpha,
    }
    if p.dressing.enabled:
        v["omega_d"] = p.dressing.omega_d
        v["delta_d"] = p.dressing.delta_d
    return v


def build_pulses(space: SearchSpace, genes: np.ndarray, template: PulseSet) -> PulseSet:
    """Overlay ``genes`` on the template's parameters."""
    v = pulse_values(template)
    v.update(dict(zip(space.names, (float(g) for g in genes))))
    t_gate = v["t_gate"]
    kind = template.phase.kind
    if kind == "linear" and ("delta1" in space.bounds or "delta2" in space.bounds):
        kind = "composite"
    if kind == "composite" and v["alpha"] != 2.0:
        kind = "generalized"
    if kind == "linear":
        phase = PhaseProfile(v["delta0"], kind="linear")
    else:
        phase = PhaseProfile(v["delta0"], v["delta1"], v["delta2"], v["alpha"], kind)
    dressing = template.dressing
    if "omega_d" in v:
        omega_d = v["omega_d"]
        delta_d = omega_d / space.tie_ratio if space.tie_ratio else v["delta_d"]
        dressing = DressingConfig(omega_d, delta_d, True) if omega_d > 0 else DressingConfig()
    return PulseSet(
        GaussianAmplitude(v["omega_max"], max(v["width"], 1e-6), t_gate),
        GaussianAmplitude(v["omega_max_p"], max(v["width_p"], 1e-6), t_gate),
        phase,
        dressing,
        t_gate,
    )


@dataclass
class OptimizeResult:
    pulses: PulseSet
    fidelity: float
    history: list[float]
    search_fidelity: float
    evaluations: int


def optimize(space: SearchSpace, template: ProtocolConfig, ga: GAConfig = GAConfig(),
             spec: IntegratorSpec = DEFAULT_SPEC, search_spec: IntegratorSpec | None = None,
             threads: int = 1) -> OptimizeResult:
    """Maximize the noise-free gate fidelity (decays as set in ``template``).

    The search uses ``search_spec`` (10 samples per dressing period unless
    given); the winner is re-evaluated with ``spec``.
    """
    search_spec = search_spec or replace(spec, samples_per_dressing_period=10)

    def fitness(genes: np.ndarray) -> float:
        try:
            cfg = replace(template, pulses=build_pulses(space, genes, template.pulses))
            return gate_fidelity(cfg, spec=search_spec).fidelity
        except (ConfigError, NumericalError):
            return -math.inf

    res = run_ga(space.box(), fitness, ga, threads)
    best = build_pulses(space, res.best, template.pulses)
    final = gate_fidelity(replace(template, pulses=best), spec=spec).fidelity
    return OptimizeResult(best, final, res.history, res.best_fitness, res.evaluations)
