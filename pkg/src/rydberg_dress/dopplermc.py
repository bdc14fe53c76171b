"""Thermal Doppler sampling and the sweep drivers.

Every Monte Carlo sample draws its own generator from
``SeedSequence([master_seed, point_index, sample_index])``, so results do not
depend on how the work is scheduled across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .atomlib import DEFAULT_WAVEVECTORS, RB87, SpeciesData, ThermalModel, WavevectorSpec, v_rms
from .errors import ConfigError
from .evolve import DEFAULT_SPEC, IntegratorSpec
from .gatemetrics import gate_fidelity
from .protocol import NoiseSample, ProtocolConfig

AXES = ("delta", "delta_prime", "temperature", "ratio2d")
DELTA_MODES = ("common", "control")
THREADS_ENV = "RYDBERG_DRESS_THREADS"
TWO_PI = 2.0 * math.pi


def default_threads() -> int:
    """Worker count: ``$RYDBERG_DRESS_THREADS`` if set, else the usable CPUs."""
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1")
        return n
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return max(1, os.cpu_count() or 1)


def sample_rng(master_seed: int, point: int, sample: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, point, sample]))


def sample_noise(model: ThermalModel, k: WavevectorSpec, delta_prime_bound: float,
                 rng: np.random.Generator) -> NoiseSample:
    """Draw independent Doppler shifts ``k_r v`` for both atoms and a uniform ``δ′``.

    The two velocity draws always come first, so a zero ``δ′`` bound leaves
    the Doppler sequence unchanged.
    """
    sigma = v_rms(model)
    v_c, v_t = rng.normal(0.0, 1.0, size=2) * sigma
    dp = rng.uniform(-delta_prime_bound, delta_prime_bound) if delta_prime_bound > 0 else 0.0
    return NoiseSample(k.k_r * v_c, k.k_r * v_t, float(dp))


@dataclass(frozen=True)
class SweepSpec:
    """One sweep.

    Parameters
    ----------
    axis : str
        ``delta`` (deterministic shift, rad/μs), ``delta_prime`` (uniform
        ``δ′`` bound, rad/μs, Monte Carlo at ``temperature``), ``temperature``
        (K, Monte Carlo with ``delta_prime_bound``) or ``ratio2d`` (every
        pair of ``grid`` temperatures and ``grid2`` ``δ′`` bounds).
    grid : sequence of float
        Strictly increasing axis values.
    samples_per_point : int
        Monte Carlo realizations per point (ignored for ``delta``).
    delta_mode : str
        For ``delta``: shift both atoms (``common``) or the control only.
    """

    axis: str
    grid: tuple[float, ...]
    samples_per_point: int = 300
    master_seed: int = 0
    delta_mode: str = "common"
    temperature: float = 0.0
    delta_prime_bound: float = 0.0
    grid2: tuple[float, ...] = ()
    species: SpeciesData = RB87
    wavevectors: WavevectorSpec = DEFAULT_WAVEVECTORS

    def __post_init__(self) -> None:
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        object.__setattr__(self, "grid2", tuple(float(g) for g in self.grid2))
        if self.axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.axis!r}; expected one of {AXES}")
        if self.delta_mode not in DELTA_MODES:
            raise ConfigError(f"unknown delta mode {self.delta_mode!r}")
        if self.samples_per_point < 1:
            raise ConfigError("samples_per_point must be >= 1")
        _check_grid(self.grid, "grid")
        if self.axis == "ratio2d":
            _check_grid(self.grid2, "grid2")
        if self.axis in ("temperature", "ratio2d") and self.grid[0] < 0:
            raise ConfigError("temperatures must be >= 0")
        if self.axis in ("delta_prime",) and self.grid[0] < 0:
            raise ConfigError("delta_prime bounds must be >= 0")
        if self.axis == "ratio2d" and self.grid2[0] < 0:
            raise ConfigError("delta_prime bounds must be >= 0")

    def points(self) -> list[tuple[float, ...]]:
        if self.axis == "ratio2d":
            return [(t, b) for t in self.grid for b in self.grid2]
        return [(g,) for g in self.grid]

    def noise_setting(self, point: tuple[float, ...]) -> tuple[float, float]:
        """``(temperature, δ′ bound)`` of a Monte Carlo point."""
        if self.axis == "temperature":
            return point[0], self.delta_prime_bound
        if self.axis == "delta_prime":
            return self.temperature, point[0]
        return point[0], point[1]

    def header(self) -> list[str]:
        axis_cols = {
            "delta": ["delta_MHz"],
            "delta_prime": ["delta_prime_MHz"],
            "temperature": ["T_K"],
            "ratio2d": ["T_K", "delta_prime_MHz"],
        }[self.axis]
        return axis_cols + ["F_mean", "F_stderr", "P_r_us", "P_a_us"]


def _check_grid(grid: tuple[float, ...], name: str) -> None:
    if not grid:
        raise ConfigError(f"sweep {name} must be nonempty")
    if not all(math.isfinite(g) for g in grid):
        raise ConfigError(f"sweep {name} values must be finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError(f"sweep {name} must be strictly increasing")


@dataclass(frozen=True)
class SweepRow:
    axis_values: tuple[float, ...]
    f_mean: float
    f_stderr: float
    p_r: float
    p_a: float
    n_samples: int = 1


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow] = field(default_factory=list)

    def csv_rows(self) -> list[list[str]]:
        """Rows formatted for CSV output; frequency axes are given as ``δ/2π`` in MHz."""
        out = []
        for row in self.rows:
            axis = list(row.axis_values)
            if self.spec.axis in ("delta", "delta_prime"):
                axis = [axis[0] / TWO_PI]
            elif self.spec.axis == "ratio2d":
                axis = [axis[0], axis[1] / TWO_PI]
            out.append([repr(float(v)) for v in axis + [row.f_mean, row.f_stderr, row.p_r, row.p_a]])
        return out


Evaluator = Callable[[NoiseSample], tuple[float, float, float]]


def gate_evaluator(cfg: ProtocolConfig, spec: IntegratorSpec = DEFAULT_SPEC) -> Evaluator:
    def evaluate(noise: NoiseSample) -> tuple[float, float, float]:
        res = gate_fidelity(cfg, noise, spec)
        return res.fidelity, res.p_r, res.p_a

    return evaluate


def _summarize(point: tuple[float, ...], values: list[tuple[float, float, float]]) -> SweepRow:
    arr = np.array(values, dtype=float)
    n = arr.shape[0]
    f_mean = float(np.mean(arr[:, 0]))
    stderr = float(np.std(arr[:, 0], ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return SweepRow(point, f_mean, stderr, float(np.mean(arr[:, 1])), float(np.mean(arr[:, 2])), n)


def sweep(cfg: ProtocolConfig | None, sw: SweepSpec, spec: IntegratorSpec = DEFAULT_SPEC,
          threads: int | None = None, evaluator: Evaluator | None = None) -> SweepResult:
    """Run a sweep and return one row per grid point (or grid pair).

    Monte Carlo points whose noise distribution is degenerate (zero
    temperature and zero ``δ′`` bound) are evaluated once: every sample would
    be the noise-free gate, so the mean equals it exactly.
    """
    if evaluator is None:
        if cfg is None:
            raise ConfigError("sweep needs a protocol configuration or an evaluator")
        evaluator = gate_evaluator(cfg, spec)
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ConfigError("threads must be >= 1")

    tasks: list[tuple[int, NoiseSample]] = []
    for p_idx, point in enumerate(sw.points()):
        if sw.axis == "delta":
            d = point[0]
            noise = NoiseSample(d, d if sw.delta_mode == "common" else 0.0, 0.0)
            tasks.append((p_idx, noise))
            continue
        temperature, bound = sw.noise_setting(point)
        if temperature == 0.0 and bound == 0.0:
            tasks.append((p_idx, NoiseSample()))
            continue
        model = ThermalModel(temperature, sw.species)
        for s_idx in range(sw.samples_per_point):
            rng = sample_rng(sw.master_seed, p_idx, s_idx)
            tasks.append((p_idx, sample_noise(model, sw.wavevectors, bound, rng)))

    if threads == 1:
        values = [evaluator(noise) for _, noise in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(evaluator, [noise for _, noise in tasks]))

    grouped: dict[int, list[tuple[float, float, float]]] = {}
    for (p_idx, _), value in zip(tasks, values):
        grouped.setdefault(p_idx, []).append(value)
    points = sw.points()
    return SweepResult(sw, [_summarize(points[i], grouped[i]) for i in range(len(points))])
