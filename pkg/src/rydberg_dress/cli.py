"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Sweep curves are written as CSV, single runs and optimizer reports as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import scenarios
from .atomlib import WavevectorSpec, dressing_k, sensitivity_chi, two_photon_k
from .config import RunConfig, from_dict, load_config, sweep_from_dict
from .dopplermc import default_threads, sweep
from .errors import ConfigError, NumericalError, RydbergDressError
from .gaopt import GAConfig, SearchSpace, optimize, pulse_values
from .gatemetrics import error_decomposition, gate_fidelity
from .protect import TransferConfig, bessel_ratio, insensitive_scan
from .protocol import NoiseSample
from .pulseshape import DressingConfig, NO_DRESSING
from .runner import ScenarioRunner, transfer_curve

TWO_PI = 2.0 * math.pi
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _floats(text: str) -> list[float]:
    """Parse ``a,b,c`` or ``start:stop:step`` (inclusive stop)."""
    try:
        if ":" in text:
            start, stop, step = (float(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [float(np.round(start + i * step, 12)) for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def _run_config(args) -> RunConfig:
    if bool(args.config) == bool(args.scenario):
        raise ConfigError("give exactly one of --scenario or --config")
    if args.config:
        rc = load_config(args.config)
    else:
        rc = from_dict({"scenario": args.scenario})
    if getattr(args, "samples_per_period", None):
        rc = replace(rc, integrator=replace(rc.integrator,
                                            samples_per_dressing_period=args.samples_per_period))
    if getattr(args, "ideal", False):
        rc = replace(rc, protocol=rc.protocol.without_decay())
    return rc


# subcommands -------------------------------------------------------------------

def cmd_chi(args) -> int:
    k = WavevectorSpec(two_photon_k(args.lambda_up, args.lambda_lower), dressing_k(args.lambda_a))
    chi = sensitivity_chi(k)
    _emit(f"k_r={k.k_r:.3f} k_a={k.k_a:.3f} chi={chi:.3f}\n", None)
    return EXIT_OK


def cmd_simulate(args) -> int:
    rc = _run_config(args)
    noise = NoiseSample(TWO_PI * args.delta_mhz,
                        TWO_PI * (args.delta_t_mhz if args.delta_t_mhz is not None else args.delta_mhz),
                        TWO_PI * args.delta_prime_mhz)
    res = gate_fidelity(rc.protocol, noise, rc.integrator)
    body = {
        "fidelity": res.fidelity,
        "per_state": res.per_state,
        "P_r_us": res.p_r,
        "P_a_us": res.p_a,
        "populations_us": res.populations,
    }
    if args.decomposition:
        eps_r, eps_a = error_decomposition(rc.protocol, noise, rc.integrator)
        body["epsilon_r"], body["epsilon_a"] = eps_r, eps_a
    _emit(_json(body), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rc = _run_config(args)
    if args.axis is not None:
        doc = {"axis": args.axis, "grid": _floats(args.grid), "samples": args.samples,
               "seed": args.seed, "delta_mode": args.delta_mode,
               "temperature_K": args.temperature,
               "delta_prime_bound_mhz": args.delta_prime_bound_mhz}
        if args.grid2:
            doc["grid2"] = _floats(args.grid2)
        sw = sweep_from_dict(doc)
    elif rc.sweep is not None:
        sw = rc.sweep
    else:
        raise ConfigError("no sweep given: use --axis/--grid or a config with a sweep section")
    res = sweep(rc.protocol, sw, rc.integrator, args.threads or default_threads())
    _emit(_csv(sw.header(), res.csv_rows()), args.out)
    return EXIT_OK


def cmd_insensitive(args) -> int:
    ratios = _floats(args.ratios)
    deltas = [TWO_PI * d for d in _floats(args.deltas_mhz)]
    probe = TransferConfig(TWO_PI * args.probe_omega_mhz, args.tau)
    res = insensitive_scan(args.chi, TWO_PI * args.omega_d_mhz, ratios, deltas, probe,
                           threads=args.threads or default_threads())
    try:
        closed = bessel_ratio(args.chi)
    except NumericalError:
        closed = float("nan")
    sys.stderr.write(f"best ratio {res.best_ratio:.4f} (closed form {closed:.6f})\n")
    _emit(_csv(["ratio", "score"], [[r, s] for r, s in zip(res.ratios, res.scores)]), args.out)
    return EXIT_OK


def cmd_transfer(args) -> int:
    if args.scenario:
        scn = scenarios.load(args.scenario)
        if not scn.is_transfer:
            raise ConfigError(f"scenario {args.scenario!r} is not a transfer scenario")
        t = scn.transfer
    else:
        if args.omega_r_mhz is None:
            raise ConfigError("give --scenario or --omega-r-mhz")
        dressing = NO_DRESSING
        if args.omega_d_mhz:
            if not args.delta_d_mhz:
                raise ConfigError("--omega-d-mhz needs --delta-d-mhz")
            dressing = DressingConfig(TWO_PI * args.omega_d_mhz, TWO_PI * args.delta_d_mhz, True)
        t = TransferConfig(TWO_PI * args.omega_r_mhz, args.tau, dressing, args.chi)
    curve = transfer_curve(t, _floats(args.deltas_mhz))
    _emit(_csv(["delta_MHz", "infidelity"], [list(p) for p in curve]), args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    rc = _run_config(args)
    cfg = rc.protocol
    dressed = cfg.pulses.dressing.enabled
    if args.degenerate:
        space = SearchSpace.around(cfg.pulses)
    else:
        tie = None if args.free_detuning else (args.tie_ratio or cfg.pulses.dressing.ratio or 0.698)
        space = SearchSpace.default(dressed, args.cap_mhz, tie,
                                    generalized=cfg.pulses.phase.kind == "generalized")
    ga = GAConfig(population=args.population, generations=args.generations, seed=args.seed)
    res = optimize(space, cfg, ga, rc.integrator, threads=args.threads or default_threads())
    values = pulse_values(res.pulses)
    best = {
        "t_gate_us": values["t_gate"],
        "omega_max_mhz": values["omega_max"] / TWO_PI,
        "width_us": values["width"],
        "omega_max_p_mhz": values["omega_max_p"] / TWO_PI,
        "width_p_us": values["width_p"],
        "delta0_mhz": values["delta0"] / TWO_PI,
        "delta1_2pi": values["delta1"] / TWO_PI,
        "delta2_2pi": values["delta2"] / TWO_PI,
        "alpha": values["alpha"],
        "phase_kind": res.pulses.phase.kind,
    }
    if "omega_d" in values:
        best["omega_d_mhz"] = values["omega_d"] / TWO_PI
        best["delta_d_mhz"] = values["delta_d"] / TWO_PI
    body = {"fidelity": res.fidelity, "search_fidelity": res.search_fidelity,
            "history": res.history, "evaluations": res.evaluations, "pulses": best,
            "seed": args.seed}
    _emit(_json(body), args.out)
    return EXIT_OK


def cmd_scenario(args) -> int:
    if args.action == "list":
        lines = [f"{sid}\t{title}\n" for sid, title in scenarios.list_scenarios()]
        _emit("".join(lines), args.out)
        return EXIT_OK
    if not args.id:
        raise ConfigError("scenario run needs an id")
    scn = scenarios.load(args.id)
    spec = replace(_default_spec(), samples_per_dressing_period=args.samples_per_period) \
        if args.samples_per_period else _default_spec()
    runner = ScenarioRunner(scn, args.samples, args.seed, spec, args.threads or default_threads())
    _emit(_json(runner.report()), args.out)
    return EXIT_OK


def _default_spec():
    from .evolve import DEFAULT_SPEC
    return DEFAULT_SPEC


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rydberg-dress",
                                description="Doppler-protected Rydberg CNOT gate simulator")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, source=True):
        if source:
            sp.add_argument("--scenario", help="built-in scenario id")
            sp.add_argument("--config", help="JSON configuration file")
            sp.add_argument("--samples-per-period", type=int, default=None,
                            help="integrator steps per dressing period")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $RYDBERG_DRESS_THREADS or CPU count)")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("chi", help="wavevectors and sensitivity factor")
    sp.add_argument("--lambda-up", type=float, required=True, help="upper excitation wavelength, nm")
    sp.add_argument("--lambda-lower", type=float, required=True, help="lower excitation wavelength, nm")
    sp.add_argument("--lambda-a", type=float, required=True, help="dressing wavelength, nm")
    sp.set_defaults(func=cmd_chi)

    sp = sub.add_parser("simulate", help="one gate run, JSON report")
    common(sp)
    sp.add_argument("--ideal", action="store_true", help="switch all decays off")
    sp.add_argument("--delta-mhz", type=float, default=0.0, help="Doppler shift δ/2π (both atoms)")
    sp.add_argument("--delta-t-mhz", type=float, default=None, help="separate target shift δ/2π")
    sp.add_argument("--delta-prime-mhz", type=float, default=0.0, help="extra detuning δ′/2π")
    sp.add_argument("--decomposition", action="store_true", help="also report ε_r and ε_a")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="deterministic or Monte Carlo sweep, CSV output")
    common(sp)
    sp.add_argument("--ideal", action="store_true", help="switch all decays off")
    sp.add_argument("--axis", choices=("delta", "delta_prime", "temperature", "ratio2d"))
    sp.add_argument("--grid", help="values: a,b,c or start:stop:step (MHz for δ axes, K for T)")
    sp.add_argument("--grid2", help="δ′ bounds in MHz for the ratio2d axis")
    sp.add_argument("--samples", type=int, default=300)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--delta-mode", choices=("common", "control"), default="common")
    sp.add_argument("--temperature", type=float, default=0.0, help="K, for the delta_prime axis")
    sp.add_argument("--delta-prime-bound-mhz", type=float, default=0.0,
                    help="uniform δ′ bound for the temperature axis")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("insensitive", help="scan Ω_d/Δ_d for the flattest transfer")
    common(sp, source=False)
    sp.add_argument("--chi", type=float, required=True)
    sp.add_argument("--omega-d-mhz", type=float, default=200.0)
    sp.add_argument("--ratios", default="0.3:1.3:0.01")
    sp.add_argument("--deltas-mhz", default="-1,-0.5,0.5,1")
    sp.add_argument("--probe-omega-mhz", type=float, default=1.0)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.set_defaults(func=cmd_insensitive)

    sp = sub.add_parser("transfer", help="single-atom transfer infidelity versus δ")
    common(sp, source=False)
    sp.add_argument("--scenario", help="t4-* scenario id")
    sp.add_argument("--omega-r-mhz", type=float)
    sp.add_argument("--omega-d-mhz", type=float)
    sp.add_argument("--delta-d-mhz", type=float)
    sp.add_argument("--chi", type=float, default=1.0)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--deltas-mhz", default="-1:1:0.1")
    sp.set_defaults(func=cmd_transfer)

    sp = sub.add_parser("optimize", help="genetic search over pulse parameters, JSON report")
    common(sp)
    sp.add_argument("--population", type=int, default=64)
    sp.add_argument("--generations", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--cap-mhz", type=float, default=10.0, help="Rabi frequency cap Ω/2π")
    sp.add_argument("--tie-ratio", type=float, default=None, help="fix Δ_d = Ω_d / ratio")
    sp.add_argument("--free-detuning", action="store_true", help="search Δ_d independently")
    sp.add_argument("--degenerate", action="store_true",
                    help="pin every bound to the starting parameters")
    sp.add_argument("--ideal", action="store_true", help="optimize without decays")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("scenario", help="list or run built-in scenarios")
    sp.add_argument("action", choices=("list", "run"))
    sp.add_argument("id", nargs="?")
    sp.add_argument("--samples", type=int, default=300, help="Monte Carlo samples per point")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples-per-period", type=int, default=None)
    common(sp, source=False)
    sp.set_defaults(func=cmd_scenario)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except NumericalError as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERICAL
    except RydbergDressError as exc:  # pragma: no cover - every subclass is mapped above
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())
