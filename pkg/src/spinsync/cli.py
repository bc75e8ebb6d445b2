"""Command-line front end.

Runs are configured by a JSON file (see DEFAULT_CONFIG for the full key set;
unknown keys are rejected) plus a handful of flag overrides for the top-level
scalars. delta, epsilon and gamma_g are interpreted in units of gamma_d, and
gamma_d itself (default 1) sets the absolute scale; every command writes a
JSON sidecar recording both the configuration as given and the resolved
absolute rates. Identical configuration and package version produce
byte-identical output files.

Exit codes: 0 success, 1 configuration error, 2 solver error (the message
names the failing (delta, epsilon) point).
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import SteadyStateError, SystemParams, evolve, steady_state
from .experiments import (
    SweepSpec,
    arnold_sweep,
    breakdown_scan,
    qubit_nogo_report,
    spin_comparison,
)
from .husimi import coherent_amplitudes, husimi_q, make_grid, sync_measure
from .io import (
    density_to_json,
    write_json,
    write_phase_csv,
    write_qfield_csv,
    write_spin_table_csv,
    write_sweep_csv,
    write_trajectory_csv,
)
from .spin_algebra import SphereDirection, build_spin_algebra

__all__ = ["ConfigError", "DEFAULT_CONFIG", "load_config", "main"]


class ConfigError(Exception):
    """Invalid configuration (bad JSON, unknown keys, out-of-range values)."""


DEFAULT_CONFIG = {
    "spin": 1.0,
    "delta": 0.0,
    "epsilon": 0.01,
    "gamma_g": 0.1,
    "gamma_d": 1.0,
    "grid": {"n_theta": 64, "n_phi": 360},
    "solver": {"backend": "eigen", "dt_factor": 0.01},
    "output": "out",
    # t_final in units of 1/gamma_d; n_steps null means derived from dt_factor
    "evolve": {"t_final": 20.0, "n_steps": None, "store_every": 10},
    # sweep axes in units of gamma_min of the resolved rates
    "arnold": {
        "deltas": [round(-2.0 + 0.2 * k, 10) for k in range(21)],
        "epsilons": [round(0.05 * (k + 1), 10) for k in range(10)],
    },
    "breakdown": {"epsilons": [0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0]},
    "compare_spins": {"spins": [1, 2]},
    "nogo": {"theta": 0.0, "phi": 0.0, "n_lambda": 21},
}


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _check_number(cfg, key, minimum=None, strict_min=None):
    value = cfg[key]
    if not _is_number(value):
        raise ConfigError(f"{key} must be a number, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{key} must be >= {minimum}, got {value!r}")
    if strict_min is not None and value <= strict_min:
        raise ConfigError(f"{key} must be > {strict_min}, got {value!r}")


def _check_int(cfg, key, minimum):
    value = cfg[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ConfigError(f"{key} must be an integer >= {minimum}, got {value!r}")


def _check_keys(section, given, allowed):
    if not isinstance(given, dict):
        raise ConfigError(f"{section or 'config'} must be a JSON object, got {given!r}")
    unknown = set(given) - set(allowed)
    if unknown:
        where = f"{section}." if section else ""
        names = ", ".join(f"{where}{k}" for k in sorted(unknown))
        raise ConfigError(f"unknown config keys: {names}")


def _check_number_list(section, key, values, minimum=None):
    if not isinstance(values, list) or not values:
        raise ConfigError(f"{section}.{key} must be a non-empty list of numbers")
    for v in values:
        if not _is_number(v) or not math.isfinite(v):
            raise ConfigError(f"{section}.{key} entries must be finite numbers, got {v!r}")
        if minimum is not None and v < minimum:
            raise ConfigError(f"{section}.{key} entries must be >= {minimum}, got {v!r}")


def validate_config(cfg):
    """Reject unknown keys and out-of-range values. Returns cfg unchanged."""
    _check_keys("", cfg, DEFAULT_CONFIG)
    for key in ("spin", "delta", "epsilon", "gamma_g", "gamma_d"):
        _check_number(cfg, key)
    if cfg["gamma_d"] <= 0.0:
        raise ConfigError("gamma_d must be positive; it sets the rate unit")
    grid = cfg["grid"]
    _check_keys("grid", grid, DEFAULT_CONFIG["grid"])
    _check_int(grid, "n_theta", 2)
    _check_int(grid, "n_phi", 2)
    solver = cfg["solver"]
    _check_keys("solver", solver, DEFAULT_CONFIG["solver"])
    if solver["backend"] not in ("eigen", "linear"):
        raise ConfigError(f"solver.backend must be 'eigen' or 'linear', got {solver['backend']!r}")
    _check_number(solver, "dt_factor", strict_min=0.0)
    if not isinstance(cfg["output"], str) or not cfg["output"]:
        raise ConfigError("output must be a non-empty path string")
    ev = cfg["evolve"]
    _check_keys("evolve", ev, DEFAULT_CONFIG["evolve"])
    _check_number(ev, "t_final", strict_min=0.0)
    if ev["n_steps"] is not None:
        _check_int(ev, "n_steps", 1)
    _check_int(ev, "store_every", 1)
    arnold = cfg["arnold"]
    _check_keys("arnold", arnold, DEFAULT_CONFIG["arnold"])
    _check_number_list("arnold", "deltas", arnold["deltas"])
    _check_number_list("arnold", "epsilons", arnold["epsilons"], minimum=0.0)
    breakdown = cfg["breakdown"]
    _check_keys("breakdown", breakdown, DEFAULT_CONFIG["breakdown"])
    _check_number_list("breakdown", "epsilons", breakdown["epsilons"], minimum=0.0)
    compare = cfg["compare_spins"]
    _check_keys("compare_spins", compare, DEFAULT_CONFIG["compare_spins"])
    _check_number_list("compare_spins", "spins", compare["spins"], minimum=1)
    nogo = cfg["nogo"]
    _check_keys("nogo", nogo, DEFAULT_CONFIG["nogo"])
    _check_number(nogo, "theta")
    _check_number(nogo, "phi")
    _check_int(nogo, "n_lambda", 2)
    return cfg


def load_config(args):
    """Merge defaults, the optional config file, and flag overrides."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(user, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in user.items():
            if isinstance(value, dict) and isinstance(cfg.get(key), dict):
                cfg[key].update(value)
            else:
                cfg[key] = value
    for key in ("spin", "delta", "epsilon", "gamma_g", "gamma_d"):
        override = getattr(args, key)
        if override is not None:
            cfg[key] = override
    if args.output_dir is not None:
        cfg["output"] = args.output_dir
    return validate_config(cfg)


def _resolved_params(cfg):
    """Absolute-rate SystemParams; config rates are in units of gamma_d."""
    gamma_d = float(cfg["gamma_d"])
    try:
        return SystemParams(
            spin=cfg["spin"],
            delta=cfg["delta"] * gamma_d,
            epsilon=cfg["epsilon"] * gamma_d,
            gamma_g=cfg["gamma_g"] * gamma_d,
            gamma_d=gamma_d,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _sidecar(cfg, params, command, extra=None):
    doc = {
        "command": command,
        "version": __version__,
        "config": cfg,
        "resolved": {
            "spin": params.spin,
            "delta": params.delta,
            "epsilon": params.epsilon,
            "gamma_g": params.gamma_g,
            "gamma_d": params.gamma_d,
            "gamma_min": params.gamma_min,
        },
        "units": {"config_rates": "gamma_d", "sweep_axes": "gamma_min"},
    }
    if extra:
        doc.update(extra)
    return doc


def _solve_steady(params, backend):
    try:
        return steady_state(params, backend=backend)
    except SteadyStateError as exc:
        raise SteadyStateError(
            f"at (delta={params.delta:.6g}, epsilon={params.epsilon:.6g}): {exc}"
        ) from None


def _sweep_errors(result):
    return [
        {"delta": r.delta, "epsilon": r.epsilon, "message": r.error}
        for r in result.rows
        if r.error is not None
    ]


def _raise_if_all_failed(result):
    if all(r.error is not None for r in result.rows):
        first = result.rows[0]
        raise SteadyStateError(
            f"every sweep point failed; first failure at "
            f"(delta={first.delta:.6g}, epsilon={first.epsilon:.6g}): {first.error}"
        )


def cmd_qfunc(cfg, outdir, threads):
    params = _resolved_params(cfg)
    alg = build_spin_algebra(params.spin)
    grid = make_grid(cfg["grid"]["n_theta"], cfg["grid"]["n_phi"])
    rho = _solve_steady(params, cfg["solver"]["backend"])
    q = husimi_q(rho, alg, grid)
    write_qfield_csv(outdir / "qfield.csv", q)
    write_json(outdir / "qfunc_params.json", _sidecar(cfg, params, "qfunc"))


def cmd_steady(cfg, outdir, threads):
    params = _resolved_params(cfg)
    alg = build_spin_algebra(params.spin)
    grid = make_grid(cfg["grid"]["n_theta"], cfg["grid"]["n_phi"])
    rho = _solve_steady(params, cfg["solver"]["backend"])
    write_json(outdir / "steady.json", density_to_json(rho))
    write_phase_csv(outdir / "phase.csv", sync_measure(husimi_q(rho, alg, grid)))
    write_json(outdir / "steady_params.json", _sidecar(cfg, params, "steady"))


def cmd_evolve(cfg, outdir, threads):
    params = _resolved_params(cfg)
    if params.spin != round(params.spin):
        raise ConfigError("evolve starts from |S,0><S,0|, which needs integer spin")
    alg = build_spin_algebra(params.spin)
    grid = make_grid(cfg["grid"]["n_theta"], cfg["grid"]["n_phi"])
    t_final = cfg["evolve"]["t_final"] / params.gamma_d
    n_steps = cfg["evolve"]["n_steps"]
    if n_steps is None:
        max_rate = max(abs(params.delta), params.epsilon, params.gamma_g, params.gamma_d)
        n_steps = max(1, math.ceil(t_final * max_rate / cfg["solver"]["dt_factor"]))
    store_every = cfg["evolve"]["store_every"]
    zero_index = round(params.spin)  # basis is m = S..-S, so m = 0 sits at S
    rho0 = np.zeros((alg.dim, alg.dim), dtype=complex)
    rho0[zero_index, zero_index] = 1.0
    try:
        traj = evolve(params, rho0, t_final, n_steps)
    except ValueError as exc:
        raise SteadyStateError(
            f"at (delta={params.delta:.6g}, epsilon={params.epsilon:.6g}): {exc}"
        ) from None
    amps = coherent_amplitudes(alg, grid)
    keep = range(0, n_steps + 1, store_every)
    svalues = [
        sync_measure(husimi_q(traj.states[k], alg, grid, amplitudes=amps)).values
        for k in keep
    ]
    times = [traj.times[k] for k in keep]
    write_trajectory_csv(outdir / "trajectory.csv", times, grid.phi_nodes, svalues)
    write_json(
        outdir / "evolve_params.json",
        _sidecar(cfg, params, "evolve", {"n_steps": int(n_steps), "t_final": float(t_final)}),
    )


def cmd_arnold(cfg, outdir, threads):
    params = _resolved_params(cfg)
    try:
        spec = SweepSpec(
            base=params,
            deltas=tuple(cfg["arnold"]["deltas"]),
            epsilons=tuple(cfg["arnold"]["epsilons"]),
            n_theta=cfg["grid"]["n_theta"],
            n_phi=cfg["grid"]["n_phi"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    result = arnold_sweep(spec, threads=threads)
    _raise_if_all_failed(result)
    write_sweep_csv(outdir / "arnold.csv", result)
    write_json(
        outdir / "arnold_params.json",
        _sidecar(cfg, params, "arnold", {"errors": _sweep_errors(result)}),
    )


def cmd_breakdown(cfg, outdir, threads):
    params = _resolved_params(cfg)
    try:
        result = breakdown_scan(
            params,
            cfg["breakdown"]["epsilons"],
            n_theta=cfg["grid"]["n_theta"],
            n_phi=cfg["grid"]["n_phi"],
            threads=threads,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    _raise_if_all_failed(result)
    write_sweep_csv(outdir / "breakdown.csv", result)
    write_json(
        outdir / "breakdown_params.json",
        _sidecar(cfg, params, "breakdown", {"errors": _sweep_errors(result)}),
    )


def cmd_nogo(cfg, outdir, threads):
    params = _resolved_params(cfg)
    try:
        axis = SphereDirection(theta=cfg["nogo"]["theta"], phi=cfg["nogo"]["phi"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    report = qubit_nogo_report(
        axis,
        gamma_g=params.gamma_g,
        gamma_d=params.gamma_d,
        n_lambda=cfg["nogo"]["n_lambda"],
        n_theta=cfg["grid"]["n_theta"],
        n_phi=cfg["grid"]["n_phi"],
    )
    report["version"] = __version__
    write_json(outdir / "nogo.json", report)


def cmd_compare_spins(cfg, outdir, threads):
    params = _resolved_params(cfg)
    try:
        pairs = spin_comparison(
            cfg["compare_spins"]["spins"],
            params,
            n_theta=cfg["grid"]["n_theta"],
            n_phi=cfg["grid"]["n_phi"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    write_spin_table_csv(outdir / "spins.csv", pairs)
    write_json(outdir / "spins_params.json", _sidecar(cfg, params, "compare-spins"))


_COMMANDS = {
    "qfunc": cmd_qfunc,
    "steady": cmd_steady,
    "evolve": cmd_evolve,
    "arnold": cmd_arnold,
    "breakdown": cmd_breakdown,
    "nogo": cmd_nogo,
    "compare-spins": cmd_compare_spins,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; route that through ConfigError
    # so flag problems share exit code 1 with the other configuration errors
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="spinsync", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"spinsync {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    descriptions = {
        "qfunc": "steady-state Husimi Q field on the sphere grid (qfield.csv)",
        "steady": "steady-state density matrix and phase distribution (steady.json, phase.csv)",
        "evolve": "transient S(phi, t) from the undriven dark state (trajectory.csv)",
        "arnold": "locking tongue over the (delta, epsilon) grid (arnold.csv)",
        "breakdown": "resonant limit-cycle deformation versus epsilon (breakdown.csv)",
        "nogo": "spin-1/2 no-synchronization report (nogo.json)",
        "compare-spins": "resonant peak heights across spins (spins.csv)",
    }
    for name, desc in descriptions.items():
        cmd = sub.add_parser(name, help=desc, description=desc)
        cmd.add_argument("--config", default=None, help="JSON configuration file")
        cmd.add_argument("--output-dir", default=None, help="output directory (default: config's output)")
        cmd.add_argument("--threads", type=int, default=1, help="worker threads for sweep points")
        cmd.add_argument("--spin", type=float, default=None)
        cmd.add_argument("--delta", type=float, default=None, help="detuning in units of gamma_d")
        cmd.add_argument("--epsilon", type=float, default=None, help="signal strength in units of gamma_d")
        cmd.add_argument("--gamma-g", dest="gamma_g", type=float, default=None, help="gain rate in units of gamma_d")
        cmd.add_argument("--gamma-d", dest="gamma_d", type=float, default=None, help="damping rate (sets the unit)")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
        cfg = load_config(args)
        outdir = Path(cfg["output"])
        outdir.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](cfg, outdir, args.threads)
    except ConfigError as exc:
        print(f"spinsync: config error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"spinsync: config error: {exc}", file=sys.stderr)
        return 1
    except SteadyStateError as exc:
        print(f"spinsync: solver error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
