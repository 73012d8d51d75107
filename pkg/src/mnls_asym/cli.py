"""Command line entry point: ``mnls-asym {scatter,asymptotic,evolve,compare,selftest}``.

Exit codes: 0 success, 1 a check failed, 2 invalid configuration, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .asymptotics import prepare_ray, q_asym
from .config import ExperimentConfig, config_from_dict
from .errors import ConfigError, MNLSError
from .experiment import UNITARITY_TOL, build_scattering, initial_profile, run_compare
from .pde import Field, dealias, evolve, mass
from .selftest import FAULTS, selftest
from .tables import write_field, write_json, write_scattering, write_scattering_vertical

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

# flag -> (section, key, type); section None means top level
_OVERRIDES = {
    "a": (None, "a", float),
    "b": (None, "b", float),
    "family": ("initial", "family", str),
    "amplitude": ("initial", "amplitude", float),
    "chirp": ("initial", "chirp", float),
    "initial_path": ("initial", "path", str),
    "rays": (None, "rays", None),
    "t_min": ("schedule", "t_min", float),
    "t_max": ("schedule", "t_max", float),
    "n_times": ("schedule", "n", int),
    "fit_exclude_fraction": (None, "fit_exclude_fraction", float),
    "validity_floor": (None, "validity_floor", float),
    "L": ("scattering", "L", float),
    "dx": ("scattering", "dx", float),
    "lambda_half_width": ("scattering", "lambda_half_width", float),
    "lambda_spacing": ("scattering", "lambda_spacing", float),
    "refine_levels": ("scattering", "refine_levels", int),
    "dt": ("pde", "dt", float),
    "half_length": ("pde", "half_length", float),
    "grid_size": ("pde", "grid_size", int),
    "variant": (None, "variant", str),
    "output_dir": (None, "output_dir", str),
    "seed": (None, "seed", int),
}


def _add_config_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="JSON config file; flags override its values")
    g = sp.add_argument_group("config overrides")
    g.add_argument("--a", type=float)
    g.add_argument("--b", type=float)
    g.add_argument("--family", choices=["sech", "gaussian", "file", "zero"])
    g.add_argument("--amplitude", type=float)
    g.add_argument("--chirp", type=float)
    g.add_argument("--initial-path", dest="initial_path")
    g.add_argument("--rays", type=float, nargs="+", metavar="Z0")
    g.add_argument("--t-min", type=float)
    g.add_argument("--t-max", type=float)
    g.add_argument("--n-times", type=int)
    g.add_argument("--fit-exclude-fraction", type=float)
    g.add_argument("--validity-floor", type=float)
    g.add_argument("--L", type=float, dest="L", help="scattering half-window")
    g.add_argument("--dx", type=float)
    g.add_argument("--lambda-half-width", type=float)
    g.add_argument("--lambda-spacing", type=float)
    g.add_argument("--refine-levels", type=int)
    g.add_argument("--dt", type=float)
    g.add_argument("--half-length", type=float, help="PDE box half-length L_p")
    g.add_argument("--grid-size", type=int)
    g.add_argument("--variant", choices=["gauge", "literal"])
    g.add_argument("--output-dir")
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int, help="worker count (default: NLS_ASYM_THREADS or CPU count)")


def resolve_config(args) -> ExperimentConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    for flag, (section, key, _) in _OVERRIDES.items():
        v = getattr(args, flag, None)
        if v is None:
            continue
        if section is None:
            data[key] = v
        else:
            data.setdefault(section, {})
            if not isinstance(data[section], dict):
                raise ConfigError(f"{section} must be a JSON object")
            data[section][key] = v
    return config_from_dict(data)


def _cmd_scatter(args) -> int:
    cfg = resolve_config(args)
    sd = build_scattering(cfg)
    out = Path(cfg.output_dir)
    write_scattering(out / "scattering.csv", sd)
    write_scattering_vertical(out / "scattering_vertical.csv", sd)
    u = float(np.max(sd.unitarity_defect()))
    ok = u <= UNITARITY_TOL
    print(f"unitarity defect {u:.3e} ({'PASS' if ok else 'FAIL'}); wrote {out / 'scattering.csv'}")
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_asymptotic(args) -> int:
    cfg = resolve_config(args)
    p = cfg.params
    sd = build_scattering(cfg)
    rays = []
    for z0 in cfg.rays:
        ai = prepare_ray(z0, sd, p, cfg.variant)
        rows = []
        for t in args.times:
            x = -4 * z0 * t
            q = q_asym(x, t, ai)
            rows.append({"t": t, "x": x, "q_asym": [q.real, q.imag]})
        rays.append({"z0": z0, "lambda0": ai.lambda0, "nu0": ai.nu0, "absalpha": ai.absalpha,
                     "argalpha": ai.argalpha, "tail_integral": ai.tail_integral,
                     "m_infinity": ai.m_infinity, "variant": ai.variant, "values": rows})
        print(f"z0 = {z0:+.4f}  lambda0 = {ai.lambda0:.6f}  nu0 = {ai.nu0:.6e}  "
              f"|alpha| = {ai.absalpha:.6e}  arg alpha = {ai.argalpha:+.6f}")
    write_json(Path(cfg.output_dir) / "asymptotic.json", {"config": cfg.to_dict(), "rays": rays})
    return EXIT_OK


def _cmd_evolve(args) -> int:
    cfg = resolve_config(args)
    kn = cfg.pde
    init = dealias(Field.on_grid(initial_profile(cfg), kn.half_length, kn.grid_size))
    f = evolve(init, args.time, kn.dt, cfg.params, args.threads)
    path = write_field(Path(cfg.output_dir) / f"field_t{args.time:g}.csv", f)
    m0 = mass(init)
    drift = abs(mass(f) - m0) / m0 if m0 > 0 else mass(f)
    print(f"evolved to t = {f.time:g}; relative mass drift {drift:.3e}; wrote {path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = resolve_config(args)
    s = run_compare(cfg, workers=args.threads, out_dir=cfg.output_dir)
    print(f"unitarity {s['unitarity_max']:.3e}  mass drift {s['mass_drift_max']:.3e}  guard {s['guard_max']:.3e}")
    for r in s["rays"]:
        fit = r["fit"]
        slope = "skipped" if fit is None else f"{fit['slope']:+.3f} +- {fit['half_width']:.3f}"
        mod = "n/a" if r["modulus_deviation"] is None else f"{r['modulus_deviation']:.3%}"
        print(f"z0 = {r['z0']:+.4f}  slope {slope}  modulus deviation {mod}")
    print("all checks pass" if s["all_pass"] else "some checks FAILED")
    return EXIT_OK if s["all_pass"] else EXIT_CHECK


def _cmd_selftest(args) -> int:
    rep = selftest(seed=args.seed if args.seed is not None else 0, fault=args.fault)
    out = Path(args.output_dir or "out")
    write_json(out / "selftest.json", rep)
    for c in rep["checks"]:
        print(f"{'PASS' if c['pass'] else 'FAIL'}  {c['name']:<32} {c['value']:.3e} (tol {c['tolerance']:.1e})")
    return EXIT_OK if rep["all_pass"] else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mnls-asym", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("scatter", help="compute scattering data and write scattering.csv")
    _add_config_flags(sp)
    sp.set_defaults(func=_cmd_scatter)

    sp = sub.add_parser("asymptotic", help="evaluate the leading-order asymptotics along each ray")
    _add_config_flags(sp)
    sp.add_argument("--times", type=float, nargs="+", default=[20.0, 50.0, 100.0, 200.0])
    sp.set_defaults(func=_cmd_asymptotic)

    sp = sub.add_parser("evolve", help="run the reference PDE solver to a given time")
    _add_config_flags(sp)
    sp.add_argument("--time", type=float, required=True)
    sp.set_defaults(func=_cmd_evolve)

    sp = sub.add_parser("compare", help="full scattering -> asymptotics -> PDE comparison")
    _add_config_flags(sp)
    sp.set_defaults(func=_cmd_compare)

    sp = sub.add_parser("selftest", help="run the invariant suite and write selftest.json")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--fault", choices=list(FAULTS))
    sp.add_argument("--output-dir")
    sp.set_defaults(func=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MNLSError as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
