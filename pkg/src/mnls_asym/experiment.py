"""Scattering -> asymptotics -> PDE comparison along rays."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from .asymptotics import AsymptoticInputs, prepare_ray, q_asym
from .config import ExperimentConfig
from .errors import NonMonotoneError
from .params import lambda_of_z
from .pde import Field, dealias, default_workers, evolve_snapshots, guard_ratio, mass
from .phase import delta, nu_contour
from .scattering import (
    SampledPotential,
    default_lambda_grid,
    gaussian_potential,
    reflection_table,
    sech_potential,
)
from .tables import read_potential_csv, write_csv, write_json, write_scattering, write_scattering_vertical

SLOPE_GATE = -0.60
SLOPE_BAND = (-0.90, -0.60)
MODULUS_TOL = 0.05
MASS_TOL = 1e-8
GUARD_TOL = 1e-6
UNITARITY_TOL = 1e-6


@dataclass(frozen=True)
class ComparisonRow:
    t: float
    x: float
    q_num: complex
    q_asym: complex
    abs_err: float
    scaled_err_half: float
    scaled_err_34: float

    @classmethod
    def make(cls, t, z0, q_num, q_as):
        e = abs(q_num - q_as)
        return cls(float(t), -4 * z0 * t, complex(q_num), complex(q_as), e, e * math.sqrt(t), e * t**0.75)


def initial_profile(cfg: ExperimentConfig):
    """Callable q0(x) for the configured family (zero outside file data)."""
    ini = cfg.initial
    if ini.family == "sech":
        return sech_potential(ini.amplitude, ini.chirp)
    if ini.family == "gaussian":
        return gaussian_potential(ini.amplitude, ini.chirp)
    if ini.family == "zero":
        return lambda x: np.zeros(np.shape(x), complex)
    xs, qs = read_potential_csv(ini.path)

    def f(x):
        x = np.asarray(x, dtype=float)
        re = np.interp(x, xs, qs.real, left=0.0, right=0.0)
        im = np.interp(x, xs, qs.imag, left=0.0, right=0.0)
        return re + 1j * im

    return f


def build_potential(cfg: ExperimentConfig) -> SampledPotential:
    f = initial_profile(cfg)
    kn = cfg.scattering
    if cfg.initial.family == "file":
        n = int(round(kn.L / kn.dx))
        x = np.linspace(-n * kn.dx, n * kn.dx, 2 * n + 1)
        xs, qs = read_potential_csv(cfg.initial.path)
        # crude tail estimate: mass of data outside the grid weighted by (1 + x^2)
        out = (xs < x[0]) | (xs > x[-1])
        tail = float(trapezoid((1 + xs**2) * np.abs(qs) * out, xs)) if xs.size > 1 else 0.0
        return SampledPotential(x, f(x), tail)
    return SampledPotential.from_function(f, kn.L, kn.dx)


def build_scattering(cfg: ExperimentConfig, q0: SampledPotential | None = None):
    p = cfg.params
    q0 = build_potential(cfg) if q0 is None else q0
    kn = cfg.scattering
    grid = default_lambda_grid(p, kn.lambda_half_width, kn.lambda_spacing)
    centers = [lambda_of_z(z, p) for z in cfg.rays]
    return reflection_table(q0, grid, p, refine_at=centers, refine_levels=kn.refine_levels)


def fit_decay(ts, errs, exclude_fraction: float = 0.2):
    """Least-squares slope of log(err) vs log(t), skipping the earliest ``exclude_fraction`` of times."""
    ts, errs = np.asarray(ts, float), np.asarray(errs, float)
    order = np.argsort(ts)
    ts, errs = ts[order], errs[order]
    k = int(math.floor(exclude_fraction * ts.size))
    ts, errs = ts[k:], errs[k:]
    if ts.size < 3 or np.any(errs <= 0):
        return None
    res = stats.linregress(np.log(ts), np.log(errs))
    half = float(stats.t.ppf(0.975, ts.size - 2) * res.stderr)
    return {"slope": float(res.slope), "intercept": float(res.intercept), "half_width": half,
            "n_points": int(ts.size), "t_first": float(ts[0]), "t_last": float(ts[-1])}


def _ray_rows(z0, snaps, ai: AsymptoticInputs, ai_lit: AsymptoticInputs):
    rows, lit = [], []
    for f in snaps:
        t = f.time
        x = -4 * z0 * t
        qn = f.at(x)
        rows.append(ComparisonRow.make(t, z0, qn, q_asym(x, t, ai)))
        lit.append(q_asym(x, t, ai_lit))
    return rows, lit


def run_compare(cfg: ExperimentConfig, workers: int | None = None, out_dir: str | Path | None = None,
                strict: bool = True) -> dict:
    """Run the full pipeline; returns the summary dict (also written when ``out_dir`` is set)."""
    workers = workers or default_workers()
    p = cfg.params
    q0 = build_potential(cfg)
    sd = build_scattering(cfg, q0)
    zero_data = bool(np.all(q0.values == 0))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        gauge = list(pool.map(lambda z: prepare_ray(z, sd, p, cfg.variant), cfg.rays))
        literal = list(pool.map(lambda z: prepare_ray(z, sd, p, "literal"), cfg.rays))

    kn = cfg.pde
    init = dealias(Field.on_grid(initial_profile(cfg), kn.half_length, kn.grid_size))
    times = cfg.schedule.times(kn.dt)
    snaps = evolve_snapshots(init, times, kn.dt, p, workers)
    m0 = mass(init)
    mass_drift = max((abs(mass(f) - m0) / m0 if m0 > 0 else mass(f)) for f in snaps)
    guard = max(guard_ratio(f) for f in snaps)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_ray = list(pool.map(lambda k: _ray_rows(cfg.rays[k], snaps, gauge[k], literal[k]), range(len(cfg.rays))))

    rays_out = []
    for z0, ai, al, (rows, lit) in zip(cfg.rays, gauge, literal, per_ray):
        ts = [r.t for r in rows]
        errs = [r.abs_err for r in rows]
        lit_errs = [abs(r.q_num - ql) for r, ql in zip(rows, lit)]
        fit = None if zero_data else fit_decay(ts, errs, cfg.fit_exclude_fraction)
        last = rows[-1]
        mod_dev = (abs(abs(last.q_num) * math.sqrt(last.t) - ai.absalpha) / ai.absalpha) if ai.absalpha > 0 else None
        lit_dev = (abs(abs(last.q_num) * math.sqrt(last.t) - al.absalpha) / al.absalpha) if al.absalpha > 0 else None
        entry = {
            "z0": z0,
            "lambda0": ai.lambda0,
            "abs_r_lambda0": abs(sd.r_at(ai.lambda0)),
            "nu0": ai.nu0,
            "variant": ai.variant,
            "absalpha": ai.absalpha,
            "argalpha": ai.argalpha,
            "tail_integral": ai.tail_integral,
            "fit": fit,
            "slope_gate": SLOPE_GATE,
            "slope_band": list(SLOPE_BAND),
            "slope_pass": None if fit is None else fit["slope"] <= SLOPE_GATE,
            "slope_in_band": None if fit is None else SLOPE_BAND[0] <= fit["slope"] <= SLOPE_BAND[1],
            "modulus_deviation": mod_dev,
            "modulus_pass": None if mod_dev is None else mod_dev <= MODULUS_TOL,
            "abs_err_last": last.abs_err,
            "literal": {
                "absalpha": al.absalpha,
                "argalpha": al.argalpha,
                "tail_integral": al.tail_integral,
                "modulus_deviation": lit_dev,
                "abs_err_last": lit_errs[-1],
                "fit": None if zero_data else fit_decay(ts, lit_errs, cfg.fit_exclude_fraction),
            },
        }
        rays_out.append((entry, rows, lit))

    summary = {
        "config": cfg.to_dict(),
        "times": times,
        "unitarity_max": float(np.max(sd.unitarity_defect())),
        "unitarity_pass": float(np.max(sd.unitarity_defect())) <= UNITARITY_TOL,
        "tail_bound": q0.tail_bound,
        "mass_drift_max": mass_drift,
        "mass_pass": mass_drift <= MASS_TOL,
        "guard_max": guard,
        "guard_pass": guard <= GUARD_TOL,
        "rays": [e for e, _, _ in rays_out],
    }
    checks = [summary["unitarity_pass"], summary["mass_pass"], summary["guard_pass"]]
    for e, _, _ in rays_out:
        checks += [c for c in (e["slope_pass"], e["modulus_pass"]) if c is not None]
    summary["all_pass"] = all(checks)

    if out_dir is not None:
        out = Path(out_dir)
        write_scattering(out / "scattering.csv", sd)
        write_scattering_vertical(out / "scattering_vertical.csv", sd)
        write_delta_diag(out / "delta_diag.csv", cfg.rays[0], sd)
        for (e, rows, lit) in rays_out:
            write_csv(
                out / f"compare_{e['z0']:+.4f}.csv",
                ["t", "x", "re_q_num", "im_q_num", "re_q_asym", "im_q_asym", "abs_err", "scaled_err_half",
                 "scaled_err_34", "re_q_literal", "im_q_literal", "abs_err_literal"],
                [(r.t, r.x, r.q_num.real, r.q_num.imag, r.q_asym.real, r.q_asym.imag, r.abs_err,
                  r.scaled_err_half, r.scaled_err_34, ql.real, ql.imag, abs(r.q_num - ql)) for r, ql in zip(rows, lit)],
            )
        write_json(out / "summary.json", summary)

    if strict:
        for e in summary["rays"]:
            if e["fit"] is not None and e["fit"]["slope"] >= 0:
                raise NonMonotoneError(f"error does not decrease along z0 = {e['z0']} (slope {e['fit']['slope']:.3f})")
    summary["_rows"] = {e["z0"]: rows for e, rows, _ in rays_out}
    return summary


def write_delta_diag(path, z0: float, sd, offset: float = 0.25, n: int = 121):
    lo, hi = sd.z_range
    s = np.linspace(max(lo, z0 - 4), min(hi, z0 + 4), n)
    z = s + 1j * offset
    d = delta(z, z0, sd)
    return write_csv(path, ["re_z", "im_z", "re_delta", "im_delta", "nu"],
                     zip(z.real, z.imag, d.real, d.imag, nu_contour(s, sd)))
