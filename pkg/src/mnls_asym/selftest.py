"""Invariant suite across all modules, reported as structured pass/fail entries."""
from __future__ import annotations

import math

import numpy as np

from .asymptotics import prepare_ray, q_asym, q_from_model
from .params import ModelParams
from .pcf import (
    ModelConstants,
    complex_gamma,
    connection_coefficients,
    contour_first_moment,
    jump_residuals,
    model_solution,
    nsol_first_moment,
    pcf_d,
    ray_jump,
    weber_residual,
)
from .pde import Field, dealias, evolve, mass, plane_wave
from .phase import beta_phase, delta, delta_bounds, nu_contour, nu_integral
from .scattering import SampledPotential, default_lambda_grid, reflection_table, scattering_entries, sech_potential

NU_VALUES = (0.01, 0.1, 0.5, 1.0, 2.0)
FAULTS = ("beta21",)


def _entry(name, value, tol, ok=None, note=""):
    value = float(value)
    ok = (value <= tol) if ok is None else bool(ok)
    e = {"name": name, "value": value, "tolerance": float(tol), "pass": bool(ok)}
    if note:
        e["note"] = note
    return e


def _scattering_checks(out, rng):
    p = ModelParams(1.0, 0.5)
    q0 = SampledPotential.from_function(sech_potential(0.8), 30.0, 0.005)
    sd = reflection_table(q0, default_lambda_grid(p), p)
    out.append(_entry("scattering_unitarity", np.max(sd.unitarity_defect()), 1e-6))
    lam = p.vertex + rng.uniform(-3, 3, 16)
    S = scattering_entries(q0, lam, p)
    S2 = scattering_entries(q0, 2 * p.vertex - lam, p)
    s1 = np.array([[0, 1], [1, 0]])
    s3 = np.diag([1.0, -1.0])
    out.append(_entry("symmetry_sigma1_conjugation", np.max(np.abs(S - s1 @ S.conj() @ s1)), 1e-6))
    out.append(_entry("symmetry_vertex_reflection", np.max(np.abs(S2 - s3 @ S @ s3)), 1e-6))
    out.append(_entry("jost_determinant", np.max(np.abs(np.linalg.det(S) - 1)), 1e-6))
    return p, sd


def _delta_checks(out, rng, sd):
    z0 = -0.1
    zs = rng.normal(0, 2, 24) + 1j * rng.choice([-1, 1], 24) * rng.uniform(0.01, 3, 24)
    d = delta(zs, z0, sd)
    out.append(_entry("delta_schwarz", np.max(np.abs(d * np.conj(delta(np.conj(zs), z0, sd)) - 1)), 1e-10))
    lo, hi = delta_bounds(sd)
    viol = max(0.0, float(np.max(np.abs(d))) - hi, lo - float(np.min(np.abs(d))))
    out.append(_entry("delta_bound", viol, 0.0))
    worst = 0.0
    for s in (-3.0, -1.0, -0.5, -0.2):
        ratio = delta(complex(s, 1e-9), z0, sd) / delta(complex(s, -1e-9), z0, sd)
        worst = max(worst, abs(ratio - math.exp(-2 * math.pi * nu_contour(s, sd))))
    out.append(_entry("delta_jump", worst, 1e-6))
    nu0 = nu_contour(z0, sd)
    worst = 0.0
    for z in zs[:6]:
        worst = max(worst, abs(delta(z, z0, sd) - (z - z0) ** (1j * nu0) * np.exp(1j * beta_phase(z, z0, sd))))
    out.append(_entry("beta_consistency", worst, 1e-8))
    big = np.array([100.0, 400.0]) * np.exp(1j * math.pi / 3)
    m1 = nu_integral(z0, sd)
    e = np.abs(delta(big, z0, sd) - 1 + 1j / big * m1)
    slope = math.log(e[1] / e[0]) / math.log(4.0)
    out.append(_entry("delta_expansion_exponent", slope, -1.9))


def _pcf_checks(out, rng, fault):
    worst = 0.0
    for w in (0.5j, 1.3 - 0.4j, -0.7 + 0.2j):
        # Gamma(w) Gamma(1-w) = pi / sin(pi w)
        worst = max(worst, abs(complex_gamma(w) * complex_gamma(1 - w) * np.sin(np.pi * w) / np.pi - 1))
    nu = 0.5
    worst = max(worst, abs(abs(complex_gamma(1j * nu)) ** 2 - np.pi / (nu * np.sinh(np.pi * nu))) / abs(complex_gamma(1j * nu)) ** 2)
    out.append(_entry("gamma_identities", worst, 1e-12))
    worst = 0.0
    for a in (0.3j, -1.1j, 0.5 + 0.5j):
        xi = rng.uniform(-5, 5, 8) + 1j * rng.uniform(-5, 5, 8)
        lhs = pcf_d(a + 1, xi) - xi * pcf_d(a, xi) + a * pcf_d(a - 1, xi)
        scale = np.abs(pcf_d(a + 1, xi)) + np.abs(xi * pcf_d(a, xi)) + np.abs(a * pcf_d(a - 1, xi))
        worst = max(worst, float(np.max(np.abs(lhs) / scale)))
    out.append(_entry("pcf_recurrence", worst, 1e-9))
    zeta = np.linspace(-5, 5, 41)
    worst = max(weber_residual(1j * n, np.exp(-0.75j * np.pi), zeta) for n in (0.1, 0.5, 1.0))
    out.append(_entry("pcf_weber_residual", worst, 1e-6))

    worst_beta = worst_jump = worst_moment = worst_ray = 0.0
    samples = np.linspace(-8, 8, 100)
    for n in NU_VALUES:
        mc = ModelConstants.from_nu(n, z0=0.7, phase=0.3)
        cc = connection_coefficients(mc)
        b21 = cc.beta21 * (1 + 1e-3) if fault == "beta21" else cc.beta21
        worst_beta = max(worst_beta, abs(cc.beta12 * b21 - n) / n)
        if n in (0.1, 0.5, 1.0):
            worst_jump = max(worst_jump, float(np.max(jump_residuals(mc, samples))))
        worst_moment = max(worst_moment, float(np.max(np.abs(contour_first_moment(mc) - nsol_first_moment(mc)))))
        for j, ang, (sa, sb) in ((1, 0.25, (1, 2)), (2, 0.75, (2, 3)), (3, -0.75, (4, 5)), (4, -0.25, (5, 6))):
            z = 2.0 * np.exp(1j * np.pi * ang)
            na, nb = model_solution(z, mc, sector_index=sa), model_solution(z, mc, sector_index=sb)
            V = ray_jump(z, j, mc)
            # outward rays (1, 4): N_+ = N_- V with + the counterclockwise side; inward rays the reverse
            res = np.abs(nb - na @ V) if j in (1, 4) else np.abs(na - nb @ V)
            worst_ray = max(worst_ray, float(np.max(res)))
    out.append(_entry("beta_identity", worst_beta, 1e-12))
    out.append(_entry("model_jump_residual", worst_jump, 1e-6))
    out.append(_entry("model_first_moment", worst_moment, 1e-4))
    out.append(_entry("model_sector_jumps", worst_ray, 1e-7))


def _asymptotic_checks(out, p, sd):
    z0, t = -0.1, 150.0
    x = -4 * z0 * t
    ai = prepare_ray(z0, sd, p)
    out.append(_entry("closed_form_vs_model_problem", abs(q_asym(x, t, ai) - q_from_model(x, t, sd, p)), 1e-7))


def _pde_checks(out):
    p = ModelParams(1.0, 0.5)
    L = 2 * math.pi * 8
    f0 = plane_wave(0.7, p, L, 256)
    f1 = evolve(f0, 1.0, 0.01, p)
    ex = plane_wave(0.7, p, L, 256, 1.0)
    out.append(_entry("plane_wave", np.max(np.abs(f1.values - ex.values)) / 0.7, 1e-8))
    g0 = dealias(Field.on_grid(sech_potential(0.8), 80.0, 2048))
    g1 = evolve(g0, 4.0, 0.01, p)
    out.append(_entry("mass_conservation", abs(mass(g1) - mass(g0)) / mass(g0), 1e-8))


def selftest(seed: int = 0, fault: str | None = None) -> dict:
    """Run every invariant check; ``fault`` injects a known defect for sensitivity testing."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    rng = np.random.default_rng(seed)
    checks: list[dict] = []
    p, sd = _scattering_checks(checks, rng)
    _delta_checks(checks, rng, sd)
    _pcf_checks(checks, rng, fault)
    _asymptotic_checks(checks, p, sd)
    _pde_checks(checks)
    return {"seed": seed, "fault": fault, "checks": checks, "all_pass": all(c["pass"] for c in checks)}
