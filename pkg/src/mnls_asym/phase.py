"""Scalar phase data: nu, delta, beta and the integrals entering alpha(z0).

Two variants of the amplitude formula are carried through:

``"literal"``
    the closed form taken at face value, with ``|alpha|^2 = nu/2``, the factor
    ``(a lambda0 - 2b)`` in the angle and weight ``(a lambda - b)`` in the tail.
``"gauge"``
    the same structure after removing the ``diag(1, a lambda - b)`` gauge
    between the lambda- and z-problems: ``|alpha|^2 = nu / (2 (b^2 + a z0))``,
    factor ``(a lambda0 - b)`` in the angle and weight ``1/(a lambda - b)`` in
    the tail. This is the one that matches direct simulation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, NearPole, OnCut, OutOfRange, ReflectionAtUnit, TailNotNegligible
from .params import ModelParams, lambda_of_z
from .pcf import complex_gamma
from .scattering import ScatteringData

VARIANTS = ("gauge", "literal")

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
#: base panel width for composite Gauss-Legendre in z
PANEL = 0.05
#: geometric grading levels toward singular points
LEVELS = 40


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ConfigError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _panels(lo, hi, singular=(), breaks=()):
    """Panel edges on [lo, hi]: uniform pieces of width <= PANEL, graded toward ``singular``."""
    pts = {lo, hi}
    for s in list(singular) + list(breaks):
        if lo < s < hi:
            pts.add(float(s))
    pts = sorted(pts)
    edges = [pts[0]]
    for u, v in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((v - u) / PANEL)))
        edges.extend(np.linspace(u, v, n + 1)[1:])
    edges = np.array(edges)
    extra = []
    for s in singular:
        if not (lo <= s <= hi):
            continue
        i = int(np.argmin(np.abs(edges - s)))
        for j in (i - 1, i + 1):
            if 0 <= j < edges.size:
                d = edges[j] - s
                extra.extend(s + d * 0.5 ** np.arange(1, LEVELS + 1))
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    return edges


def _gl_nodes(edges):
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    x = (a + b) / 2 + half * _GL_X[None, :]
    w = half * _GL_W[None, :]
    return x.ravel(), w.ravel()


def _cauchy(f, lo, hi, z, breaks=()):
    """``int_lo^hi f(xi)/(xi - z) dxi`` for complex ``z`` off ``(lo, hi)``.

    The value ``f(x_ref)`` at the nearest point of the segment is subtracted so
    the remaining integrand stays bounded; its contribution is added back in
    closed form through principal logarithms.
    """
    z = complex(z)
    xr = min(max(z.real, lo), hi)
    edges = _panels(lo, hi, singular=(xr, hi), breaks=breaks)
    xi, w = _gl_nodes(edges)
    c = complex(f(np.array(xr)))
    val = np.sum(w * (f(xi) - c) / (xi - z))
    if c != 0:
        val += c * (np.log(hi - z) - np.log(lo - z))
    return complex(val)


class _NuTable:
    """nu on the full contour (both branches) as a function of z."""

    def __init__(self, sd: ScatteringData):
        self.sd = sd
        self.lo, self.hi = sd.z_range
        self.spline = sd.log1mR

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        out = -self.spline(np.clip(z, self.lo, self.hi)) / (2 * math.pi)
        return np.where(z < self.lo, 0.0, out)


def _nu_tab(sd):
    cache = sd.__dict__.get("_nu_cache")
    if cache is None:
        cache = _NuTable(sd)
        object.__setattr__(sd, "_nu_cache", cache)
    return cache


def nu(z, sd: ScatteringData, p: ModelParams):
    """``-(1/2 pi) ln(1 - |r(lambda(z))|^2)`` on the real-lambda branch."""
    lam = lambda_of_z(z, p)
    r2 = np.abs(sd.r_at(lam)) ** 2
    if np.any(1 - r2 <= 1e-14):
        raise ReflectionAtUnit("1 - |r|^2 <= 1e-14")
    out = -np.log1p(-r2) / (2 * math.pi)
    return float(out) if np.ndim(out) == 0 else out


def nu_contour(z, sd: ScatteringData):
    """``-(1/2 pi) ln(1 - z rho1 rho2)`` for any real ``z`` in or below the table.

    Below ``-b^2/a`` (for ``a > 0``) this is the vertical-line branch, where
    ``z rho1 rho2 = -|r|^2`` and nu is negative. Zero below the table.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z > sd.z_range[1] + 1e-12):
        raise OutOfRange("z above tabulated range")
    out = _nu_tab(sd)(z)
    return float(out) if out.ndim == 0 else out


def _check_table_tail(sd):
    R0 = abs(sd.R_nodes[0])
    if R0 > 1e-8:
        raise TailNotNegligible(f"|z rho1 rho2| = {R0:.3g} at the low end of the z table")


def _check_off_cut(z, z0):
    z = complex(z)
    d = abs(z.imag) if z.real <= z0 else abs(z - z0)
    if d < 1e-10:
        raise OnCut(f"z = {z} is on the cut (-inf, {z0}]")


def _log_delta(z, z0, sd):
    f = _nu_tab(sd)
    lo = sd.z_range[0]
    if z0 > sd.z_range[1]:
        raise OutOfRange("z0 above tabulated range")
    return _cauchy(f, lo, z0, z)


def delta(z, z0: float, sd: ScatteringData):
    """``exp(i int_{-inf}^{z0} nu(xi)/(xi - z) dxi)`` for ``z`` off the cut."""
    _check_table_tail(sd)
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(zs.shape, complex)
    for k, zk in enumerate(zs):
        _check_off_cut(zk, z0)
        out[k] = np.exp(1j * _log_delta(zk, z0, sd))
    return complex(out[0]) if np.ndim(z) == 0 else out


def delta_boundary(s: float, z0: float, sd: ScatteringData, side: int, eps: float = 1e-9):
    """``delta`` at ``s + i side eps``; a boundary value proxy for jump checks."""
    return delta(complex(s, side * eps), z0, sd)


def beta_phase(z, z0: float, sd: ScatteringData):
    """``-nu(z0) log(z - z0 + 1) + int (nu - chi nu(z0)) / (xi - z)``, chi the indicator of (z0-1, z0)."""
    _check_table_tail(sd)
    f = _nu_tab(sd)
    nu0 = float(f(np.array(z0)))
    lo = sd.z_range[0]
    zc = complex(z)
    if zc != complex(z0):
        _check_off_cut(zc, z0)
    def near(xi):
        return f(xi) - nu0

    if lo < z0 - 1:
        val = _cauchy(f, lo, z0 - 1, zc) + _cauchy(near, z0 - 1, z0, zc)
    else:
        # nu vanishes on (z0 - 1, lo): only -nu0 / (xi - z) survives there
        val = _cauchy(near, lo, z0, zc) - nu0 * (np.log(lo - zc) - np.log(z0 - 1 - zc))
    return complex(-nu0 * np.log(zc - z0 + 1) + val)


def nu_integral(z0: float, sd: ScatteringData) -> float:
    """``int_{-inf}^{z0} nu``."""
    lo = sd.z_range[0]
    x, w = _gl_nodes(_panels(lo, z0))
    return float(np.sum(w * _nu_tab(sd)(x)))


def delta_bounds(sd: ScatteringData):
    """``(lower, upper)`` bound on ``|delta|`` off the cut.

    ``|log|delta|| <= pi max|nu|`` by the Poisson kernel; when the real branch
    dominates this is ``(1 - max|r|^2)^{+-1/2}``.
    """
    m = float(np.max(np.abs(np.log1p(-sd.R_nodes)))) / 2
    return math.exp(-m), math.exp(m)


def stieltjes_log_integral(z0: float, sd: ScatteringData) -> float:
    """``(1/pi) int_{-inf}^{z0} log|z0 - s| d log(1 - R(s))`` with the spline derivative."""
    lo = sd.z_range[0]
    if z0 > sd.z_range[1]:
        raise OutOfRange("z0 above tabulated range")
    d = sd.log1mR.derivative()
    x, w = _gl_nodes(_panels(lo, z0, singular=(z0,)))
    return float(np.sum(w * np.log(np.abs(z0 - x)) * d(x)) / math.pi)


def _log1mr2_lambda(sd):
    cache = sd.__dict__.get("_l1m_cache")
    if cache is None:
        cache = CubicSpline(sd.lambda_grid, np.log1p(-np.abs(sd.r) ** 2))
        object.__setattr__(sd, "_l1m_cache", cache)
    return cache


def tail_phase_integral(sd: ScatteringData, lambda0: float, p: ModelParams, variant: str = "gauge") -> float:
    """``int_{lambda0}^{inf} log(1 - |r|^2) g(lambda) dlambda``.

    ``g = a lambda - b`` for ``"literal"`` and ``1/(a lambda - b)`` for ``"gauge"``.
    """
    _check_variant(variant)
    lo, hi = sd.lambda_range()
    if lambda0 < lo - 1e-12 or lambda0 > hi:
        raise OutOfRange("lambda0 outside the tabulated range")
    if abs(sd.r[-1]) ** 2 > 1e-8:
        raise TailNotNegligible(f"|r(lambda_max)|^2 = {abs(sd.r[-1])**2:.3g} > 1e-8")
    spl = _log1mr2_lambda(sd)
    x, w = _gl_nodes(_panels(max(lambda0, lo), hi, breaks=sd.lambda_grid[::8]))
    wl = p.a * x - p.b
    g = wl if variant == "literal" else 1.0 / wl
    return float(np.sum(w * spl(x) * g))


def _lambda0_and_r(z0, sd, p):
    lam0 = lambda_of_z(z0, p)
    r0 = sd.r_at(lam0)
    return lam0, r0


def arg_alpha(z0: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> float:
    """Angle of the leading amplitude (not reduced mod 2 pi)."""
    _check_variant(variant)
    lam0, r0 = _lambda0_and_r(z0, sd, p)
    nu0 = nu(z0, sd, p)
    c = p.a * lam0 - (2 * p.b if variant == "literal" else p.b)
    integral = stieltjes_log_integral(z0, sd)
    gam = np.angle(complex_gamma(1j * nu0)) if nu0 > 0 else -math.pi / 2
    return float(integral + math.pi / 4 - np.angle(c * r0) + gam) if r0 != 0 and c != 0 else float(
        integral + math.pi / 4 + gam
    )


def abs_alpha(z0: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> float:
    """Modulus of the leading amplitude."""
    _check_variant(variant)
    nu0 = nu(z0, sd, p)
    if variant == "literal":
        return math.sqrt(nu0 / 2)
    w2 = p.b**2 + p.a * z0
    if nu0 == 0:
        return 0.0
    if w2 < 1e-12:
        raise NearPole("b^2 + a z0 vanishes")
    return math.sqrt(nu0 / (2 * w2))


@dataclass(frozen=True)
class PhaseBundle:
    z0: float
    lambda0: float
    nu0: float
    tail_integral: float
    arg_integral: float
    variant: str = "gauge"


def phase_bundle(z0: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> PhaseBundle:
    _check_variant(variant)
    lam0 = lambda_of_z(z0, p)
    return PhaseBundle(
        float(z0),
        float(lam0),
        nu(z0, sd, p),
        tail_phase_integral(sd, lam0, p, variant),
        stieltjes_log_integral(z0, sd),
        variant,
    )
