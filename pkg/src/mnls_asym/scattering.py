"""Direct scattering for the x-part of the Lax pair at t = 0.

The Jost equation is integrated in the rotating frame
``nu = exp(i z x sigma3) mu exp(-i z x sigma3)`` where ``z = lambda (a lambda - 2b)``.
In that frame the equation reads ``nu_x = K(x) nu`` with

    K11 = -(i a / 2) |q|^2,           K22 = +(i a / 2) |q|^2,
    K12 = w q e^{-2i phi} e^{2izx},   K21 = w conj(q) e^{2i phi} e^{-2izx},

``w = a lambda - b`` and ``phi(x) = (a/2) int_{-L}^x |q|^2``. Starting from the
identity at the left end, the value at the right end is the scattering
matrix ``S`` itself, so ``s11 = nu11`` and ``s21 = nu21``.

Classical RK4 with step ``h = 2 dx`` is used so every stage lands on a grid
node and no interpolation of the samples is needed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicSpline

from .errors import ConfigError, NearPole, NonFinite, OutOfRange, ReflectionAtUnit, UnresolvedOscillation
from .params import ModelParams, lambda_of_z, z_of_lambda

#: largest admissible ``h * (1 + |z|)`` for the RK4 step ``h``
RESOLUTION = 0.2


@dataclass(frozen=True)
class SampledPotential:
    """Initial datum ``q0`` on a uniform grid, with an estimate of what the grid misses."""

    x: np.ndarray
    values: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.size < 3 or v.shape != x.shape:
            raise ConfigError("x and values must be 1-D arrays of equal length >= 3")
        d = np.diff(x)
        if np.any(d <= 0):
            raise ConfigError("grid must be strictly increasing")
        if np.max(np.abs(d - d[0])) > 1e-12 * max(abs(d[0]), np.max(np.abs(x))):
            raise ConfigError("grid must be uniform")
        if not np.all(np.isfinite(v)):
            raise ConfigError("potential samples must be finite")
        if not (self.tail_bound >= 0):
            raise ConfigError("tail_bound must be nonnegative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    @property
    def dx(self) -> float:
        return float((self.x[-1] - self.x[0]) / (self.x.size - 1))

    @classmethod
    def from_function(cls, f, L: float, dx: float) -> "SampledPotential":
        """Sample ``f`` on ``[-L, L]``; the tail bound is computed by quadrature of ``(1+x^2)|f|``."""
        n = int(round(L / dx))
        x = np.linspace(-n * dx, n * dx, 2 * n + 1)
        with np.errstate(over="ignore"):
            tail = 0.0
            for lo, hi in ((-np.inf, x[0]), (x[-1], np.inf)):
                val, _ = quad(lambda s: (1 + s * s) * abs(complex(f(np.array(s)))), lo, hi, limit=200)
                tail += val
        return cls(x, np.asarray(f(x), dtype=complex), float(tail))

    @classmethod
    def zero(cls, L: float = 10.0, dx: float = 0.01) -> "SampledPotential":
        n = int(round(L / dx))
        x = np.linspace(-n * dx, n * dx, 2 * n + 1)
        return cls(x, np.zeros_like(x, dtype=complex), 0.0)


def sech_potential(amplitude: float, chirp: float = 0.0):
    """``A sech(x) e^{i c x}`` as a callable."""

    def f(x):
        x = np.clip(np.asarray(x, dtype=float), -700, 700)
        return amplitude / np.cosh(x) * np.exp(1j * chirp * x)

    return f


def gaussian_potential(amplitude: float, chirp: float = 0.0):
    """``A exp(-x^2 + i c x)`` as a callable."""

    def f(x):
        x = np.asarray(x, dtype=float)
        return amplitude * np.exp(-x * x + 1j * chirp * x)

    return f


def cumulative_phase(q0: SampledPotential, p: ModelParams) -> np.ndarray:
    """``(a/2) int_{x_0}^{x} |q0|^2`` at every node (zero at the left end), by cumulative Simpson.

    Fourth-order accuracy here keeps the Jost integration fourth order overall.
    """
    m = np.abs(q0.values) ** 2
    return 0.5 * p.a * cumulative_simpson(m, dx=q0.dx, initial=0.0)


def _rotating_frame_solve(q0: SampledPotential, lam, p: ModelParams):
    """Integrate ``nu_x = K nu`` across the grid for each lambda in ``lam``.

    Returns the four entries of ``nu`` at the right end as arrays shaped like ``lam``.
    """
    lam = np.asarray(lam, dtype=complex)
    z = z_of_lambda(lam, p)
    w = p.a * lam - p.b
    x, q = q0.x, q0.values
    dx = q0.dx
    nint = x.size - 1
    h = 2 * dx if nint >= 2 else dx
    worst = h * (1 + np.max(np.abs(z))) if z.size else 0.0
    if worst > RESOLUTION:
        raise UnresolvedOscillation(
            f"step {h:g} too coarse for |z| = {np.max(np.abs(z)):g}; need h (1+|z|) <= {RESOLUTION}"
        )
    phi = cumulative_phase(q0, p)
    dens = np.abs(q) ** 2
    # per-node scalars, x-dependent only
    c12 = q * np.exp(-2j * phi)
    c21 = np.conj(q) * np.exp(2j * phi)
    diag = 0.5j * p.a * dens

    def kmat(i):
        e = np.exp(2j * z * x[i])
        return -diag[i], w * c12[i] * e, w * c21[i] / e

    def kmat_interp(xm, qm, phm):
        e = np.exp(2j * z * xm)
        d = 0.5j * p.a * abs(qm) ** 2
        return -d, w * qm * np.exp(-2j * phm) * e, w * np.conj(qm) * np.exp(2j * phm) / e

    one = np.ones_like(z)
    n11, n12, n21, n22 = one.copy(), 0 * one, 0 * one, one.copy()

    def apply(k, m11, m12, m21, m22):
        kd, k12, k21 = k
        return (kd * m11 + k12 * m21, kd * m12 + k12 * m22, k21 * m11 - kd * m21, k21 * m12 - kd * m22)

    def step(k0, km, k1, hh, s):
        a1 = apply(k0, *s)
        a2 = apply(km, *(si + 0.5 * hh * ai for si, ai in zip(s, a1)))
        a3 = apply(km, *(si + 0.5 * hh * ai for si, ai in zip(s, a2)))
        a4 = apply(k1, *(si + hh * ai for si, ai in zip(s, a3)))
        return tuple(si + hh / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for si, b1, b2, b3, b4 in zip(s, a1, a2, a3, a4))

    s = (n11, n12, n21, n22)
    with np.errstate(over="raise", invalid="raise"):
        try:
            kp = kmat(0)
            i = 0
            while i + 2 <= nint:
                km, kn = kmat(i + 1), kmat(i + 2)
                s = step(kp, km, kn, 2 * dx, s)
                kp = kn
                i += 2
            if i < nint:
                # odd interval count: last cell uses linear midpoint data
                xm = 0.5 * (x[i] + x[i + 1])
                km = kmat_interp(xm, 0.5 * (q[i] + q[i + 1]), 0.5 * (phi[i] + phi[i + 1]))
                s = step(kp, km, kmat(i + 1), dx, s)
        except FloatingPointError as exc:
            raise NonFinite(str(exc)) from exc
    if not all(np.all(np.isfinite(si)) for si in s):
        raise NonFinite("non-finite Jost solution")
    return s


def _right_end_frame(q0, lam, p):
    lam = np.asarray(lam, dtype=complex)
    return np.exp(1j * z_of_lambda(lam, p) * q0.x[-1])


def scattering_entries(q0: SampledPotential, lam, p: ModelParams):
    """Full scattering matrix ``S(lambda)`` for an array of (possibly complex) lambdas.

    Returns an array of shape ``lam.shape + (2, 2)``.
    """
    n11, n12, n21, n22 = _rotating_frame_solve(q0, lam, p)
    out = np.empty(np.shape(n11) + (2, 2), dtype=complex)
    out[..., 0, 0], out[..., 0, 1], out[..., 1, 0], out[..., 1, 1] = n11, n12, n21, n22
    return out


def jost_transfer(q0: SampledPotential, lam, p: ModelParams) -> np.ndarray:
    """``mu_-`` at the right truncation point, normalized to the identity at the left one.

    ``mu_-(x_R) = exp(-i z x_R sigma3) S exp(i z x_R sigma3)``.
    """
    S = scattering_entries(q0, lam, p)
    e = _right_end_frame(q0, lam, p)
    mu = S.copy()
    mu[..., 0, 1] = S[..., 0, 1] / e**2
    mu[..., 1, 0] = S[..., 1, 0] * e**2
    return mu


def scattering_matrix(q0: SampledPotential, lam, p: ModelParams):
    """``(s11, s21)`` at ``lam``.

    With ``mu_+ = I`` at the right end, ``mu_-(x_R) = e^{-i z x_R sigma3-hat} S``, so
    ``s11 = (mu_-)_11`` and ``s21 = (mu_-)_21 e^{-2 i z x_R}``.
    """
    mu = jost_transfer(q0, lam, p)
    e = _right_end_frame(q0, lam, p)
    return mu[..., 0, 0], mu[..., 1, 0] / e**2


def default_lambda_grid(p: ModelParams, half_width: float = 3.0, spacing: float = 0.02) -> np.ndarray:
    """Uniform grid symmetric about the vertex ``b/a``."""
    n = int(round(half_width / spacing))
    return p.vertex + spacing * np.arange(-n, n + 1)


def refine_grid(grid: np.ndarray, centers, levels: int = 2, radius: float | None = None) -> np.ndarray:
    """Insert dyadic midpoints near each center, ``levels`` times."""
    g = np.unique(np.asarray(grid, dtype=float))
    for _ in range(levels):
        h = np.min(np.diff(g)) if radius is None else None
        rad = radius if radius is not None else 4 * h
        mids = 0.5 * (g[1:] + g[:-1])
        keep = np.zeros(mids.shape, bool)
        for c in centers:
            keep |= np.abs(mids - c) <= rad
        g = np.unique(np.concatenate([g, mids[keep]]))
    return g


@dataclass(frozen=True)
class RhoPair:
    z: float
    rho1: complex
    rho2: complex


@dataclass(frozen=True, eq=False)
class ScatteringData:
    """Tabulated scattering data.

    ``lambda_grid``/``s11``/``s21``/``r`` hold the real axis. ``eta_grid`` and the
    ``*_vertical`` arrays hold the line ``lambda = b/a + i eta``, which the spectral
    map sends to ``z < -b^2/a``; it is needed because the scalar phase problem
    integrates over the whole half line ``(-inf, z0]``.
    """

    params: ModelParams
    lambda_grid: np.ndarray
    s11: np.ndarray
    s21: np.ndarray
    eta_grid: np.ndarray = field(default_factory=lambda: np.zeros(0))
    s11_vertical: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    s21_vertical: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    interp_order: int = 3
    interp_error: float = 0.0

    def __post_init__(self):
        lg = np.asarray(self.lambda_grid, dtype=float)
        if lg.ndim != 1 or lg.size < 4 or np.any(np.diff(lg) <= 0):
            raise ConfigError("lambda_grid must be strictly increasing with at least 4 nodes")
        for name in ("s11", "s21", "s11_vertical", "s21_vertical"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex))
        object.__setattr__(self, "lambda_grid", lg)
        object.__setattr__(self, "eta_grid", np.asarray(self.eta_grid, dtype=float))
        r = self.s21 / self.s11
        if np.any(np.abs(r) >= 1 - 1e-10):
            raise ReflectionAtUnit(f"|r| = {np.max(np.abs(r)):.12g} >= 1 on the real axis")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "r_vertical", self.s21_vertical / self.s11_vertical if self.eta_grid.size else np.zeros(0, complex))
        object.__setattr__(self, "_r_spline", CubicSpline(lg, r))
        object.__setattr__(self, "_z_table", self._build_z_table())

    # real-axis interpolation

    def r_at(self, lam):
        lam = np.asarray(lam, dtype=float)
        lo, hi = self.lambda_grid[0], self.lambda_grid[-1]
        if np.any(lam < lo - 1e-12) or np.any(lam > hi + 1e-12):
            raise OutOfRange(f"lambda outside tabulated range [{lo}, {hi}]")
        out = self._r_spline(np.clip(lam, lo, hi))
        return complex(out) if out.ndim == 0 else out

    def unitarity_defect(self) -> np.ndarray:
        return np.abs(np.abs(self.r) ** 2 + 1 / np.abs(self.s11) ** 2 - 1)

    # z-space table of R(z) = z rho1 rho2 along the contour preimage

    def _build_z_table(self):
        p = self.params
        lg = self.lambda_grid
        if p.a > 0:
            branch = lg >= p.vertex - 1e-14
        else:
            branch = lg <= p.vertex + 1e-14
        z_real = z_of_lambda(lg[branch], p)
        R_real = np.abs(self.r[branch]) ** 2
        if self.eta_grid.size:
            eta = self.eta_grid
            z_vert = p.z_min - p.a * eta**2
            # unitary evolution on the vertical line: z rho1 rho2 = -|r|^2
            R_vert = -np.abs(self.r_vertical) ** 2
        else:
            z_vert = np.zeros(0)
            R_vert = np.zeros(0)
        z = np.concatenate([z_real, z_vert])
        R = np.concatenate([R_real, R_vert])
        order = np.argsort(z)
        z, R = z[order], R[order]
        keep = np.concatenate(([True], np.diff(z) > 1e-13))
        z, R = z[keep], R[keep]
        if np.any(R >= 1 - 1e-14):
            raise ReflectionAtUnit("1 - |r|^2 underflow")
        return z, R, CubicSpline(z, np.log1p(-R))

    @property
    def z_nodes(self) -> np.ndarray:
        return self._z_table[0]

    @property
    def R_nodes(self) -> np.ndarray:
        """``z rho1 rho2`` at ``z_nodes``; equals ``|r|^2`` on the real branch."""
        return self._z_table[1]

    @property
    def log1mR(self) -> CubicSpline:
        """Cubic spline of ``log(1 - z rho1 rho2)`` in ``z``."""
        return self._z_table[2]

    @property
    def z_range(self):
        return float(self.z_nodes[0]), float(self.z_nodes[-1])

    def lambda_range(self):
        return float(self.lambda_grid[0]), float(self.lambda_grid[-1])


def reflection_table(
    q0: SampledPotential,
    lambda_grid,
    p: ModelParams,
    eta_grid=None,
    refine_at=(),
    refine_levels: int = 2,
) -> ScatteringData:
    """Tabulate ``S`` on ``lambda_grid`` (refined near ``refine_at``) and on the vertical line.

    ``eta_grid=None`` picks ``eta`` so the vertical branch covers as much of
    ``z`` as the real grid does.
    """
    lg = np.asarray(lambda_grid, dtype=float)
    if len(refine_at):
        lg = refine_grid(lg, list(refine_at), levels=refine_levels)
    if eta_grid is None:
        span = max(np.max(np.abs(lg - p.vertex)), 1.0)
        step = np.min(np.diff(lg)) if lg.size > 1 else 0.02
        eta_grid = np.arange(1, int(round(span / max(step, 0.01))) + 1) * max(step, 0.01)
    eta_grid = np.asarray(eta_grid, dtype=float)
    S = scattering_entries(q0, lg, p)
    if eta_grid.size:
        Sv = scattering_entries(q0, p.vertex + 1j * eta_grid, p)
        s11v, s21v = Sv[:, 0, 0], Sv[:, 1, 0]
    else:
        s11v = s21v = np.zeros(0, complex)
    sd = ScatteringData(p, lg, S[:, 0, 0], S[:, 1, 0], eta_grid, s11v, s21v)
    # leave-one-out interpolation estimate on the real branch
    if lg.size >= 8:
        sub = CubicSpline(lg[::2], sd.r[::2])
        est = float(np.max(np.abs(sub(lg[1::2]) - sd.r[1::2]))) / 16.0
    else:
        est = math.inf
    object.__setattr__(sd, "interp_error", est)
    return sd


def rho_pair(sd: ScatteringData, z: float, p: ModelParams, variant: str = "literal") -> RhoPair:
    """Transformed reflection coefficients at real ``z``.

    ``variant="literal"``: ``rho1 = conj(r)/(a lam - 2b)``, ``rho2 = r/lam``.
    ``variant="gauge"``: ``rho1 = conj(r)/(a lam - b)``, ``rho2 = (a lam - b) r / z``.
    Both satisfy ``z rho1 rho2 = |r(lam(z))|^2``.
    """
    lam = lambda_of_z(z, p)
    r = sd.r_at(lam)
    if variant == "literal":
        d1 = p.a * lam - 2 * p.b
        if abs(d1) < 1e-12:
            raise NearPole("a lambda - 2b vanishes")
        if abs(lam) < 1e-12:
            # limit r(lam)/lam by quadratic interpolation around lam = 0
            h = max(1e-3, 2 * float(np.min(np.diff(sd.lambda_grid))))
            rp, rm, r0 = sd.r_at(h), sd.r_at(-h), r
            if abs(r0) > 1e-10:
                raise NearPole("lambda(z) = 0 with r(0) != 0")
            return RhoPair(float(z), complex(np.conj(r) / d1), complex((rp - rm) / (2 * h)))
        return RhoPair(float(z), complex(np.conj(r) / d1), complex(r / lam))
    if variant == "gauge":
        w = p.a * lam - p.b
        if abs(w) < 1e-12 or abs(z) < 1e-12:
            raise NearPole("gauge factor or z vanishes")
        return RhoPair(float(z), complex(np.conj(r) / w), complex(w * r / z))
    raise ConfigError(f"unknown variant {variant!r}")
