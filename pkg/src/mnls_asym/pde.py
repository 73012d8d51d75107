"""Pseudo-spectral reference solver on a periodic box.

Solves ``i q_t + q_xx - i a (|q|^2 q)_x - 2 b^2 |q|^2 q = 0``, i.e.

    q_t = i q_xx + a (|q|^2 q)_x - 2 i b^2 |q|^2 q,

with an integrating factor for the linear part and classical RK4 on the
transformed variable. Cubic terms are dealiased with the 2/3 rule.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

from .errors import BadStep, ConfigError, Unstable
from .params import ModelParams

#: dt * |a| * max|q0|^2 * k_max must stay below this
C_STAB = 1.0
GROWTH_LIMIT = 10.0


def default_workers() -> int:
    env = os.environ.get("NLS_ASYM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"NLS_ASYM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


@dataclass(frozen=True, eq=False)
class Field:
    """Snapshot of q on the periodic grid ``x_j = -L + 2L j / N``."""

    x: np.ndarray
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        n = x.size
        if n < 2 or n & (n - 1):
            raise ConfigError("grid size must be a power of two")
        if v.shape != x.shape or not np.all(np.isfinite(v)):
            raise ConfigError("values must be finite and match the grid")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", v)

    @classmethod
    def on_grid(cls, f, half_length: float, n: int, time: float = 0.0) -> "Field":
        x = -half_length + 2 * half_length * np.arange(n) / n
        return cls(x, np.asarray(f(x), dtype=complex), time)

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def half_length(self) -> float:
        return 0.5 * self.dx * self.x.size

    def wavenumbers(self) -> np.ndarray:
        return 2 * math.pi * sfft.fftfreq(self.x.size, d=self.dx)

    def at(self, xq) -> complex | np.ndarray:
        """Trigonometric interpolant of the samples at arbitrary points."""
        c = sfft.fft(self.values) / self.x.size
        k = self.wavenumbers()
        xs = np.atleast_1d(np.asarray(xq, dtype=float))
        out = np.array([np.sum(c * np.exp(1j * k * (xv - self.x[0]))) for xv in xs])
        return complex(out[0]) if np.ndim(xq) == 0 else out


def mass(f: Field) -> float:
    """Periodic trapezoid ``int |q|^2``."""
    return float(np.sum(np.abs(f.values) ** 2) * f.dx)


def dealias_mask(k: np.ndarray) -> np.ndarray:
    return np.abs(k) < (2.0 / 3.0) * np.max(np.abs(k))


def dealias(f: Field) -> Field:
    """Project onto the retained modes (what the solver actually evolves)."""
    k = f.wavenumbers()
    return Field(f.x, sfft.ifft(sfft.fft(f.values) * dealias_mask(k)), f.time)


def guard_ratio(f: Field, fraction: float = 0.1) -> float:
    """``max|q|`` over the outer ``fraction`` of the box divided by ``max|q|``."""
    L = f.half_length
    outer = np.abs(f.x) >= (1 - fraction) * L
    peak = np.max(np.abs(f.values))
    return float(np.max(np.abs(f.values[outer])) / peak) if peak > 0 else 0.0


def _steps(T: float, dt: float) -> int:
    if dt <= 0 or T < 0:
        raise BadStep("need dt > 0 and T >= 0")
    n = round(T / dt)
    if abs(n * dt - T) > 1e-12 * max(1.0, abs(T)):
        raise BadStep(f"T = {T} is not an integer multiple of dt = {dt}")
    return int(n)


def evolve_snapshots(q0: Field, times, dt: float, p: ModelParams, workers: int | None = None) -> list[Field]:
    """Evolve ``q0`` and return a Field at each requested time (sorted ascending)."""
    times = sorted(float(t) for t in times)
    steps = [_steps(t - q0.time, dt) for t in times]
    if any(s < 0 for s in steps):
        raise BadStep("snapshot before the initial time")
    workers = workers or default_workers()
    k = q0.wavenumbers()
    mask = dealias_mask(k)
    amp0 = float(np.max(np.abs(q0.values)))
    kmax = float(np.max(np.abs(k[mask]))) if np.any(mask) else 0.0
    if dt * abs(p.a) * amp0**2 * kmax > C_STAB:
        raise BadStep(f"dt = {dt} violates dt |a| max|q|^2 k_max <= {C_STAB}")
    a, b2 = p.a, p.b**2
    ik = 1j * k

    def nonlinear(qh):
        q = sfft.ifft(qh, workers=workers)
        c = sfft.fft(np.abs(q) ** 2 * q, workers=workers) * mask
        return a * ik * c - 2j * b2 * c

    E = np.exp(-1j * k * k * dt / 2)
    E2 = E * E
    qh = sfft.fft(q0.values, workers=workers) * mask
    nmax = steps[-1] if steps else 0
    pending = list(zip(steps, times))
    limit = GROWTH_LIMIT * max(amp0, 1e-300)
    with np.errstate(over="ignore", invalid="ignore"):
        return _march(q0, qh, E, E2, dt, nonlinear, pending, nmax, amp0, limit, workers)


def _march(q0, qh, E, E2, dt, nonlinear, pending, nmax, amp0, limit, workers):
    # overflow is caught by the periodic growth check, not by numpy warnings
    out, j = [], 0
    for step in range(nmax + 1):
        while pending and pending[0][0] == step:
            out.append(Field(q0.x, sfft.ifft(qh, workers=workers), pending.pop(0)[1]))
        if step == nmax:
            break
        k1 = dt * nonlinear(qh)
        k2 = dt * nonlinear(E * (qh + k1 / 2))
        k3 = dt * nonlinear(E * qh + k2 / 2)
        k4 = dt * nonlinear(E2 * qh + E * k3)
        qh = E2 * qh + (E2 * k1 + 2 * E * (k2 + k3) + k4) / 6
        j += 1
        if j % 50 == 0 or step + 1 == nmax:
            peak = np.max(np.abs(sfft.ifft(qh, workers=workers)))
            if not np.isfinite(peak) or (amp0 > 0 and peak > limit):
                raise Unstable(f"solution grew beyond {GROWTH_LIMIT}x its initial maximum at step {step + 1}")
    return out


def evolve(q0: Field, T: float, dt: float, p: ModelParams, workers: int | None = None) -> Field:
    """Advance ``q0`` by time ``T`` with step ``dt``."""
    return evolve_snapshots(q0, [q0.time + T], dt, p, workers)[0]


def plane_wave(amplitude: float, p: ModelParams, half_length: float, n: int, t: float = 0.0) -> Field:
    """Exact solution ``A e^{i(kx - k^2 t)}`` with ``k = 2 b^2 / a`` (rounded to a box mode)."""
    k = 2 * p.b**2 / p.a
    k_box = math.pi / half_length
    k = round(k / k_box) * k_box
    omega = k * k - p.a * k * amplitude**2 + 2 * p.b**2 * amplitude**2
    return Field.on_grid(lambda x: amplitude * np.exp(1j * (k * x - omega * t)), half_length, n, t)
