"""Equation constants and the spectral map z = lambda (a lambda - 2b)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, OutOfRange


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the mixed NLS equation.

    ``a`` weights the derivative nonlinearity and ``b**2`` the cubic one.
    """

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ConfigError("a and b must be finite")
        if self.a == 0:
            raise ConfigError("a = 0 degenerates the spectral map; use a != 0")

    @property
    def vertex(self) -> float:
        """lambda at the vertex of the spectral map, b/a."""
        return self.b / self.a

    @property
    def z_min(self) -> float:
        """Value of the map at its vertex, -b^2/a."""
        return -self.b**2 / self.a


@dataclass(frozen=True)
class SpectralPoint:
    lam: complex
    z: complex

    @classmethod
    def from_lambda(cls, lam, p: ModelParams) -> "SpectralPoint":
        return cls(complex(lam), complex(z_of_lambda(lam, p)))


def z_of_lambda(lam, p: ModelParams):
    """z = lambda (a lambda - 2b). Accepts complex scalars or arrays."""
    return lam * (p.a * lam - 2 * p.b)


def lambda_of_z(z, p: ModelParams):
    """Real preimage of ``z`` on the far side of the vertex.

    Returns ``(b + sqrt(b^2 + a z)) / a``, which satisfies ``lambda >= b/a``
    for ``a > 0`` and ``lambda <= b/a`` for ``a < 0``.
    """
    z = np.asarray(z, dtype=float)
    disc = p.b**2 + p.a * z
    # tolerate rounding at the vertex
    tol = 1e-14 * (p.b**2 + abs(p.a) * np.abs(z) + 1e-300)
    if np.any(disc < -tol):
        raise OutOfRange(f"b^2 + a z < 0: no real preimage for z = {z}")
    lam = (p.b + np.sqrt(np.maximum(disc, 0.0))) / p.a
    return float(lam) if lam.ndim == 0 else lam


def sigma_preimage(z, p: ModelParams):
    """Preimage of real ``z`` on the contour where the map is real.

    That contour is the real lambda axis together with the vertical line
    Re lambda = b/a. Where ``b^2 + a z >= 0`` this is ``lambda_of_z``;
    otherwise the point ``b/a + i*eta`` with ``eta > 0`` on the vertical line.
    """
    z = np.asarray(z, dtype=float)
    disc = p.b**2 + p.a * z
    root = np.sqrt(np.abs(disc))
    lam = np.where(disc >= 0, (p.b + root) / p.a + 0j, p.b / p.a + 1j * root / abs(p.a))
    return complex(lam) if lam.ndim == 0 else lam


def gauge_factor(z, p: ModelParams):
    """a*lambda - b at the contour preimage of ``z``.

    Its square is ``b^2 + a z`` for every real ``z``. It is real and
    nonnegative on the real branch and ``i*|.|`` on the vertical line.
    """
    z = np.asarray(z, dtype=float)
    disc = p.b**2 + p.a * z
    root = np.sqrt(np.abs(disc))
    out = np.where(disc >= 0, root + 0j, 1j * root * np.sign(p.a))
    return complex(out) if out.ndim == 0 else out


def theta(z, x, t):
    """Phase (x/t) z + 2 z^2."""
    if np.any(np.asarray(t) <= 0):
        raise ValueError("t must be positive")
    return (x / t) * z + 2 * z * z


def stationary_point(x, t):
    """z0 = -x / (4t), the zero of d theta / dz."""
    if np.any(np.asarray(t) <= 0):
        raise ValueError("t must be positive")
    return -x / (4 * t)
