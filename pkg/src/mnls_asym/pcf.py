"""Complex gamma, parabolic cylinder functions and the explicit model RH solution.

``D_a(xi)`` uses a Maclaurin series generated from the Weber equation for
``|xi| <= R_SWITCH`` and the Poincare expansion (with the recessive
contribution beyond the Stokes lines ``|arg xi| = pi/2``) outside.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateReflection, NonFinite, OnRealAxis, Pole

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

R_SWITCH = 7.0
TAYLOR_TERMS = 200
ASYMPTOTIC_TERMS = 40


def _is_pole(w: complex) -> bool:
    return w.imag == 0 and w.real <= 0 and abs(w.real - round(w.real)) < 1e-14


def _log_gamma_lanczos(w: complex) -> complex:
    """log Gamma(w) for Re w >= 1/2."""
    w = w - 1
    s = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        s += _LANCZOS[k] / (w + k)
    t = w + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (w + 0.5) * cmath.log(t) - t + cmath.log(s)


def complex_gamma(w) -> complex:
    """Gamma(w) by the Lanczos approximation, reflected for Re w < 1/2."""
    w = complex(w)
    if _is_pole(w):
        raise Pole(f"Gamma has a pole at {w.real:g}")
    if w.real < 0.5:
        return math.pi / (cmath.sin(math.pi * w) * complex_gamma(1 - w))
    return cmath.exp(_log_gamma_lanczos(w))


def rgamma(w) -> complex:
    """1/Gamma(w), zero at the poles."""
    w = complex(w)
    if _is_pole(w):
        return 0j
    return 1 / complex_gamma(w)


def _taylor(order: complex, xi: np.ndarray) -> np.ndarray:
    # D'' = (xi^2/4 - order - 1/2) D  =>  (n+2)(n+1) c_{n+2} = -(order + 1/2) c_n + c_{n-2}/4
    c0 = 2 ** (order / 2) * math.sqrt(math.pi) * rgamma((1 - order) / 2)
    c1 = -(2 ** ((order + 1) / 2)) * math.sqrt(math.pi) * rgamma(-order / 2)
    c = [c0, c1]
    for n in range(TAYLOR_TERMS - 2):
        prev = c[n - 2] if n >= 2 else 0
        c.append((-(order + 0.5) * c[n] + prev / 4) / ((n + 2) * (n + 1)))
    # Horner
    out = np.zeros_like(xi)
    for cn in reversed(c):
        out = out * xi + cn
    return out


def _poincare(alpha: complex, sgn: int, xi: np.ndarray) -> np.ndarray:
    """sum_s (alpha)_{2s} sgn^s / (s! (2 xi^2)^s), truncated at the smallest term."""
    out = np.ones_like(xi)
    term = np.ones_like(xi)
    best = np.abs(term)
    done = np.zeros(xi.shape, bool)
    for s in range(ASYMPTOTIC_TERMS):
        term = term * (alpha + 2 * s) * (alpha + 2 * s + 1) * sgn / ((s + 1) * 2 * xi * xi)
        a = np.abs(term)
        done |= a > best
        out = np.where(done, out, out + term)
        best = np.minimum(best, a)
    return out


def _asymptotic(order: complex, xi: np.ndarray) -> np.ndarray:
    out = np.exp(-xi * xi / 4) * xi**order * _poincare(-order, -1, xi)
    ph = np.angle(xi)
    beyond = np.abs(ph) > math.pi / 2
    if np.any(beyond):
        xb = xi[beyond]
        sgn = np.where(ph[beyond] > 0, 1, -1)
        rec = (
            -math.sqrt(2 * math.pi)
            * rgamma(-order)
            * np.exp(sgn * 1j * math.pi * order)
            * np.exp(xb * xb / 4)
            * xb ** (-order - 1)
            * _poincare(order + 1, 1, xb)
        )
        out[beyond] = out[beyond] + rec
    return out


def pcf_d(order, xi):
    """Parabolic cylinder function ``D_order(xi)`` for complex order and argument."""
    order = complex(order)
    x = np.atleast_1d(np.asarray(xi, dtype=complex))
    out = np.empty_like(x)
    small = np.abs(x) <= R_SWITCH
    with np.errstate(over="ignore", invalid="ignore"):
        if np.any(small):
            out[small] = _taylor(order, x[small])
        if np.any(~small):
            out[~small] = _asymptotic(order, x[~small])
    if not np.all(np.isfinite(out)):
        raise NonFinite("D overflow")
    return complex(out[0]) if np.ndim(xi) == 0 else out


def pcf_d_prime(order, xi):
    """``d/dxi D_order(xi) = (xi/2) D_order - D_{order+1}``."""
    xi_arr = np.asarray(xi, dtype=complex)
    return xi_arr / 2 * pcf_d(order, xi) - pcf_d(complex(order) + 1, xi)


@dataclass(frozen=True)
class ModelConstants:
    """Constant reflection data of the model problem at the stationary point."""

    nu: float
    rho10: complex
    rho20: complex
    z0: float

    def __post_init__(self):
        if self.nu < 0 or not math.isfinite(self.nu):
            raise ConfigError("nu must be finite and >= 0")
        prod = self.z0 * self.rho10 * self.rho20
        target = -math.expm1(-2 * math.pi * self.nu)
        if abs(prod - target) > 1e-10:
            raise ConfigError(f"z0 rho10 rho20 = {prod} but 1 - exp(-2 pi nu) = {target}")

    @classmethod
    def from_nu(cls, nu: float, z0: float = 1.0, phase: float = 0.0, balance: float = 1.0):
        """Build constants with ``z0 rho20 = balance * sqrt(R) e^{i phase}``, ``R = 1 - e^{-2 pi nu}``."""
        R = -math.expm1(-2 * math.pi * nu)
        s = math.sqrt(R)
        rho20 = balance * s * cmath.exp(1j * phase) / z0
        rho10 = s * cmath.exp(-1j * phase) / balance if R > 0 else 0j
        return cls(float(nu), complex(rho10), complex(rho20), float(z0))

    @property
    def reflection(self) -> float:
        return (self.z0 * self.rho10 * self.rho20).real

    def jump_v0(self) -> np.ndarray:
        z0r1r2 = self.z0 * self.rho10 * self.rho20
        return np.array([[1 - z0r1r2, -self.rho10], [self.z0 * self.rho20, 1]], dtype=complex)


@dataclass(frozen=True)
class ConnectionCoefficients:
    beta12: complex
    beta21: complex


def connection_coefficients(mc: ModelConstants) -> ConnectionCoefficients:
    """``beta12 = sqrt(2 pi) e^{i pi/4} e^{-pi nu/2} / (z0 rho20 Gamma(-i nu))``, ``beta21 = nu/beta12``."""
    if mc.rho20 == 0 or mc.nu == 0:
        raise DegenerateReflection("rho20 = 0: the model problem is trivial")
    b12 = (
        math.sqrt(2 * math.pi)
        * cmath.exp(1j * math.pi / 4)
        * math.exp(-math.pi * mc.nu / 2)
        / (mc.z0 * mc.rho20 * complex_gamma(-1j * mc.nu))
    )
    return ConnectionCoefficients(complex(b12), complex(mc.nu / b12))


def nsol_first_moment(mc: ModelConstants) -> np.ndarray:
    """``[[0, -i beta12], [i beta21, 0]]``; zero when nu = 0."""
    if mc.nu == 0:
        return np.zeros((2, 2), complex)
    cc = connection_coefficients(mc)
    return np.array([[0, -1j * cc.beta12], [1j * cc.beta21, 0]], dtype=complex)


_E = cmath.exp


def model_theta(zeta, mc: ModelConstants, side: int | None = None, literal: bool = False,
                cc: ConnectionCoefficients | None = None) -> np.ndarray:
    """Half-plane solution ``theta_+`` (side=+1) or ``theta_-`` (side=-1) at ``zeta``.

    ``side`` defaults to the sign of ``Im zeta``; passing it explicitly with real
    ``zeta`` gives the boundary value from that side (the entries are entire).
    ``literal=True`` keeps the argument ``e^{-3i pi/4} zeta`` in the derivative
    term of ``(theta_-)_12``; the default uses ``e^{3i pi/4} zeta``, which is the
    one compatible with the jump on the real line.
    """
    zeta = complex(zeta)
    if side is None:
        if zeta.imag == 0:
            raise OnRealAxis("zeta on the real axis; pass side=+1 or -1 for a boundary value")
        side = 1 if zeta.imag > 0 else -1
    nu = mc.nu
    if nu == 0:
        return np.eye(2, dtype=complex)
    if cc is None:
        cc = connection_coefficients(mc)
    b12, b21 = cc.beta12, cc.beta21
    pi = math.pi

    def D(order, c):
        return pcf_d(order, c * zeta)

    def dD(order, c):  # d/dzeta D(c zeta)
        return c * pcf_d_prime(order, c * zeta)

    if side > 0:
        A, B = _E(-3j * pi / 4), _E(-1j * pi / 4)
        t11 = math.exp(-3 * pi * nu / 4) * D(1j * nu, A)
        t12 = math.exp(pi * nu / 4) / b21 * (dD(-1j * nu, B) - 0.5j * zeta * D(-1j * nu, B))
        t21 = math.exp(-3 * pi * nu / 4) / b12 * (dD(1j * nu, A) + 0.5j * zeta * D(1j * nu, A))
        t22 = math.exp(pi * nu / 4) * D(-1j * nu, B)
    else:
        A, B = _E(1j * pi / 4), _E(3j * pi / 4)
        B12 = _E(-3j * pi / 4) if literal else B
        t11 = math.exp(pi * nu / 4) * D(1j * nu, A)
        t12 = math.exp(-3 * pi * nu / 4) / b21 * (dD(-1j * nu, B12) - 0.5j * zeta * D(-1j * nu, B12))
        t21 = math.exp(pi * nu / 4) / b12 * (dD(1j * nu, A) + 0.5j * zeta * D(1j * nu, A))
        t22 = math.exp(-3 * pi * nu / 4) * D(-1j * nu, B)
    return np.array([[t11, t12], [t21, t22]], dtype=complex)


def sector(zeta: complex) -> int:
    """Index j of the sector Lambda_j containing ``zeta`` (1..6, counterclockwise from arg 0)."""
    ph = cmath.phase(complex(zeta))
    q = math.pi / 4
    if 0 < ph < q:
        return 1
    if q <= ph <= 3 * q:
        return 2
    if 3 * q < ph <= math.pi:
        return 3
    if -math.pi < ph < -3 * q:
        return 4
    if -3 * q <= ph <= -q:
        return 5
    return 6


def sector_matrix(j: int, mc: ModelConstants, literal: bool = False) -> np.ndarray:
    """Triangular factor P0 on sector ``j``.

    With ``literal=False`` the off-diagonal signs on Lambda_1 and Lambda_3 are
    negated relative to ``literal=True``; only then is the assembled solution
    continuous across the real axis given the real-line jump of theta.
    """
    k = mc.z0 * mc.rho20
    one_m = 1 - mc.z0 * mc.rho10 * mc.rho20
    s = 1 if literal else -1
    if j == 1:
        return np.array([[1, 0], [s * k, 1]], dtype=complex)
    if j == 3:
        return np.array([[1, -s * mc.rho10 / one_m], [0, 1]], dtype=complex)
    if j == 4:
        return np.array([[1, 0], [k / one_m, 1]], dtype=complex)
    if j == 6:
        return np.array([[1, -mc.rho10], [0, 1]], dtype=complex)
    return np.eye(2, dtype=complex)


def _tail_factor(zeta: complex, nu: float) -> np.ndarray:
    e = cmath.exp(0.25j * zeta * zeta)
    zp = cmath.exp(-1j * nu * cmath.log(zeta))
    return np.array([[e * zp, 0], [0, 1 / (e * zp)]], dtype=complex)


def model_solution(zeta, mc: ModelConstants, literal: bool = False, sector_index: int | None = None) -> np.ndarray:
    """``N_sol(zeta) = theta(zeta) P0 e^{i zeta^2 sigma3 / 4} zeta^{-i nu sigma3}``.

    ``sector_index`` overrides the sector used for ``P0`` (for sector-consistency checks).
    """
    zeta = complex(zeta)
    if zeta.imag == 0:
        raise OnRealAxis("N_sol is requested off the real axis")
    if mc.nu == 0:
        return np.eye(2, dtype=complex)
    j = sector(zeta) if sector_index is None else sector_index
    th = model_theta(zeta, mc, 1 if j in (1, 2, 3) else -1, literal)
    return th @ sector_matrix(j, mc, literal) @ _tail_factor(zeta, mc.nu)


def ray_jump(zeta: complex, j: int, mc: ModelConstants) -> np.ndarray:
    """Jump matrix on the ray ``Sigma_j`` (j = 1..4, counterclockwise from arg pi/4)."""
    nu = mc.nu
    one_m = 1 - mc.z0 * mc.rho10 * mc.rho20
    zl = cmath.log(zeta)
    up = cmath.exp(-2j * nu * zl) * cmath.exp(0.5j * zeta * zeta)
    dn = cmath.exp(2j * nu * zl) * cmath.exp(-0.5j * zeta * zeta)
    if j == 1:
        return np.array([[1, 0], [mc.z0 * mc.rho20 * up, 1]], dtype=complex)
    if j == 2:
        return np.array([[1, -mc.rho10 / one_m * dn], [0, 1]], dtype=complex)
    if j == 3:
        return np.array([[1, 0], [mc.z0 * mc.rho20 / one_m * up, 1]], dtype=complex)
    if j == 4:
        return np.array([[1, -mc.rho10 * dn], [0, 1]], dtype=complex)
    raise ValueError("ray index must be 1..4")


def contour_first_moment(mc: ModelConstants, radius: float = 50.0, n: int = 256, literal: bool = False) -> np.ndarray:
    """First Laurent coefficient of ``N_sol`` from a trapezoid Cauchy integral on ``|zeta| = radius``.

    Nodes are offset by half a step so none lies on the real axis or a ray.
    """
    ang = 2 * math.pi * (np.arange(n) + 0.5) / n
    acc = np.zeros((2, 2), complex)
    for t in ang:
        z = radius * cmath.exp(1j * t)
        acc += (model_solution(z, mc, literal) - np.eye(2)) * z
    return acc / n


def ray_first_moment(mc: ModelConstants, radius: float = 50.0, literal: bool = False) -> np.ndarray:
    """Single-point estimate ``zeta (N_sol(zeta) - I)`` at ``zeta = i radius``."""
    z = 1j * radius
    return z * (model_solution(z, mc, literal) - np.eye(2))


def jump_residuals(mc: ModelConstants, samples, eps: float = 0.0, literal: bool = False) -> np.ndarray:
    """``max |theta_+ - theta_- V(0)|`` at each real sample.

    ``eps = 0`` uses exact boundary values; ``eps > 0`` evaluates at ``s +- i eps``.
    """
    V = mc.jump_v0()
    cc = connection_coefficients(mc)
    out = []
    for s in np.asarray(samples, dtype=float):
        tp = model_theta(complex(s, eps), mc, 1, literal, cc)
        tm = model_theta(complex(s, -eps), mc, -1, literal, cc)
        out.append(float(np.max(np.abs(tp - tm @ V))))
    return np.array(out)


def weber_residual(order: complex, rotation: complex, zeta, h: float = 5e-3) -> float:
    """Relative residual of ``f(zeta) = D_order(rotation zeta)`` in its Weber equation.

    ``f'' = rotation^2 (xi^2/4 - order - 1/2) f`` with ``xi = rotation zeta``;
    ``f''`` by the 5-point stencil. The default ``h`` balances truncation against roundoff.
    """
    zeta = np.asarray(zeta, dtype=float)
    f = lambda s: pcf_d(order, rotation * s)  # noqa: E731
    d2 = (-f(zeta + 2 * h) + 16 * f(zeta + h) - 30 * f(zeta) + 16 * f(zeta - h) - f(zeta - 2 * h)) / (12 * h * h)
    xi = rotation * zeta
    fz = f(zeta)
    res = d2 - rotation**2 * (xi * xi / 4 - order - 0.5) * fz
    return float(np.max(np.abs(res)) / np.max(np.abs(fz)))
