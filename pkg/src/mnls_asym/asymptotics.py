"""Closed-form long-time solution along a ray x = -4 z0 t."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import ConfigError, OutOfRange, RayMismatch
from .params import ModelParams, lambda_of_z, stationary_point
from .pcf import ModelConstants, connection_coefficients
from .phase import VARIANTS, abs_alpha, arg_alpha, beta_phase, phase_bundle, tail_phase_integral
from .scattering import ScatteringData, rho_pair

RAY_TOL = 1e-9


@dataclass(frozen=True)
class AsymptoticInputs:
    """t-independent data for one ray."""

    z0: float
    lambda0: float
    nu0: float
    absalpha: float
    argalpha: float
    tail_integral: float
    params: ModelParams
    variant: str = "gauge"

    def __post_init__(self):
        if self.params.b**2 + self.params.a * self.z0 < -1e-14:
            raise OutOfRange("b^2 + a z0 < 0")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")

    @property
    def alpha(self) -> complex:
        return self.absalpha * cmath.exp(1j * self.argalpha)

    @property
    def m_infinity(self) -> float:
        """Limit of the cumulative ``|m|^2`` entering the reconstruction exponential."""
        return -self.tail_integral / (2 * math.pi)


def prepare_ray(z0: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> AsymptoticInputs:
    """Bundle nu, |alpha|, arg alpha and the tail integral at ``z0``."""
    pb = phase_bundle(z0, sd, p, variant)
    if pb.nu0 == 0:
        return AsymptoticInputs(float(z0), pb.lambda0, 0.0, 0.0, 0.0, pb.tail_integral, p, variant)
    return AsymptoticInputs(
        float(z0),
        pb.lambda0,
        pb.nu0,
        abs_alpha(z0, sd, p, variant),
        arg_alpha(z0, sd, p, variant),
        pb.tail_integral,
        p,
        variant,
    )


def _check_ray(x, t, z0):
    if t <= 0:
        raise ValueError("t must be positive")
    if abs(stationary_point(x, t) - z0) > RAY_TOL:
        raise RayMismatch(f"(x, t) = ({x}, {t}) is not on the ray z0 = {z0}")


def _carrier(t: float, ai: AsymptoticInputs) -> complex:
    return ai.alpha * cmath.exp(1j * (4 * t * ai.z0**2 - ai.nu0 * math.log(8 * t)))


def q_asym(x: float, t: float, ai: AsymptoticInputs) -> complex:
    """``t^{-1/2} alpha e^{i(4 t z0^2 - nu log 8t)} e^{-(2ia/pi) tail}``."""
    _check_ray(x, t, ai.z0)
    tail = cmath.exp(-2j * ai.params.a / math.pi * ai.tail_integral)
    return _carrier(t, ai) * tail / math.sqrt(t)


def m_asym(x: float, t: float, ai: AsymptoticInputs) -> complex:
    """Leading term of ``m``, normalized so that ``q = 2i e^{4 i a M_inf} m``.

    Its modulus is ``|alpha| / (2 sqrt t)``.
    """
    _check_ray(x, t, ai.z0)
    return _carrier(t, ai) / (2j * math.sqrt(t))


def reconstruct_q(m: complex, cumulative_m2: float, p: ModelParams) -> complex:
    """``2i e^{4 i a M} m``."""
    return 2j * cmath.exp(4j * p.a * cumulative_m2) * m


def model_constants_at(z0: float, t: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> ModelConstants:
    """Rescaled reflection constants of the local model problem at time ``t``.

    ``rho20 = rho2(z0) delta0^{-2} e^{i nu log 8t} e^{-4 i t z0^2}`` with
    ``delta0 = e^{i beta(z0, z0)}``, and ``rho10`` conjugate-paired so that
    ``z0 rho10 rho20 = |r(lambda0)|^2``.
    """
    rp = rho_pair(sd, z0, p, "gauge" if variant == "gauge" else "literal")
    r2 = (z0 * rp.rho1 * rp.rho2).real
    nu0 = -math.log1p(-r2) / (2 * math.pi)
    beta0 = beta_phase(z0, z0, sd).real
    ph = cmath.exp(-2j * beta0 + 1j * nu0 * math.log(8 * t) - 4j * t * z0 * z0)
    rho20 = rp.rho2 * ph
    rho10 = rp.rho1 / ph
    # absorb rounding so the product invariant holds to machine precision
    rho10 *= (-math.expm1(-2 * math.pi * nu0)) / (z0 * rho10 * rho20)
    return ModelConstants(nu0, complex(rho10), complex(rho20), float(z0))


def q_from_model(x: float, t: float, sd: ScatteringData, p: ModelParams, variant: str = "gauge") -> complex:
    """Leading term assembled from the model problem's connection coefficient.

    ``m = -i beta12 / sqrt(8t)`` followed by ``reconstruct_q`` with the tail
    integral. Independent of the closed-form angle formula, so it cross-checks
    the Stieltjes integral against the delta-side quadrature of beta(z0, z0).
    """
    z0 = stationary_point(x, t)
    mc = model_constants_at(z0, t, sd, p, variant)
    if mc.nu == 0:
        return 0j
    m = -1j * connection_coefficients(mc).beta12 / math.sqrt(8 * t)
    lam0 = lambda_of_z(z0, p)
    minf = -tail_phase_integral(sd, lam0, p, variant) / (2 * math.pi)
    return reconstruct_q(m, minf, p)
