import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mnls_asym.asymptotics import (
    AsymptoticInputs,
    m_asym,
    model_constants_at,
    prepare_ray,
    q_asym,
    q_from_model,
    reconstruct_q,
)
from mnls_asym.errors import OutOfRange, RayMismatch
from mnls_asym.params import ModelParams
from mnls_asym.scattering import SampledPotential, default_lambda_grid, reflection_table


def inputs(absalpha=1.0, argalpha=0.3, z0=0.2, nu0=0.1, tail=-0.05, p=ModelParams(1.0, 0.5)):
    return AsymptoticInputs(z0, 0.5 + math.sqrt(max(0.25 + z0, 0.0)), nu0, absalpha, argalpha, tail, p)


def test_zero_data_bundle(params):
    sd = reflection_table(SampledPotential.zero(), np.linspace(-2, 3, 51), params)
    ai = prepare_ray(0.3, sd, params)
    assert (ai.nu0, ai.absalpha, ai.tail_integral) == (0.0, 0.0, 0.0)
    assert q_asym(-1.2 * 10, 10.0, ai) == 0
    assert m_asym(-1.2 * 10, 10.0, ai) == 0


def test_bundle_is_deterministic(sech_data, params):
    assert prepare_ray(0.75, sech_data, params) == prepare_ray(0.75, sech_data, params)


def test_refined_grid_changes_little(sech_data, params, sech_q0):
    fine = reflection_table(sech_q0, default_lambda_grid(params, 3.0, 0.01), params, refine_at=[0.8873, 1.5])
    for z0 in (-0.1, 0.75):
        a, b = prepare_ray(z0, sech_data, params), prepare_ray(z0, fine, params)
        assert abs(a.absalpha - b.absalpha) <= 1e-6


def test_bundle_below_vertex_rejected():
    with pytest.raises(OutOfRange):
        inputs(z0=-0.5)


def test_m_asym_modulus():
    ai = inputs(absalpha=1.0)
    assert abs(m_asym(-4 * ai.z0 * 2.0, 2.0, ai)) == pytest.approx(1 / (2 * math.sqrt(2)), rel=1e-14)


@given(t=st.floats(1.0, 1e4))
def test_q_asym_modulus(t):
    ai = inputs(absalpha=0.37)
    assert abs(q_asym(-4 * ai.z0 * t, t, ai)) * math.sqrt(t) == pytest.approx(0.37, rel=1e-12)


@given(t=st.floats(1.0, 500.0), z0=st.floats(-0.2, 2.0))
def test_phase_advance(t, z0):
    ai = inputs(z0=z0)
    m1, m2 = m_asym(-4 * z0 * t, t, ai), m_asym(-8 * z0 * t, 2 * t, ai)
    d = cmath.phase(m2 / m1)
    expected = (4 * z0**2 * t - ai.nu0 * math.log(2) + math.pi) % (2 * math.pi) - math.pi
    assert abs(cmath.exp(1j * d) - cmath.exp(1j * expected)) < 1e-8


@given(t=st.floats(1.0, 500.0))
def test_q_asym_is_reconstruction_of_m_asym(t):
    ai = inputs()
    x = -4 * ai.z0 * t
    assert abs(q_asym(x, t, ai) - reconstruct_q(m_asym(x, t, ai), ai.m_infinity, ai.params)) < 1e-12


def test_reconstruct_q_basics(params):
    assert reconstruct_q(0j, 0.4, params) == 0
    m = 0.3 - 0.2j
    assert abs(reconstruct_q(m, 0.4, params)) == pytest.approx(2 * abs(m), rel=1e-15)
    assert reconstruct_q(m, 0.0, params) == 2j * m


def test_ray_mismatch():
    ai = inputs()
    with pytest.raises(RayMismatch):
        q_asym(1.0, 10.0, ai)
    with pytest.raises(ValueError):
        q_asym(0.0, 0.0, ai)


@pytest.mark.parametrize("z0", [-0.2, -0.1, 0.1, 0.3, 0.75])
def test_model_problem_route_agrees(sech_data, params, z0):
    ai = prepare_ray(z0, sech_data, params)
    for t in (30.0, 200.0):
        x = -4 * z0 * t
        assert abs(q_asym(x, t, ai) - q_from_model(x, t, sech_data, params)) <= 1e-8


def test_model_constants_product(sech_data, params):
    mc = model_constants_at(0.75, 50.0, sech_data, params)
    assert mc.z0 * mc.rho10 * mc.rho20 == pytest.approx(-math.expm1(-2 * math.pi * mc.nu), abs=1e-14)


def test_literal_variant_differs(sech_data, params):
    g = prepare_ray(-0.1, sech_data, params)
    lit = prepare_ray(-0.1, sech_data, params, "literal")
    assert lit.absalpha == pytest.approx(math.sqrt(g.nu0 / 2), rel=1e-14)
    assert g.absalpha == pytest.approx(0.64073, abs=2e-5)
    assert lit.absalpha == pytest.approx(0.24815, abs=2e-5)
