import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mnls_asym.errors import ConfigError, OutOfRange
from mnls_asym.params import (
    ModelParams,
    gauge_factor,
    lambda_of_z,
    sigma_preimage,
    stationary_point,
    theta,
    z_of_lambda,
)

P11 = ModelParams(1.0, 1.0)

coef = st.floats(0.1, 5.0)
signed = st.floats(-5.0, 5.0)


@pytest.mark.parametrize("lam, expected", [(0, 0), (2, 0), (1, -1)])
def test_z_of_lambda_examples(lam, expected):
    assert z_of_lambda(lam, P11) == expected


@pytest.mark.parametrize("z, expected", [(0, 2), (-1, 1), (3, 3)])
def test_lambda_of_z_examples(z, expected):
    assert lambda_of_z(z, P11) == pytest.approx(expected, abs=1e-15)


def test_lambda_of_z_below_vertex_raises():
    with pytest.raises(OutOfRange):
        lambda_of_z(-1.5, P11)


@pytest.mark.parametrize("a, b", [(0.0, 1.0), (math.nan, 1.0), (1.0, math.inf)])
def test_params_rejects_degenerate(a, b):
    with pytest.raises(ConfigError):
        ModelParams(a, b)


def test_theta_examples():
    assert theta(0.0, 3.7, 2.0) == 0
    assert theta(1.0, 0.0, 1.0) == 2


def test_stationary_point_examples():
    assert stationary_point(-4, 1) == 1
    assert stationary_point(0, 5) == 0
    assert stationary_point(8, 2) == -1
    with pytest.raises(ValueError):
        stationary_point(1.0, 0.0)


@given(a=coef, b=signed, lam=st.floats(-10, 10))
def test_round_trip_far_branch(a, b, lam):
    p = ModelParams(a, b)
    lam = max(lam, p.vertex)
    back = lambda_of_z(z_of_lambda(lam, p), p)
    assert back == pytest.approx(lam, rel=1e-9, abs=1e-6 * (1 + abs(b) / a))


@given(a=coef, b=signed, lam=st.floats(-10, 10))
def test_map_is_two_to_one(a, b, lam):
    p = ModelParams(a, b)
    assert z_of_lambda(2 * p.b / p.a - lam, p) == pytest.approx(z_of_lambda(lam, p), rel=1e-12, abs=1e-10)


@given(x=st.floats(-50, 50), t=st.floats(0.5, 50))
def test_theta_stationary(x, t):
    z0 = stationary_point(x, t)
    h = 1e-4
    d = (theta(z0 + h, x, t) - theta(z0 - h, x, t)) / (2 * h)
    assert abs(d) < 1e-6 * (1 + abs(x / t))


@given(a=coef, b=signed, z=st.floats(-30, 30))
def test_gauge_factor_squares_to_discriminant(a, b, z):
    p = ModelParams(a, b)
    w = gauge_factor(z, p)
    assert w * w == pytest.approx(p.b**2 + p.a * z, rel=1e-10, abs=1e-10)


def test_sigma_preimage_vertical_branch():
    lam = sigma_preimage(np.array([-2.0, 3.0]), P11)
    assert lam[0] == pytest.approx(1 + 1j)
    assert lam[1] == pytest.approx(3)
    assert np.allclose(z_of_lambda(lam, P11), [-2.0, 3.0])
