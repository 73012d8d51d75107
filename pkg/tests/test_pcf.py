import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mnls_asym.errors import ConfigError, DegenerateReflection, OnRealAxis, Pole
from mnls_asym.pcf import (
    ModelConstants,
    complex_gamma,
    connection_coefficients,
    contour_first_moment,
    jump_residuals,
    model_solution,
    nsol_first_moment,
    pcf_d,
    pcf_d_prime,
    ray_first_moment,
    ray_jump,
    rgamma,
    sector,
    weber_residual,
)

NUS = (0.01, 0.1, 0.5, 1.0, 2.0)


def test_gamma_classical_values():
    assert complex_gamma(1) == pytest.approx(1, abs=1e-15)
    assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    nu = 0.5
    assert abs(complex_gamma(1j * nu)) ** 2 == pytest.approx(math.pi / (nu * math.sinh(math.pi * nu)), rel=1e-12)


def test_gamma_poles():
    for w in (0, -1, -7):
        with pytest.raises(Pole):
            complex_gamma(w)
        assert rgamma(w) == 0


@given(re=st.floats(-6.5, 8), im=st.floats(-8, 8))
def test_gamma_against_mpmath(re, im):
    w = complex(re, im)
    if abs(w - round(re)) < 1e-3 and round(re) <= 0:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(re, im)))
    assert abs(complex_gamma(w) - ref) <= 1e-12 * abs(ref) + 1e-300


def test_pcf_order_zero_and_one():
    xi = np.array([0.3 + 0.1j, 2.0 - 1.0j, 5.5j, 9.0 + 2.0j])
    assert np.allclose(pcf_d(0, xi), np.exp(-xi * xi / 4), rtol=1e-12, atol=1e-300)
    assert abs(pcf_d(1, 0.0)) < 1e-15


@pytest.mark.parametrize("order", [0.4j, -0.7j, 2j, 0.5 + 1.5j])
def test_pcf_against_mpmath(order):
    pts = [r * cmath.exp(1j * a) for r in (0.5, 3.0, 6.9, 7.1, 12.0) for a in np.linspace(-math.pi, math.pi, 9)[1:]]
    for xi in pts:
        ref = complex(mpmath.pcfd(mpmath.mpc(order.real, order.imag), mpmath.mpc(xi.real, xi.imag)))
        got = pcf_d(order, xi)
        assert abs(got - ref) <= 1e-6 * max(abs(ref), 1e-3)


@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0, 2.0])
@pytest.mark.parametrize("rot", [cmath.exp(-0.75j * math.pi), cmath.exp(0.25j * math.pi)])
def test_weber_residual(nu, rot):
    zeta = np.linspace(-6, 6, 61)
    assert weber_residual(1j * nu, rot, zeta) <= 1e-6
    assert weber_residual(-1j * nu, rot, zeta) <= 1e-6


@settings(max_examples=30)
@given(re=st.floats(-5, 5), im=st.floats(-5, 5), nu=st.floats(0.05, 2))
def test_recurrence(re, im, nu):
    xi = complex(re, im)
    a = 1j * nu
    lhs = pcf_d(a + 1, xi) - xi * pcf_d(a, xi) + a * pcf_d(a - 1, xi)
    scale = abs(pcf_d(a + 1, xi)) + abs(xi * pcf_d(a, xi)) + abs(a * pcf_d(a - 1, xi))
    assert abs(lhs) <= 1e-9 * scale


def test_derivative_matches_finite_difference():
    h = 1e-5
    for xi in (0.5 + 0.2j, 4.0 - 3.0j, 8.0 + 1.0j):
        fd = (pcf_d(0.3j, xi + h) - pcf_d(0.3j, xi - h)) / (2 * h)
        assert pcf_d_prime(0.3j, xi) == pytest.approx(fd, rel=1e-7)


def test_model_constants_validation():
    with pytest.raises(ConfigError):
        ModelConstants(0.5, 1.0, 1.0, 1.0)
    with pytest.raises(ConfigError):
        ModelConstants(-0.1, 0j, 0j, 1.0)


@pytest.mark.parametrize("nu", NUS)
def test_beta_identity(nu):
    mc = ModelConstants.from_nu(nu, z0=0.7, phase=0.3)
    cc = connection_coefficients(mc)
    assert abs(cc.beta12 * cc.beta21 - nu) <= 1e-14 * nu
    # balanced constants give |z0 rho20|^2 = 1 - e^{-2 pi nu}, hence |beta12|^2 = nu
    assert abs(cc.beta12) ** 2 == pytest.approx(nu, rel=1e-12)
    m1 = nsol_first_moment(mc)
    assert m1[0, 0] == 0 and m1[1, 1] == 0
    assert m1[0, 1] * m1[1, 0] == pytest.approx(nu, rel=1e-14)


def test_beta_small_nu_scaling():
    vals = [abs(connection_coefficients(ModelConstants.from_nu(n, balance=2.0)).beta12) / math.sqrt(n)
            for n in (1e-4, 1e-5, 1e-6)]
    assert vals[1] == pytest.approx(vals[0], rel=1e-3)
    assert vals[2] == pytest.approx(vals[1], rel=1e-4)


def test_trivial_model_problem():
    mc = ModelConstants(0.0, 0j, 0j, 1.0)
    assert np.allclose(model_solution(2 + 1j, mc), np.eye(2))
    assert np.all(nsol_first_moment(mc) == 0)
    with pytest.raises(DegenerateReflection):
        connection_coefficients(mc)


def test_model_solution_off_axis_only():
    with pytest.raises(OnRealAxis):
        model_solution(1.0, ModelConstants.from_nu(0.5))


@pytest.mark.parametrize("nu", [0.1, 0.5, 1.0, 2.0])
def test_real_line_jump(nu):
    mc = ModelConstants.from_nu(nu, z0=0.8, phase=-1.1)
    samples = np.linspace(-8, 8, 100)
    assert np.max(jump_residuals(mc, samples)) <= 1e-7


def test_literal_argument_breaks_jump():
    mc = ModelConstants.from_nu(0.5, z0=0.8, phase=0.4)
    assert np.max(jump_residuals(mc, np.linspace(-3, 3, 13), literal=True)) > 1e-2


@pytest.mark.parametrize("nu", NUS)
def test_first_moment(nu):
    mc = ModelConstants.from_nu(nu, z0=0.7, phase=0.3)
    m1 = nsol_first_moment(mc)
    assert np.max(np.abs(contour_first_moment(mc) - m1)) <= 1e-4
    # a single point on the ray carries the next Laurent term, of size nu / |zeta|
    dev = np.max(np.abs(ray_first_moment(mc) - m1))
    assert dev <= 5 * nu


def test_assembled_solution_continuous_across_real_axis():
    mc = ModelConstants.from_nu(0.7, z0=0.9, phase=0.2)
    for s in (-3.0, -0.5, 0.4, 2.5):
        up, dn = model_solution(complex(s, 1e-9), mc), model_solution(complex(s, -1e-9), mc)
        assert np.max(np.abs(up - dn)) < 1e-6


@pytest.mark.parametrize("nu", [0.2, 1.0])
def test_ray_jumps(nu):
    mc = ModelConstants.from_nu(nu, z0=0.7, phase=0.3)
    for j, ang, (sa, sb) in ((1, 0.25, (1, 2)), (2, 0.75, (2, 3)), (3, -0.75, (4, 5)), (4, -0.25, (5, 6))):
        z = 1.7 * cmath.exp(1j * math.pi * ang)
        na, nb = model_solution(z, mc, sector_index=sa), model_solution(z, mc, sector_index=sb)
        V = ray_jump(z, j, mc)
        res = nb - na @ V if j in (1, 4) else na - nb @ V
        assert np.max(np.abs(res)) < 1e-9


def test_sector_indexing():
    assert [sector(cmath.exp(1j * a)) for a in (0.3, 1.5, 3.0, -3.0, -1.5, -0.3)] == [1, 2, 3, 4, 5, 6]
