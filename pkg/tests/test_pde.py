import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mnls_asym.errors import BadStep, ConfigError, Unstable
from mnls_asym.params import ModelParams
from mnls_asym.pde import (
    Field,
    dealias,
    evolve,
    evolve_snapshots,
    guard_ratio,
    mass,
    plane_wave,
)
from mnls_asym.scattering import sech_potential

P = ModelParams(1.0, 0.5)


def test_zero_stays_zero():
    f = Field.on_grid(lambda x: 0 * x, 20.0, 128)
    assert np.all(evolve(f, 1.0, 0.05, P).values == 0)


@pytest.mark.parametrize("amp", [0.3, 0.7])
def test_plane_wave_exact(amp):
    L = 2 * math.pi * 8
    f1 = evolve(plane_wave(amp, P, L, 256), 1.0, 0.01, P)
    exact = plane_wave(amp, P, L, 256, 1.0)
    assert np.max(np.abs(f1.values - exact.values)) / amp <= 1e-8


def test_plane_wave_dispersion():
    # with k = 2 b^2 / a the nonlinear shifts cancel: omega = k^2
    L = 2 * math.pi * 4
    f0, f1 = plane_wave(0.5, P, L, 64), plane_wave(0.5, P, L, 64, 1.0)
    k = 2 * P.b**2 / P.a
    assert np.allclose(f1.values, f0.values * np.exp(-1j * k * k))


def test_fourth_order_in_time():
    f0 = dealias(Field.on_grid(sech_potential(0.8, 0.5), 40.0, 512))
    ref = evolve(f0, 2.0, 0.0015625, P)
    dts = np.array([0.1, 0.05, 0.025, 0.0125])
    errs = [np.max(np.abs(evolve(f0, 2.0, dt, P).values - ref.values)) for dt in dts]
    # the integrating factor makes single ratios wobble around 16; the fitted order is stable
    order = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert 3.7 < order < 5.0
    assert 12 < errs[0] / errs[1] < 20


def test_mass_gaussian():
    f = Field.on_grid(lambda x: np.exp(-x * x), 20.0, 1024)
    assert mass(f) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-10)
    assert mass(Field.on_grid(lambda x: 0 * x, 20.0, 64)) == 0


@given(phase=st.floats(-math.pi, math.pi))
def test_mass_phase_invariant(phase):
    f = Field.on_grid(sech_potential(0.8, 0.2), 20.0, 256)
    g = Field(f.x, f.values * np.exp(1j * phase))
    assert mass(g) == pytest.approx(mass(f), rel=1e-14)


def test_mass_conserved():
    f0 = dealias(Field.on_grid(sech_potential(0.8), 80.0, 2048))
    f1 = evolve(f0, 5.0, 0.01, P)
    assert abs(mass(f1) - mass(f0)) / mass(f0) <= 1e-8


def test_snapshots_sorted_and_timed():
    f0 = dealias(Field.on_grid(sech_potential(0.5), 40.0, 256))
    snaps = evolve_snapshots(f0, [1.0, 0.5, 0.0], 0.05, P)
    assert [s.time for s in snaps] == [0.0, 0.5, 1.0]
    assert np.allclose(snaps[0].values, f0.values)


def test_bad_steps():
    f0 = Field.on_grid(sech_potential(0.5), 40.0, 256)
    with pytest.raises(BadStep):
        evolve(f0, 1.0, 0.3, P)
    with pytest.raises(BadStep):
        evolve(f0, 1.0, -0.1, P)
    with pytest.raises(BadStep):
        evolve(Field.on_grid(sech_potential(3.0), 40.0, 4096), 1.0, 0.05, P)


def test_unstable_detected():
    # a step far beyond the linear RK4 region on the nonlinear term blows up
    f0 = Field.on_grid(sech_potential(2.0), 10.0, 64)
    with pytest.raises(Unstable):
        evolve(f0, 50.0, 0.05, ModelParams(0.01, 4.0))


def test_field_validation():
    with pytest.raises(ConfigError):
        Field(np.linspace(0, 1, 100), np.zeros(100))


@settings(max_examples=20, deadline=None)
@given(x=st.floats(-30, 30))
def test_trigonometric_interpolant(x):
    f = Field.on_grid(lambda s: np.exp(-s * s / 8 + 0.3j * s), 40.0, 512)
    assert f.at(x) == pytest.approx(np.exp(-x * x / 8 + 0.3j * x), abs=1e-10)


def test_guard_ratio():
    f = Field.on_grid(sech_potential(1.0), 60.0, 512)
    assert guard_ratio(f) < 1e-20
