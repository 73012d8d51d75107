import numpy as np
import pytest

from mnls_asym.params import ModelParams
from mnls_asym.scattering import (
    SampledPotential,
    ScatteringData,
    default_lambda_grid,
    reflection_table,
    sech_potential,
)


def synthetic_data(p: ModelParams, r, grid=None) -> ScatteringData:
    """ScatteringData whose real-axis reflection is ``r(lambda)`` (no vertical branch)."""
    lg = default_lambda_grid(p, 6.0, 0.01) if grid is None else np.asarray(grid, float)
    rv = np.asarray(r(lg), dtype=complex) * np.ones(lg.shape)
    s11 = 1 / np.sqrt(1 - np.abs(rv) ** 2)
    return ScatteringData(p, lg, s11 + 0j, rv * s11)


@pytest.fixture(scope="session")
def params():
    return ModelParams(1.0, 0.5)


@pytest.fixture(scope="session")
def sech_q0():
    return SampledPotential.from_function(sech_potential(0.8), 30.0, 0.005)


@pytest.fixture(scope="session")
def sech_data(sech_q0, params):
    return reflection_table(sech_q0, default_lambda_grid(params), params, refine_at=[0.8873, 1.5])
