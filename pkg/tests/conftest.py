import numpy as np
import pytest

from paretosel.data import Dataset


def poisson_dataset(seed=20180523, n=49):
    """Synthetic counts on three covariates named like the avian example."""
    rng = np.random.default_rng(seed)
    area = rng.lognormal(11.0, 0.8, size=n)
    temp = rng.normal(12.0, 4.0, size=n)
    precip = rng.normal(900.0, 300.0, size=n)
    z = lambda v: (v - v.mean()) / v.std(ddof=1)
    eta = 5.0 + 0.15 * z(np.log(area)) + 0.1 * z(temp) - 0.05 * z(temp) ** 2 + 0.04 * z(precip)
    y = rng.poisson(np.exp(eta))
    return Dataset(y, {"area": area, "temp": temp, "precip": precip}, response_name="richness")


@pytest.fixture
def avian_like():
    return poisson_dataset()


@pytest.fixture
def gaussian_data():
    rng = np.random.default_rng(7)
    n = 80
    X = rng.normal(size=(n, 4))
    y = 2.0 + X @ np.array([1.5, -2.0, 0.0, 0.5]) + rng.normal(scale=0.7, size=n)
    return Dataset(y, {f"x{j}": X[:, j] for j in range(4)})
