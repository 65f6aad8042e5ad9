import numpy as np
import pytest

from strichartz_lab.grids import SpectralGrid, WaveFunction


@pytest.fixture(scope="session")
def grid_medium() -> SpectralGrid:
    return SpectralGrid(2048, 60.0)


@pytest.fixture(scope="session")
def grid_wide() -> SpectralGrid:
    # wide box for dispersive-window evaluations
    return SpectralGrid(4096, 1600.0)


@pytest.fixture(scope="session")
def unit_gaussian(grid_medium) -> WaveFunction:
    # e^{-x^2/2} / pi^{1/4}: the standard unit-L^2 Gaussian
    return WaveFunction(grid_medium, np.exp(-grid_medium.x**2 / 2) / np.pi**0.25)


@pytest.fixture(scope="session")
def unit_gaussian_wide(grid_wide) -> WaveFunction:
    return WaveFunction(grid_wide, np.exp(-grid_wide.x**2 / 2) / np.pi**0.25)


def gauss_evolution_oracle(x: np.ndarray, t: float) -> np.ndarray:
    """Closed-form evolution of e^{-x^2/2}/pi^{1/4} under the e^{-i t xi^2} multiplier."""
    return (1.0 + 2.0j * t) ** -0.5 * np.exp(-(x**2) / (2.0 * (1.0 + 2.0j * t))) / np.pi**0.25
