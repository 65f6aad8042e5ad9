import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strichartz_lab.errors import InvalidInputError
from strichartz_lab.fourier import forward_fourier, inverse_fourier
from strichartz_lab.grids import SpectralGrid, WaveFunction, l2_norm
from strichartz_lab.symmetry import gaussian_packet


def test_grid_invariants():
    g = SpectralGrid(1024, 40.0)
    assert g.spacing == 40.0 / 1024
    ax = g.freq_axis
    assert len(ax) == 1024
    assert np.any(ax == 0.0)
    d = np.diff(ax)
    assert np.allclose(d, 2 * np.pi / 40.0)
    assert ax[0] == -g.nyquist and ax[-1] < g.nyquist


def test_grid_rejects_bad_sizes():
    with pytest.raises(InvalidInputError):
        SpectralGrid(1000, 40.0)
    with pytest.raises(InvalidInputError):
        SpectralGrid(1024, -1.0)


def test_wavefunction_validation(grid_medium):
    with pytest.raises(InvalidInputError):
        WaveFunction(grid_medium, np.zeros(7))
    bad = np.zeros(grid_medium.num_points)
    bad[0] = np.nan
    with pytest.raises(InvalidInputError):
        WaveFunction(grid_medium, bad)


def test_gaussian_fourier_pair(unit_gaussian):
    # F[e^{-x^2/2}/pi^{1/4}](xi) = sqrt(2) pi^{1/4} e^{-xi^2/2}
    uh = forward_fourier(unit_gaussian)
    target = np.sqrt(2.0) * np.pi**0.25 * np.exp(-uh.grid.freq_axis**2 / 2)
    assert np.max(np.abs(uh.values - target)) < 1e-8


def test_zero_maps_to_zero(grid_medium):
    z = WaveFunction(grid_medium, np.zeros(grid_medium.num_points, dtype=complex))
    assert np.all(forward_fourier(z).values == 0)


def test_modulation_translation_duality(unit_gaussian):
    g = unit_gaussian.grid
    xi0 = 16 * g.freq_spacing  # on-bin so the shifted spectrum lands on-grid
    mod = unit_gaussian.copy_with(unit_gaussian.values * np.exp(1j * xi0 * g.x))
    lhs = forward_fourier(mod).values
    rhs = np.roll(forward_fourier(unit_gaussian).values, 16)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_roundtrip(unit_gaussian):
    back = inverse_fourier(forward_fourier(unit_gaussian))
    assert np.max(np.abs(back.values - unit_gaussian.values)) < 1e-10 * l2_norm(unit_gaussian)


def test_delta_inverts_to_constant(grid_medium):
    # uhat = 2 pi * (grid delta at xi = 0) / dxi  ->  u identically 1
    vals = np.zeros(grid_medium.num_points, dtype=complex)
    k0 = np.argmin(np.abs(grid_medium.freq_axis))
    vals[k0] = 2 * np.pi / grid_medium.freq_spacing
    u = inverse_fourier(WaveFunction(grid_medium, vals))
    assert np.max(np.abs(u.values - 1.0)) < 1e-10


def test_gaussian_pair_reversed(unit_gaussian):
    g = unit_gaussian.grid
    uh = WaveFunction(g, np.sqrt(2.0) * np.pi**0.25 * np.exp(-g.freq_axis**2 / 2))
    u = inverse_fourier(uh)
    assert np.max(np.abs(u.values - unit_gaussian.values)) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_plancherel_property(seed):
    # ||F u||_2^2 = 2 pi ||u||_2^2 for band-limited data
    g = SpectralGrid(512, 40.0)
    rng = np.random.default_rng(seed)
    mask = np.abs(g.freq_natural) < 0.5 * g.nyquist
    uhat = (rng.standard_normal(512) + 1j * rng.standard_normal(512)) * mask
    from strichartz_lab.fourier import wavefunction_from_spectrum

    u = wavefunction_from_spectrum(g, uhat)
    uh = forward_fourier(u)
    lhs = np.sum(np.abs(uh.values) ** 2) * g.freq_spacing
    rhs = 2 * np.pi * l2_norm(u) ** 2
    assert abs(lhs / rhs - 1.0) < 1e-8


def test_l2_norm_examples(grid_medium):
    p = gaussian_packet(grid_medium, 0.0, 0.0, 1.0)
    assert abs(l2_norm(p) - 1.0) < 1e-10
    scaled = gaussian_packet(grid_medium, 0.0, 0.0, 2.0)
    assert abs(l2_norm(scaled) - 1.0) < 1e-10
    g = SpectralGrid(4096, 60.0)
    ind = WaveFunction(g, ((g.x >= 0) & (g.x < 1.0)).astype(complex))
    assert abs(l2_norm(ind) - 1.0) < 2 * g.spacing
