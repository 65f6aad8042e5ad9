import math

import numpy as np
import pytest

from strichartz_lab.asymptotics import (
    classical_limit_factor,
    concentrating_sequence,
    dominating_function,
    schrodinger_limit_curve,
    vanishing_modulation_curve,
)
from strichartz_lab.errors import GridUnderresolvedError, InvalidInputError
from strichartz_lab.grids import SpectralGrid, WaveFunction
from strichartz_lab.norms import WindowConfig


def test_alpha2_curve_constant_and_on_target():
    # factor (a^2-a)/2 = 1 and Galilean covariance: flat curve equal to target
    g = SpectralGrid(4096, 800.0)
    u = WaveFunction(g, np.exp(-g.x**2 / 2) / np.pi**0.25)
    pts = schrodinger_limit_curve(u, 2.0, 6.0, 6.0, [0.0, 2.0, 4.0], WindowConfig(tol=1e-3))
    assert classical_limit_factor(2.0, 6.0) == 1.0
    for p in pts:
        assert p.rel_error < 0.02  # within the capped-window tolerance scale


def test_curve_rejects_unresolved_modulation():
    g = SpectralGrid(1024, 100.0)
    u = WaveFunction(g, np.exp(-g.x**2 / 2) / np.pi**0.25)
    with pytest.raises(GridUnderresolvedError):
        schrodinger_limit_curve(u, 4.0, 6.0, 6.0, [g.nyquist], WindowConfig(tol=1e-3))


def test_dominating_function_values():
    # (0, 0) gives the bare constant; q = 6 reproduces the -1/4 / -1/2 exponents
    assert dominating_function(0.0, 0.0, 6.0, (2.5, 1.0)) == 2.5
    t, x = 3.0, 1.0  # wave zone |x| <= |t|
    expected = ((1 + t) * (1 + x)) ** -0.25
    assert abs(dominating_function(t, x, 6.0, (1.0, 1.0)) - expected) < 1e-15
    t, x = 1.0, 5.0  # outer zone
    expected = ((1 + t) * (1 + x)) ** -0.5
    assert abs(dominating_function(t, x, 6.0, (1.0, 1.0)) - expected) < 1e-15


def test_dominating_function_general_q_exponents():
    q = 8.0
    t, x = 4.0, 2.0
    expected = (1 + t) ** (-3 / (2 * q)) * (1 + x) ** (-(q - 3) / (2 * q))
    assert abs(dominating_function(t, x, q, (1.0, 1.0)) - expected) < 1e-15
    with pytest.raises(InvalidInputError):
        dominating_function(1.0, 1.0, 3.0, (1.0, 1.0))


def test_dominating_function_monotone():
    ts = np.linspace(0.0, 10.0, 41)
    inside = dominating_function(ts, 0.2 * ts, 6.0, (1.0, 1.0))
    assert np.all(np.diff(inside) <= 0)
    xs = np.linspace(2.0, 30.0, 41)
    outer = dominating_function(np.ones_like(xs), xs, 6.0, (1.0, 1.0))
    assert np.all(np.diff(outer) <= 0)


def test_concentrating_sequence_tail():
    g = SpectralGrid(4096, 100.0)
    u4 = concentrating_sequence(g, 4)
    rho = np.abs(u4.values) ** 2 * g.spacing
    outside = rho[np.abs(g.x) >= 1.0].sum()
    # closed-form Gaussian tail erfc(sqrt(2) n rho)
    assert outside < 1e-11
    assert outside < 10 * math.erfc(4 * math.sqrt(2)) + 1e-13


def test_concentrating_sequence_concentrates():
    g = SpectralGrid(4096, 100.0)
    fr = []
    for n in (2, 4, 8):
        un = concentrating_sequence(g, n)
        rho = np.abs(un.values) ** 2 * g.spacing
        fr.append(rho[np.abs(g.x) >= 0.25].sum())
    assert fr[0] > fr[1] > fr[2]


def test_concentrating_sequence_underresolved():
    g = SpectralGrid(512, 50.0)
    with pytest.raises(GridUnderresolvedError):
        concentrating_sequence(g, 12)


def test_vanishing_modulation_alpha2_flat():
    g = SpectralGrid(4096, 800.0)
    u = WaveFunction(g, np.exp(-g.x**2 / 2) / np.pi**0.25)
    rows = vanishing_modulation_curve(u, 2.0, [0.0, 2.0, 4.0], WindowConfig(tol=1e-3))
    vals = [v for _, v in rows]
    assert (max(vals) - min(vals)) / np.mean(vals) < 0.02


def test_vanishing_modulation_alpha4_decreasing():
    g = SpectralGrid(4096, 300.0)
    u = WaveFunction(g, np.exp(-g.x**2 / 2) / np.pi**0.25)
    rows = vanishing_modulation_curve(u, 4.0, [4.0, 8.0, 16.0], WindowConfig(tol=1e-3))
    vals = [v for _, v in rows]
    assert vals[0] > vals[1] > vals[2]
    with pytest.raises(Exception):
        vanishing_modulation_curve(u, 1.5, [2.0])


def test_limit_curve_self_consistency():
    # halving dt (double slice counts) and doubling N at fixed extent
    # changes the reported ratio by < 1e-3 relative
    vals = []
    for n, slices in ((8192, (96, 48)), (16384, (192, 96))):
        g = SpectralGrid(n, 600.0)
        u = WaveFunction(g, np.exp(-g.x**2 / 2) / np.pi**0.25)
        cfg = WindowConfig(tol=6e-4, first_shell_slices=slices[0], shell_slices=slices[1])
        vals.append(schrodinger_limit_curve(u, 4.0, 6.0, 6.0, [8.0], cfg)[0].value)
    assert abs(vals[1] - vals[0]) / vals[0] < 1e-3
