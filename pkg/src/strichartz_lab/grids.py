"""Uniform periodic discretization of the line and functions living on it.

The spatial window is ``[-L/2, L/2)`` with ``N`` (a power of two) equispaced
samples.  The matched frequency axis carries the wavenumbers
``xi_k = 2*pi*k/L`` for ``k = -N/2 .. N/2-1``, so it is evenly spaced,
contains 0, and spans ``[-pi/dx, pi/dx)``.  Functions are treated as
periodic surrogates for functions on the real line; every test profile is
required to decay below quadrature tolerance at the window boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

__all__ = ["SpectralGrid", "WaveFunction", "l2_norm", "inner_product"]


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform periodic space grid with its matched frequency axis."""

    num_points: int
    extent: float

    def __post_init__(self):
        if not _is_power_of_two(int(self.num_points)):
            raise InvalidInputError(
                f"num_points must be a power of two, got {self.num_points}"
            )
        if not (self.extent > 0 and np.isfinite(self.extent)):
            raise InvalidInputError(f"extent must be positive, got {self.extent}")

    @property
    def spacing(self) -> float:
        return self.extent / self.num_points

    @property
    def x(self) -> np.ndarray:
        """Sample points -L/2, -L/2+dx, ..., L/2-dx."""
        return -0.5 * self.extent + self.spacing * np.arange(self.num_points)

    @property
    def freq_axis(self) -> np.ndarray:
        """Monotone frequency axis, spacing 2*pi/L, containing 0."""
        return np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(self.num_points, d=self.spacing))

    @property
    def freq_spacing(self) -> float:
        return 2.0 * np.pi / self.extent

    @property
    def nyquist(self) -> float:
        """Largest representable |frequency|, pi/dx."""
        return np.pi / self.spacing

    # fft-natural-order frequencies, used internally by multiplier code
    @property
    def freq_natural(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.num_points, d=self.spacing)


@dataclass(frozen=True)
class WaveFunction:
    """Complex samples of an L^2(R) function on a SpectralGrid.

    ``values[k]`` is the sample at ``grid.x[k]`` for space-side functions; the
    Fourier transform routines return objects whose values are indexed by
    ``grid.freq_axis`` instead (same container, frequency-side samples).
    """

    grid: SpectralGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.num_points,):
            raise InvalidInputError(
                f"values length {v.shape} does not match grid ({self.grid.num_points},)"
            )
        if not np.all(np.isfinite(v.view(np.float64))):
            raise InvalidInputError("values contain non-finite entries")
        object.__setattr__(self, "values", v)

    def copy_with(self, values: np.ndarray) -> "WaveFunction":
        return WaveFunction(self.grid, values)


def l2_norm(u: WaveFunction) -> float:
    """Rectangle-rule quadrature of (integral |u|^2 dx)^(1/2)."""
    return float(np.sqrt(np.sum(np.abs(u.values) ** 2) * u.grid.spacing))


def inner_product(u: WaveFunction, v: WaveFunction) -> complex:
    """<u, v> = integral u * conj(v) dx on the shared grid."""
    if u.grid != v.grid:
        raise InvalidInputError("inner product requires a shared grid")
    return complex(np.sum(u.values * np.conj(v.values)) * u.grid.spacing)
