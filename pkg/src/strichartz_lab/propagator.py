"""The fractional flow exp(it|D|^alpha) and the derivative |D|^s as multipliers.

Both operators are diagonal in frequency:

    flow(t):  uhat(xi) -> exp(-i t |xi|^alpha) uhat(xi)
    |D|^s:    uhat(xi) -> |xi|^s uhat(xi),  with |0|^s := 0 for every s.

No time stepping is involved; each time slice of an evolution is computed
directly from the initial datum, so there is no error accumulation and the
group law holds to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidAlphaError, InvalidInputError, SingularAtZeroError
from .fourier import spectrum_natural, wavefunction_from_spectrum
from .grids import SpectralGrid, WaveFunction

__all__ = [
    "SpaceTimeField",
    "fractional_flow",
    "fractional_derivative",
    "evolve_window",
]

# relative spectral amplitude below which the zero-frequency band is
# considered empty (precondition for negative-order derivatives)
_ZERO_BAND_TOL = 1e-12


def _check_alpha(alpha: float) -> None:
    if not (alpha > 1 and np.isfinite(alpha)):
        raise InvalidAlphaError(f"alpha must exceed 1, got {alpha}")


def _abs_pow(xi: np.ndarray, s: float) -> np.ndarray:
    """|xi|^s with the zero mode mapped to 0 for every s != 0 (identity at s = 0)."""
    if s == 0.0:
        return np.ones_like(xi)
    out = np.zeros_like(xi)
    nz = xi != 0.0
    out[nz] = np.abs(xi[nz]) ** s
    return out


@dataclass(frozen=True)
class SpaceTimeField:
    """Samples of (t, x) -> [|D|^s exp(it|D|^alpha) u](x) on a time*space grid.

    Every slice is the multiplier image of the single datum recorded in
    ``provenance`` (alpha, weight order s, and a free-form label).
    """

    time_axis: np.ndarray
    grid: SpectralGrid
    values: np.ndarray = field(repr=False)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.time_axis, dtype=float)
        v = np.asarray(self.values, dtype=np.complex128)
        if t.ndim != 1 or len(t) < 1:
            raise InvalidInputError("time_axis must be a nonempty 1-D array")
        if len(t) > 1:
            dt = np.diff(t)
            if not np.allclose(dt, dt[0], rtol=1e-9, atol=1e-12 * max(1.0, abs(t[-1]))):
                raise InvalidInputError("time_axis must be uniform")
        if v.shape != (len(t), self.grid.num_points):
            raise InvalidInputError(f"values shape {v.shape} != (time, space)")
        object.__setattr__(self, "time_axis", t)
        object.__setattr__(self, "values", v)

    @property
    def dt(self) -> float:
        return float(self.time_axis[1] - self.time_axis[0]) if len(self.time_axis) > 1 else 0.0


def fractional_flow(u: WaveFunction, t: float, alpha: float) -> WaveFunction:
    """Apply exp(it|D|^alpha), i.e. multiply the spectrum by exp(-i t |xi|^alpha)."""
    _check_alpha(alpha)
    xi = u.grid.freq_natural
    uhat = spectrum_natural(u)
    return wavefunction_from_spectrum(u.grid, np.exp(-1j * t * _abs_pow(xi, alpha)) * uhat)


def fractional_derivative(u: WaveFunction, s: float) -> WaveFunction:
    """Apply |D|^s.  For s < 0 the datum must be spectrally empty near 0."""
    xi = u.grid.freq_natural
    uhat = spectrum_natural(u)
    if s < 0:
        _require_zero_band_empty(uhat, xi, u.grid)
    return wavefunction_from_spectrum(u.grid, _abs_pow(xi, s) * uhat)


def _require_zero_band_empty(uhat_nat: np.ndarray, xi: np.ndarray, grid: SpectralGrid) -> None:
    peak = np.max(np.abs(uhat_nat))
    if peak == 0.0:
        return
    band = np.abs(xi) <= 4.0 * grid.freq_spacing
    if np.max(np.abs(uhat_nat[band])) > _ZERO_BAND_TOL * peak:
        raise SingularAtZeroError(
            "negative-order derivative requires |uhat| < 1e-12 near xi = 0"
        )


def evolve_window(
    u: WaveFunction,
    alpha: float,
    s: float,
    time_axis: np.ndarray,
    label: str = "",
) -> SpaceTimeField:
    """Field whose slice k is |D|^s exp(i t_k |D|^alpha) u.

    All slices are computed from the one datum by frequency multipliers; the
    slices are independent of each other, so callers may split the axis and
    evaluate in parallel without changing the result.
    """
    _check_alpha(alpha)
    t = np.asarray(time_axis, dtype=float)
    xi = u.grid.freq_natural
    uhat = spectrum_natural(u)
    if s < 0:
        _require_zero_band_empty(uhat, xi, u.grid)
    weighted = _abs_pow(xi, s) * uhat
    phases = np.exp(-1j * np.outer(t, _abs_pow(xi, alpha)))
    x0 = -0.5 * u.grid.extent
    carrier = np.exp(1j * x0 * xi) / u.grid.spacing
    vals = np.fft.ifft(phases * (carrier * weighted)[None, :], axis=1)
    return SpaceTimeField(
        t, u.grid, vals, provenance={"alpha": alpha, "s": s, "label": label}
    )
