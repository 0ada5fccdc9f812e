"""Sampling axes and the 2D containers built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "TimeGrid",
    "FrequencyGrid",
    "SignalGrid2D",
    "Spectrum2D",
    "HalfTransformed2D",
    "make_frequency_grid",
    "as_series",
]


def as_series(values, length=None, name="series"):
    """Return ``values`` as a finite 1D complex128 array.

    Raises InvalidArgumentError on wrong dimensionality, wrong length or
    non-finite entries.
    """
    arr = np.asarray(values, dtype=np.complex128)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if length is not None and arr.shape[0] != length:
        raise InvalidArgumentError(f"{name} has length {arr.shape[0]}, expected {length}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr


def _as_matrix(values, shape, name):
    arr = np.asarray(values, dtype=np.complex128)
    if arr.shape != shape:
        raise InvalidArgumentError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TimeGrid:
    """Uniform delay axis with samples at ``delta * (origin_index + j)``.

    Parameters
    ----------
    delta : float
        Sampling step in fs.
    count : int
        Number of samples.
    origin_index : int
        Index of the first sample, so that the first time is
        ``delta * origin_index``.
    """

    delta: float
    count: int
    origin_index: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise InvalidArgumentError(f"delta must be positive and finite, got {self.delta}")
        if int(self.count) != self.count or self.count < 1:
            raise InvalidArgumentError(f"count must be a positive integer, got {self.count}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "count", int(self.count))
        object.__setattr__(self, "origin_index", int(self.origin_index))

    @property
    def times(self):
        return self.delta * (self.origin_index + np.arange(self.count, dtype=np.float64))


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency axis ``minimum + j * spacing`` in rad/fs.

    The grid is fully described by ``(minimum, spacing, count)``; the
    frequencies and the upper end are derived from those three numbers so
    a grid written to disk and read back is bit-identical.
    """

    minimum: float
    spacing: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 2:
            raise InvalidArgumentError(f"frequency grid needs count >= 2, got {self.count}")
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise InvalidArgumentError(f"spacing must be positive and finite, got {self.spacing}")
        if not np.isfinite(self.minimum):
            raise InvalidArgumentError("minimum must be finite")
        object.__setattr__(self, "minimum", float(self.minimum))
        object.__setattr__(self, "spacing", float(self.spacing))
        object.__setattr__(self, "count", int(self.count))

    @property
    def maximum(self):
        return self.minimum + (self.count - 1) * self.spacing

    @property
    def frequencies(self):
        return self.minimum + np.arange(self.count, dtype=np.float64) * self.spacing

    def nearest_index(self, omega):
        """Index of the grid point closest to ``omega`` (clipped to the grid)."""
        idx = int(np.rint((omega - self.minimum) / self.spacing))
        return min(max(idx, 0), self.count - 1)


def make_frequency_grid(time_grid, n_omega, inclusive=False):
    """Build the ``n_omega``-point frequency axis spanning the Nyquist band of ``time_grid``.

    The band starts at ``-pi/delta``. By default the upper end is excluded
    (spacing ``2 pi / (delta n_omega)``, the usual DFT bin layout); with
    ``inclusive=True`` the last point is exactly ``+pi/delta``.
    """
    if int(n_omega) != n_omega or n_omega < 2:
        raise InvalidArgumentError(f"n_omega must be an integer >= 2, got {n_omega}")
    n_omega = int(n_omega)
    half_band = np.pi / time_grid.delta
    if inclusive:
        spacing = 2.0 * half_band / (n_omega - 1)
    else:
        spacing = 2.0 * half_band / n_omega
    return FrequencyGrid(minimum=-half_band, spacing=spacing, count=n_omega)


@dataclass(frozen=True)
class SignalGrid2D:
    """Time-domain data S(tau, T, t) at one population time.

    ``values[i, k]`` is the sample at coherence time ``tau_grid.times[i]``
    and waiting time ``t_grid.times[k]``.
    """

    tau_grid: TimeGrid
    t_grid: TimeGrid
    population_time: float
    values: np.ndarray = field(repr=False)
    label: str = "sum"
    metadata: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        shape = (self.tau_grid.count, self.t_grid.count)
        object.__setattr__(self, "values", _as_matrix(self.values, shape, "signal values"))
        if self.label not in ("sum", "diff"):
            raise InvalidArgumentError(f"label must be 'sum' or 'diff', got {self.label!r}")


@dataclass(frozen=True)
class HalfTransformed2D:
    """Output of the first pass: S(tau, T, omega_t)."""

    tau_grid: TimeGrid
    omega_t_grid: FrequencyGrid
    population_time: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        shape = (self.tau_grid.count, self.omega_t_grid.count)
        object.__setattr__(self, "values", _as_matrix(self.values, shape, "half-transform values"))


@dataclass(frozen=True)
class Spectrum2D:
    """Frequency-domain data S(omega_tau, T, omega_t).

    ``provenance`` is ``"ft"`` or ``"cs"``.
    """

    omega_tau_grid: FrequencyGrid
    omega_t_grid: FrequencyGrid
    population_time: float
    values: np.ndarray = field(repr=False)
    provenance: str = "ft"
    metadata: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        shape = (self.omega_tau_grid.count, self.omega_t_grid.count)
        object.__setattr__(self, "values", _as_matrix(self.values, shape, "spectrum values"))
        if self.provenance not in ("ft", "cs"):
            raise InvalidArgumentError(f"provenance must be 'ft' or 'cs', got {self.provenance!r}")
