"""Fourier kernels: the direct DFT sum and the inverse-Fourier sensing operator.

Two kernels appear here with opposite signs:

* the analysis sum ``g_k = sum_j dt * exp(+i w_k t_j) * h_j`` (``dft``), and
* the sensing map ``h_k = c * sum_j exp(-i w_j t_k) * g_j`` from spectral
  coefficients back to time samples (``apply_sensing``), with prefactor
  ``c = (2/pi) * dw`` unless the normalized form is requested.

Both are evaluated by direct summation; the grids involved are small and
generally not FFT-compatible.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .grids import FrequencyGrid, TimeGrid, as_series

__all__ = [
    "FourierOperator",
    "sensing_prefactor",
    "dft",
    "apply_sensing",
    "apply_adjoint",
    "dft_matrix",
]


def sensing_prefactor(freq_grid):
    """Return ``(2/pi) * dw`` for the sensing matrix on ``freq_grid``."""
    return 2.0 / np.pi * freq_grid.spacing


@lru_cache(maxsize=16)
def _phase_kernel(time_grid: TimeGrid, freq_grid: FrequencyGrid):
    # exp(-i w_j t_k), rows indexed by time, columns by frequency
    kernel = np.exp(-1j * np.outer(time_grid.times, freq_grid.frequencies))
    kernel.flags.writeable = False
    return kernel


@lru_cache(maxsize=16)
def _adjoint_kernel(time_grid: TimeGrid, freq_grid: FrequencyGrid):
    adjoint = np.ascontiguousarray(_phase_kernel(time_grid, freq_grid).conj().T)
    adjoint.flags.writeable = False
    return adjoint


class FourierOperator:
    """Sensing matrix mapping N_omega spectral coefficients to N_t time samples.

    ``matvec`` evaluates ``F g`` and ``rmatvec`` the conjugate transpose
    ``F^H r``. With ``normalized=True`` the ``(2/pi) dw`` prefactor is
    omitted so every entry has unit modulus.

    The dense kernel is built once per pair of grids and shared between
    operators; at N_t x N_omega = 50 x 1000 it is under a megabyte.
    """

    def __init__(self, time_grid, freq_grid, normalized=True):
        self.time_grid = time_grid
        self.freq_grid = freq_grid
        self.normalized = bool(normalized)
        self.prefactor = sensing_prefactor(freq_grid)
        self.shape = (time_grid.count, freq_grid.count)
        self._scale = 1.0 if self.normalized else self.prefactor
        self._lipschitz = None

    def __repr__(self):
        return (f"FourierOperator(shape={self.shape}, normalized={self.normalized}, "
                f"dt={self.time_grid.delta}, dw={self.freq_grid.spacing:.6g})")

    @property
    def kernel(self):
        return _phase_kernel(self.time_grid, self.freq_grid)

    def as_normalized(self):
        if self.normalized:
            return self
        return FourierOperator(self.time_grid, self.freq_grid, normalized=True)

    def to_dense(self):
        """Materialize the operator as an ``(N_t, N_omega)`` complex array."""
        return self._scale * np.array(self.kernel)

    def columns(self, index):
        """Dense ``(N_t, len(index))`` block of the operator's columns."""
        return self._scale * self.kernel[:, index]

    def matvec(self, g):
        out = self.kernel @ g
        if self._scale != 1.0:
            out *= self._scale
        return out

    def rmatvec(self, r):
        out = _adjoint_kernel(self.time_grid, self.freq_grid) @ r
        if self._scale != 1.0:
            out *= self._scale
        return out

    @property
    def lipschitz(self):
        """Squared spectral norm of the operator, the gradient's Lipschitz constant."""
        if self._lipschitz is None:
            self._lipschitz = float(np.linalg.norm(self.to_dense(), 2) ** 2)
        return self._lipschitz


def dft(h, time_grid, freq_grid):
    """Direct discrete Fourier sum ``g_k = sum_j dt exp(+i w_k t_j) h_j``.

    Parameters
    ----------
    h : array_like
        Time samples, length ``time_grid.count``.
    time_grid : TimeGrid
    freq_grid : FrequencyGrid

    Returns
    -------
    ndarray
        Complex spectrum of length ``freq_grid.count``.
    """
    h = as_series(h, time_grid.count, "h")
    return time_grid.delta * (_adjoint_kernel(time_grid, freq_grid) @ h)


def dft_matrix(time_grid, freq_grid):
    """Dense ``(N_omega, N_t)`` matrix of the direct Fourier sum."""
    return time_grid.delta * _adjoint_kernel(time_grid, freq_grid)


def apply_sensing(g, time_grid, freq_grid, normalized=True):
    """Map spectral coefficients ``g`` to time samples, ``F g``."""
    g = as_series(g, freq_grid.count, "g")
    return FourierOperator(time_grid, freq_grid, normalized).matvec(g)


def apply_adjoint(r, time_grid, freq_grid, normalized=True):
    """Conjugate-transpose map ``F^H r`` from time samples to frequencies."""
    r = as_series(r, time_grid.count, "r")
    return FourierOperator(time_grid, freq_grid, normalized).rmatvec(r)
