"""Synthetic time-domain data: sums of damped 2D complex exponentials.

A mode at angular frequencies ``(w_tau, w_t)`` contributes

    A * exp(-(i w_tau + g_tau) tau) * exp(-(i w_t + g_t) t)

which is the sign convention under which the direct Fourier sum
``sum dt exp(+i w t) h`` puts the peak at ``+w``. The ``rb_preset`` mimics
the two D lines of 87Rb in a rotating frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .grids import SignalGrid2D, TimeGrid

__all__ = [
    "ExponentialMode",
    "NoiseSpec",
    "RB_LINES",
    "DEFAULT_FRAME_FREQUENCY",
    "DEFAULT_DAMPING",
    "PAPER_DELTA_FS",
    "PAPER_N_TAU",
    "PAPER_N_T",
    "PAPER_POPULATION_TIMES",
    "paper_grids",
    "synthesize",
    "rb_preset",
    "rb_signal",
]

# lab-frame D-line transition frequencies, rad/fs
RB_LINES = (2.370, 2.414)
DEFAULT_FRAME_FREQUENCY = 2.340
DEFAULT_DAMPING = 1.0 / 2000.0

# experimental sampling: 51 coherence times x 50 waiting times
PAPER_DELTA_FS = 26.687
PAPER_N_TAU = 51
PAPER_N_T = 50
PAPER_POPULATION_TIMES = (140.0, 175.0, 210.0, 245.0, 280.0)


@dataclass(frozen=True)
class ExponentialMode:
    """One separable damped oscillation (frequencies in rad/fs, rates in 1/fs)."""

    omega_tau: float
    omega_t: float
    amplitude: complex = 1.0
    gamma_tau: float = 0.0
    gamma_t: float = 0.0

    def __post_init__(self):
        if self.gamma_tau < 0 or self.gamma_t < 0:
            raise InvalidArgumentError("damping rates must be nonnegative")
        if not np.isfinite(complex(self.amplitude)):
            raise InvalidArgumentError("amplitude must be finite")


@dataclass(frozen=True)
class NoiseSpec:
    """Circular complex Gaussian noise with ``E|n|^2 = sigma^2`` per sample."""

    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InvalidArgumentError(f"sigma must be >= 0, got {self.sigma}")


def paper_grids(delta=PAPER_DELTA_FS, n_tau=PAPER_N_TAU, n_t=PAPER_N_T):
    """Coherence-time and waiting-time grids of the Rb measurement."""
    return TimeGrid(delta, n_tau), TimeGrid(delta, n_t)


def _check_band(modes, tau_grid, t_grid):
    lim_tau = np.pi / tau_grid.delta
    lim_t = np.pi / t_grid.delta
    for m in modes:
        if not (-lim_tau < m.omega_tau < lim_tau and -lim_t < m.omega_t < lim_t):
            raise InvalidArgumentError(
                f"mode at ({m.omega_tau:.6g}, {m.omega_t:.6g}) rad/fs lies outside the "
                f"sampled band (+/-{lim_tau:.6g}, +/-{lim_t:.6g}) rad/fs"
            )


def synthesize(modes, tau_grid, t_grid, population_time=0.0, noise=None, label="sum",
               metadata=None):
    """Evaluate a sum of separable exponential modes on the 2D delay grid.

    Parameters
    ----------
    modes : sequence of ExponentialMode
    tau_grid, t_grid : TimeGrid
    population_time : float
        Population time T in fs, carried through as metadata.
    noise : NoiseSpec, optional
        Additive noise; the draw depends only on ``noise.seed`` and the
        grid shape.
    label : {"sum", "diff"}

    Returns
    -------
    SignalGrid2D
    """
    modes = list(modes)
    _check_band(modes, tau_grid, t_grid)
    tau = tau_grid.times
    t = t_grid.times
    values = np.zeros((tau_grid.count, t_grid.count), dtype=np.complex128)
    for m in modes:
        along_tau = np.exp(-(1j * m.omega_tau + m.gamma_tau) * tau)
        along_t = np.exp(-(1j * m.omega_t + m.gamma_t) * t)
        values += complex(m.amplitude) * np.outer(along_tau, along_t)
    if noise is not None and noise.sigma > 0:
        # Philox is counter-based: the stream is fixed by the key alone
        rng = np.random.Generator(np.random.Philox(key=noise.seed))
        draws = rng.standard_normal((tau_grid.count, t_grid.count, 2))
        values += (noise.sigma / np.sqrt(2.0)) * (draws[..., 0] + 1j * draws[..., 1])
    return SignalGrid2D(tau_grid, t_grid, float(population_time), values, label,
                        metadata=dict(metadata or {}))


def rb_preset(kind="sum", frame_frequency=DEFAULT_FRAME_FREQUENCY, lines=RB_LINES,
              damping=DEFAULT_DAMPING, amplitudes=None):
    """Four modes at the diagonal and cross peaks of a two-line system.

    Offsets are ``line - frame_frequency``. For ``kind="sum"`` (nonrephasing)
    both axes carry the same offsets; for ``kind="diff"`` (rephasing) the
    coherence-time frequencies are negated.

    Parameters
    ----------
    kind : {"sum", "diff"}
    frame_frequency : float
        Rotating-frame reference in rad/fs.
    lines : (float, float)
        Lab-frame transition frequencies in rad/fs.
    damping : float or (float, float)
        Decay rate(s) in 1/fs applied on the (tau, t) axes.
    amplitudes : sequence of 4 complex, optional
        Per-mode amplitudes in the order (1,1), (1,2), (2,1), (2,2);
        unit amplitudes by default.

    Returns
    -------
    list of ExponentialMode
    """
    if kind not in ("sum", "diff"):
        raise InvalidArgumentError(f"kind must be 'sum' or 'diff', got {kind!r}")
    gamma_tau, gamma_t = np.broadcast_to(np.asarray(damping, dtype=float), (2,))
    offsets = [line - frame_frequency for line in lines]
    if amplitudes is None:
        amplitudes = [1.0] * (len(offsets) ** 2)
    if len(amplitudes) != len(offsets) ** 2:
        raise InvalidArgumentError("need one amplitude per (tau line, t line) pair")
    sign = 1.0 if kind == "sum" else -1.0
    modes = []
    pairs = [(a, b) for a in offsets for b in offsets]
    for (nu_tau, nu_t), amp in zip(pairs, amplitudes):
        modes.append(ExponentialMode(sign * nu_tau, nu_t, complex(amp), float(gamma_tau), float(gamma_t)))
    return modes


def rb_signal(kind="sum", population_time=PAPER_POPULATION_TIMES[0], noise=None,
              frame_frequency=DEFAULT_FRAME_FREQUENCY, tau_grid=None, t_grid=None, **preset_kw):
    """Synthetic Rb surrogate on the experimental 51 x 50 grid (or given grids)."""
    if tau_grid is None or t_grid is None:
        tau_grid, t_grid = paper_grids()
    modes = rb_preset(kind, frame_frequency=frame_frequency, **preset_kw)
    return synthesize(modes, tau_grid, t_grid, population_time, noise, label=kind,
                      metadata={"frame_frequency": frame_frequency})
