"""Compressed-sensing reconstruction of 2D Fourier-transform spectra.

A 2D spectrum is built from a sparse time-domain grid by solving one
basis-pursuit-denoise problem per row along each delay axis, instead of
taking a discrete Fourier transform.
"""

__version__ = "0.1.0"

from .analysis import Peak, ResolutionComparison, compare_resolution, find_peaks, measure_fwhm
from .bpdn import (
    BpdnConfig,
    BpdnResult,
    BpdnStatus,
    project_l1_ball,
    solve_bpdn,
    solve_bpdn_normalized,
    solve_lasso,
)
from .errors import InvalidArgumentError, NumericalFailure, ParseError, PipelineError
from .fourier import FourierOperator, apply_adjoint, apply_sensing, dft, sensing_prefactor
from .grids import (
    FrequencyGrid,
    HalfTransformed2D,
    SignalGrid2D,
    Spectrum2D,
    TimeGrid,
    make_frequency_grid,
)
from .io import read_peaks, read_signal_grid, read_spectrum, write_peaks, write_signal_grid, write_spectrum
from .pipeline import cs2d, cs2d_batch, cs_pass_t, cs_pass_tau, ft2d
from .synth import ExponentialMode, NoiseSpec, rb_preset, rb_signal, synthesize

__all__ = [
    "__version__",
    "BpdnConfig", "BpdnResult", "BpdnStatus", "project_l1_ball", "solve_bpdn",
    "solve_bpdn_normalized", "solve_lasso",
    "FourierOperator", "apply_adjoint", "apply_sensing", "dft", "sensing_prefactor",
    "FrequencyGrid", "HalfTransformed2D", "SignalGrid2D", "Spectrum2D", "TimeGrid",
    "make_frequency_grid",
    "cs2d", "cs2d_batch", "cs_pass_t", "cs_pass_tau", "ft2d",
    "ExponentialMode", "NoiseSpec", "rb_preset", "rb_signal", "synthesize",
    "Peak", "ResolutionComparison", "compare_resolution", "find_peaks", "measure_fwhm",
    "read_peaks", "read_signal_grid", "read_spectrum", "write_peaks", "write_signal_grid",
    "write_spectrum",
    "InvalidArgumentError", "NumericalFailure", "ParseError", "PipelineError",
]
