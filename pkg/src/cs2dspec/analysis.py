"""Peak picking and width comparison between FT and CS spectra.

Widths are full widths at half maximum of the complex modulus, measured
along each frequency axis through the peak bin with linear interpolation
between bins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .grids import Spectrum2D

__all__ = [
    "Peak",
    "MatchedPeak",
    "ResolutionComparison",
    "WIDTH_METRIC",
    "find_peaks",
    "measure_fwhm",
    "compare_resolution",
]

WIDTH_METRIC = "axis-aligned half-max of |S|, linear interpolation"

DEFAULT_THRESHOLD = 0.05
DEFAULT_MATCHING_BINS = 3


@dataclass(frozen=True)
class Peak:
    """A local maximum of ``|S(omega_tau, omega_t)|``.

    Positions and widths are in rad/fs. ``index`` is the bin
    ``(i_tau, i_t)``. Widths narrower than one bin are reported as one
    bin and flagged ``single_bin_*``; widths cut off by the grid edge are
    flagged ``truncated_*``.
    """

    omega_tau: float
    omega_t: float
    magnitude: float
    fwhm_tau: float
    fwhm_t: float
    index: tuple = (0, 0)
    single_bin_tau: bool = False
    single_bin_t: bool = False
    truncated_tau: bool = False
    truncated_t: bool = False


@dataclass(frozen=True)
class MatchedPeak:
    ft: Peak
    cs: Peak
    ratio_tau: float
    ratio_t: float


@dataclass(frozen=True)
class ResolutionComparison:
    """One-to-one pairing of FT peaks with CS peaks.

    ``ratio_*`` of each pair is ``fwhm_ft / fwhm_cs``; values above one
    mean the CS peak is narrower.
    """

    pairs: tuple
    unmatched_ft: tuple
    unmatched_cs: tuple
    matching_radius: float
    ft_peaks: tuple = field(default=(), repr=False)
    cs_peaks: tuple = field(default=(), repr=False)

    @property
    def min_ratio(self):
        """Smallest per-axis ratio over all pairs (nan when nothing matched)."""
        if not self.pairs:
            return float("nan")
        return min(min(p.ratio_tau, p.ratio_t) for p in self.pairs)


def _half_width(profile, center, half):
    """Interpolated distance in bins from ``center`` to the half-max crossing.

    Walks toward increasing index. Returns ``(distance, truncated)``.
    """
    n = profile.size
    j = center + 1
    while j < n and profile[j] > half:
        j += 1
    if j == n:
        return float(n - 1 - center), True
    upper, lower = profile[j - 1], profile[j]
    return (j - 1 - center) + (upper - half) / (upper - lower), False


def _axis_fwhm(profile, center, spacing):
    half = 0.5 * profile[center]
    right, trunc_r = _half_width(profile, center, half)
    left, trunc_l = _half_width(profile[::-1], profile.size - 1 - center, half)
    bins = float(left + right)
    return max(bins, 1.0) * spacing, bins <= 1.0, bool(trunc_l or trunc_r)


def measure_fwhm(spectrum, peak, detail=False):
    """Full widths at half maximum through ``peak`` along both axes.

    Parameters
    ----------
    spectrum : Spectrum2D
    peak : Peak or tuple of int
        A peak, or a bin ``(i_tau, i_t)``.
    detail : bool
        Also return the ``(single_bin_tau, single_bin_t, truncated_tau,
        truncated_t)`` flags.

    Returns
    -------
    tuple
        ``(fwhm_tau, fwhm_t)`` in rad/fs, followed by the flags when
        ``detail`` is set.

    Examples
    --------
    A triangle profile ``(0, 1/2, 1, 1/2, 0)`` has width two bins.
    """
    i, k = peak.index if isinstance(peak, Peak) else peak
    mag = np.abs(spectrum.values)
    if mag[i, k] <= 0:
        raise InvalidArgumentError(f"bin {(i, k)} has zero magnitude")
    w_tau, single_tau, trunc_tau = _axis_fwhm(mag[:, k], i, spectrum.omega_tau_grid.spacing)
    w_t, single_t, trunc_t = _axis_fwhm(mag[i, :], k, spectrum.omega_t_grid.spacing)
    if detail:
        return w_tau, w_t, single_tau, single_t, trunc_tau, trunc_t
    return w_tau, w_t


def _strict_local_maxima(mag):
    padded = np.pad(mag, 1, constant_values=-np.inf)
    core = padded[1:-1, 1:-1]
    is_max = np.ones(mag.shape, dtype=bool)
    n0, n1 = mag.shape
    for di in (-1, 0, 1):
        for dk in (-1, 0, 1):
            if di == 0 and dk == 0:
                continue
            is_max &= core > padded[1 + di:1 + di + n0, 1 + dk:1 + dk + n1]
    return is_max


def find_peaks(spectrum, threshold_fraction=DEFAULT_THRESHOLD):
    """Strict local maxima of ``|S|`` above a fraction of the global maximum.

    A bin is a peak when its modulus exceeds every one of its (up to
    eight) neighbours and ``threshold_fraction * max|S|``.

    Returns
    -------
    list of Peak
        Sorted by descending magnitude, ties by ``(omega_tau, omega_t)``.
        Empty for an all-zero spectrum.
    """
    if not 0.0 < threshold_fraction < 1.0:
        raise InvalidArgumentError(f"threshold_fraction must lie in (0, 1), got {threshold_fraction}")
    mag = np.abs(spectrum.values)
    top = mag.max(initial=0.0)
    if top == 0.0:
        return []
    candidates = np.argwhere(_strict_local_maxima(mag) & (mag > threshold_fraction * top))
    w_tau = spectrum.omega_tau_grid.frequencies
    w_t = spectrum.omega_t_grid.frequencies
    peaks = []
    for i, k in candidates:
        i, k = int(i), int(k)
        fw_tau, fw_t, s_tau, s_t, t_tau, t_t = measure_fwhm(spectrum, (i, k), detail=True)
        peaks.append(Peak(
            omega_tau=float(w_tau[i]), omega_t=float(w_t[k]), magnitude=float(mag[i, k]),
            fwhm_tau=fw_tau, fwhm_t=fw_t, index=(i, k),
            single_bin_tau=s_tau, single_bin_t=s_t, truncated_tau=t_tau, truncated_t=t_t,
        ))
    peaks.sort(key=lambda p: (-p.magnitude, p.omega_tau, p.omega_t))
    return peaks


def _same_grid(a, b):
    return (a.minimum, a.spacing, a.count) == (b.minimum, b.spacing, b.count)


def compare_resolution(ft, cs, matching_radius=None, threshold_fraction=DEFAULT_THRESHOLD):
    """Pair FT peaks with CS peaks and report per-axis width ratios.

    FT peaks are visited by descending magnitude; each takes the nearest
    still-unpaired CS peak within ``matching_radius`` (Euclidean distance
    in rad/fs). The default radius is three bins of the coarser axis.

    Returns
    -------
    ResolutionComparison
    """
    if not (_same_grid(ft.omega_tau_grid, cs.omega_tau_grid)
            and _same_grid(ft.omega_t_grid, cs.omega_t_grid)):
        raise InvalidArgumentError("FT and CS spectra must share their frequency grids")
    if matching_radius is None:
        matching_radius = DEFAULT_MATCHING_BINS * max(ft.omega_tau_grid.spacing, ft.omega_t_grid.spacing)
    if not matching_radius > 0:
        raise InvalidArgumentError(f"matching_radius must be positive, got {matching_radius}")

    ft_peaks = find_peaks(ft, threshold_fraction)
    cs_peaks = find_peaks(cs, threshold_fraction)
    free = list(range(len(cs_peaks)))
    pairs = []
    unmatched_ft = []
    for p in ft_peaks:
        best, best_d = None, None
        for j in free:
            q = cs_peaks[j]
            d = np.hypot(p.omega_tau - q.omega_tau, p.omega_t - q.omega_t)
            if d <= matching_radius and (best_d is None or d < best_d):
                best, best_d = j, d
        if best is None:
            unmatched_ft.append(p)
            continue
        free.remove(best)
        q = cs_peaks[best]
        pairs.append(MatchedPeak(p, q, p.fwhm_tau / q.fwhm_tau, p.fwhm_t / q.fwhm_t))
    return ResolutionComparison(
        pairs=tuple(pairs),
        unmatched_ft=tuple(unmatched_ft),
        unmatched_cs=tuple(cs_peaks[j] for j in free),
        matching_radius=float(matching_radius),
        ft_peaks=tuple(ft_peaks),
        cs_peaks=tuple(cs_peaks),
    )
