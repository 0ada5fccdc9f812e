"""Independent reference implementations used by the tests.

Deliberately naive: explicit loops over samples, sorting instead of the
library's fixed-point threshold search, bisection instead of interpolation.
"""

import cmath
import math

import numpy as np


def naive_dft(h, times, freqs, delta):
    out = []
    for w in freqs:
        acc = 0j
        for tj, hj in zip(times, h):
            acc += delta * cmath.exp(1j * w * tj) * hj
        out.append(acc)
    return np.array(out)


def naive_sensing_matrix(times, freqs, prefactor=1.0):
    rows = []
    for tk in times:
        rows.append([prefactor * cmath.exp(-1j * w * tk) for w in freqs])
    return np.array(rows, dtype=complex)


def naive_matvec(matrix, x):
    return np.array([sum(a * b for a, b in zip(row, x)) for row in matrix.tolist()])


def sort_threshold_projection(v, radius):
    """l1-ball projection by sorting moduli and scanning for the threshold."""
    v = np.asarray(v, dtype=complex)
    mod = np.abs(v)
    if mod.sum() <= radius:
        return v.copy()
    if radius == 0:
        return np.zeros_like(v)
    u = sorted(mod.tolist(), reverse=True)
    cumulative = 0.0
    lam = 0.0
    for k, uk in enumerate(u, start=1):
        cumulative += uk
        candidate = (cumulative - radius) / k
        # the largest modulus always sets a candidate, even when rounding ties it
        if k == 1 or uk - candidate > 0:
            lam = candidate
    out = np.zeros_like(v)
    for j in range(v.size):
        if mod[j] > lam:
            out[j] = v[j] / mod[j] * (mod[j] - lam)
    return out


def dirichlet_fwhm(n, delta):
    """Full width at half maximum of |sum_{j<n} exp(i w delta j)| by bisection."""
    def ratio(w):
        return abs(math.sin(n * w * delta / 2) / (n * math.sin(w * delta / 2)))

    lo, hi = 1e-12, 2 * math.pi / (n * delta)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ratio(mid) > 0.5:
            lo = mid
        else:
            hi = mid
    return 2 * lo


def closed_form_signal(modes, tau, t):
    """Per-sample evaluation of the exponential-mode sum, mode loop innermost."""
    out = np.zeros((len(tau), len(t)), dtype=complex)
    for i, ta in enumerate(tau):
        for k, tb in enumerate(t):
            acc = 0j
            for m in modes:
                acc += m.amplitude * cmath.exp(-(1j * m.omega_tau + m.gamma_tau) * ta
                                               - (1j * m.omega_t + m.gamma_t) * tb)
            out[i, k] = acc
    return out
