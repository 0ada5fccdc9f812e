# %% [markdown]
# # Fourier operators on sparse delay grids
#
# A delay axis with N_t samples spaced by dt is paired with an N_omega point
# frequency axis covering [-pi/dt, pi/dt). The direct Fourier sum maps time
# samples to spectral values; the sensing operator maps spectral
# coefficients back to time samples and is what the BPDN solver inverts.

# %%
import numpy as np

from cs2dspec import FourierOperator, TimeGrid, dft, make_frequency_grid

tg = TimeGrid(26.687, 50)
fg = make_frequency_grid(tg, 1000)
print(tg)
print(f"frequency axis: {fg.count} points from {fg.minimum:.4f} rad/fs, spacing {fg.spacing:.3e}")

# %% [markdown]
# A single damped oscillation at 0.03 rad/fs gives an FT peak whose width
# is set by the short record, about 2 pi / (N_t dt).

# %%
h = np.exp(-(1j * 0.03 + 1 / 2000) * tg.times)
spectrum = dft(h, tg, fg)
peak = int(np.argmax(np.abs(spectrum)))
print(f"FT peak at {fg.frequencies[peak]:.4f} rad/fs")
print(f"record-limited width ~ {2 * np.pi / (tg.count * tg.delta):.4f} rad/fs")

# %% [markdown]
# The normalized operator has unit-modulus entries and is a tight frame:
# F F^H = N_omega I.

# %%
op = FourierOperator(tg, fg, normalized=True)
dense = op.to_dense()
gram = dense @ dense.conj().T
print("tight frame:", np.allclose(gram, fg.count * np.eye(tg.count)))

# adjoint check: <F g, r> == <g, F^H r>
rng = np.random.default_rng(0)
g = rng.standard_normal(fg.count) + 1j * rng.standard_normal(fg.count)
r = rng.standard_normal(tg.count) + 1j * rng.standard_normal(tg.count)
print("adjoint mismatch:", abs(np.vdot(r, op.matvec(g)) - np.vdot(op.rmatvec(r), g)))
