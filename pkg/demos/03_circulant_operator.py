# %% [markdown]
# # The circulant matrix of the spectrum
#
# M[k, l] = z_{1 + (k - l) mod n} is Hermitian and circulant. Its
# eigenvectors are the Fourier polygons, and v_j^* M v_j = gamma_j.

# %%
import numpy as np
import scipy.linalg

from zeta_spectra import FourierPolygon, apply_T, build_circulant, forward_transform, reference_zeros
from zeta_spectra.circulant import verify_spectrum

zeros = reference_zeros(limit=64)
op = build_circulant(forward_transform(zeros.values))
print("Hermiticity defect:", op.hermiticity_defect)

check = verify_spectrum(op, zeros)
print("max |lambda_j - gamma_j| =", check.max_deviation)
print("dense eigensolver vs polygons:", check.dense_max_deviation)
print("first dense eigenvalues:", scipy.linalg.eigvalsh(op.to_dense())[:4])

# %% [markdown]
# The finite-rank operator T x = x/2 + i A x, with A the circulant acting on
# the first n coordinates, has eigenvalues 1/2 + i gamma_j on the block and
# 1/2 on everything beyond it.

# %%
x = np.zeros(70, complex)
x[:64] = FourierPolygon(5, 64).vector()
out = apply_T(op, x).output_coeffs
ratio = out[:64] / x[:64]
print("eigenvalue on v_5:", ratio[0], " expected 0.5 +", zeros.values[4], "i")
