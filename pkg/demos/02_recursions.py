# %% [markdown]
# # Montgomery's recursion and the recursive coefficient update
#
# gamma_{n+1} = gamma_n + 2 pi / log(gamma_n / 2 pi), started at gamma_1.

# %%
import numpy as np

from zeta_spectra import forward_transform, reference_zeros, z_recursion_step
from zeta_spectra.recursion import block_means, montgomery_error_series, z_recursion_error_series

zeros = reference_zeros(limit=1000)
errors = montgomery_error_series(zeros)
print("relative error, means over blocks of 100:")
print(np.array2string(block_means(errors.rel_errors), precision=5))

# %% [markdown]
# The Fourier coefficients of n zeros follow from those of n-1 zeros plus
# gamma_n. Fed with the true gamma_n the update is exact:

# %%
g = zeros.values
n = 150
step = z_recursion_step(forward_transform(g[: n - 1]), g[: n - 2].mean(), n, gamma_override=g[n - 1])
exact = forward_transform(g[:n]).coeffs
print("exact-mode deviation:", np.abs(step.coeffs - exact).max())

# %% [markdown]
# Run freely from a seed of 10 exact zeros, the update substitutes
# Montgomery's prediction for gamma_n at every step.

# %%
series, final = z_recursion_error_series(zeros, 1000, return_final=True)
for idx in (11, 50, 100, 250, 500, 1000):
    print(f"n={idx:5d}  median rel. error={series.rel_errors[idx - 11]:.5f}")
