# %% [markdown]
# # The coefficient cloud
#
# Mid-band coefficients (j near n/2) have rough real parts. A sliding
# window scores how smooth Re z is; the first negative score starts the
# cloud. Inside it, Im z rescaled to [0, 1] follows f(x) = 0.2x + 0.8x^p
# and the standardized Re z looks normal.

# %%
from zeta_spectra import find_cloud_index, fit_imag_cdf, fit_real_normal, forward_transform, reference_zeros

table = reference_zeros()
for n in (1000, 10000):
    spectrum = forward_transform(table.values[:n])
    part = find_cloud_index(spectrum)
    imag = fit_imag_cdf(spectrum, part)
    real = fit_real_normal(spectrum, part)
    print(f"n={n:6d}  d={part.window_width:3d}  m={part.m:5d}  p={imag.p:.3f}  "
          f"sup gap={imag.max_cdf_gap:.3f}  slope near 0={imag.slope_near_zero:.2f}  "
          f"KS(real)={real.ks_distance:.3f}")

# %% [markdown]
# Larger n pushes more of the imaginary parts towards the real axis
# (normalized value 1), which shows up as a larger exponent p.
