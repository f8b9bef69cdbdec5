"""Locating the coefficient cloud and fitting its value distributions.

The cloud index is found by sliding a window of width 2d+1 over Re z_j and
scoring each window's smoothness from the magnitudes of its own Fourier
coefficients: low frequencies count positively, high ones negatively. The
first negative score marks the start of the cloud.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.stats

from .errors import FitError, NoCloudFound
from .spectral import Convention, forward_transform

__all__ = [
    "CloudPartition",
    "ImagFitReport",
    "RealFitReport",
    "smoothness_score",
    "default_window",
    "find_cloud_index",
    "cluster_slice",
    "ansatz_cdf",
    "fit_imag_samples",
    "fit_imag_cdf",
    "fit_normal_samples",
    "fit_real_normal",
]

ANSATZ_SLOPE = 0.2
MIN_SLICE = 10
CDF_GRID = 1001
SLOPE_WINDOW = 0.1


@dataclass(frozen=True, eq=False)
class CloudPartition:
    m: int
    n: int
    window_width: int
    stride: int
    scanned: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        if not 2 <= self.m <= self.n / 2:
            raise ValueError(f"cloud index {self.m} outside 2..{self.n // 2}")


@dataclass(frozen=True, eq=False)
class ImagFitReport:
    p: float
    integral: float
    grid: np.ndarray
    empirical_cdf: np.ndarray
    max_cdf_gap: float
    slope_near_zero: float
    samples: int

    def ansatz(self, x):
        return ansatz_cdf(x, self.p)


@dataclass(frozen=True, eq=False)
class RealFitReport:
    standardized: np.ndarray
    ks_distance: float
    mean: float
    std: float


def smoothness_score(window_values):
    """Signed spectral-roughness score of one window.

    The window is shifted to mean 0 and scaled so max |value| = 1, then
    transformed with the unitary convention. For a real window the
    magnitudes of bins k and w+2-k coincide, so only the distinct
    frequencies k = 2 .. floor(w/2)+1 are kept. The lower half of those
    gets weight +1, the upper half -1 (a middle bin gets 0); the score is
    the weighted mean. All-equal windows score +inf.
    """
    x = np.asarray(window_values, dtype=np.float64).reshape(-1)
    w = x.size
    if w < 4:
        raise ValueError(f"window length {w} < 4")
    x = x - x.mean()
    peak = np.abs(x).max()
    if peak == 0 or not np.isfinite(peak):
        return math.inf
    x = x / peak
    mags = np.abs(forward_transform(x, Convention.UNITARY).coeffs[1 : w // 2 + 1])
    count = mags.size
    weights = np.zeros(count)
    half = count // 2
    weights[:half] = 1.0
    weights[count - half :] = -1.0
    return float(np.dot(weights, mags) / count)


def default_window(n):
    return max(16, n // 100)


def find_cloud_index(spectrum, d=None, stride=1):
    """Scan windows centred at j = 2+d, 2+d+stride, ... <= n/2 over Re z.

    Every scanned position is scored; ``m`` is the first with a negative
    score. Raises :class:`NoCloudFound` if there is none.
    """
    if spectrum.convention is not Convention.MEAN_FORWARD:
        raise ValueError("cloud detection expects a mean-forward spectrum")
    n = spectrum.n
    d = default_window(n) if d is None else int(d)
    if d < 2:
        raise ValueError("window half-width d must be at least 2")
    if stride < 1:
        raise ValueError("stride must be positive")
    if not 2 * d + 1 < n / 2:
        raise ValueError(f"window 2d+1={2 * d + 1} is not below n/2={n / 2}")
    real = spectrum.coeffs.real
    centres = np.arange(2 + d, n // 2 + 1, stride)
    scores = np.array([smoothness_score(real[j - d - 1 : j + d]) for j in centres])
    negative = np.flatnonzero(scores < 0)
    if negative.size == 0:
        raise NoCloudFound(f"no negative smoothness score for j <= {n // 2} (d={d})")
    m = int(centres[negative[0]])
    return CloudPartition(m, n, d, stride, centres, scores)


def cluster_slice(spectrum, start, stop=None):
    """z_start .. z_stop (1-based, inclusive); ``stop`` defaults to floor(n/2)."""
    stop = spectrum.n // 2 if stop is None else stop
    if not 1 <= start <= stop <= spectrum.n:
        raise ValueError(f"invalid slice {start}..{stop} for n={spectrum.n}")
    return spectrum.coeffs[start - 1 : stop]


def ansatz_cdf(x, p):
    """f(x) = 0.2 x + 0.8 x^p."""
    x = np.asarray(x, dtype=np.float64)
    return ANSATZ_SLOPE * x + (1 - ANSATZ_SLOPE) * x**p


def fit_imag_samples(samples):
    """Fit the ansatz CDF to samples rescaled affinely onto [0, 1].

    p matches the integrals: int_0^1 f = 0.1 + 0.8/(p+1) equals the integral
    of the empirical CDF, which for samples on [0, 1] is 1 - mean.
    """
    u = np.asarray(samples, dtype=np.float64).reshape(-1)
    if u.size < MIN_SLICE:
        raise FitError(f"need at least {MIN_SLICE} samples, got {u.size}")
    lo, hi = u.min(), u.max()
    if hi == lo:
        raise FitError("all samples are equal; cannot rescale to [0, 1]")
    u = np.sort((u - lo) / (hi - lo))
    integral = 1.0 - u.mean()
    low = ANSATZ_SLOPE / 2
    high = 1 - ANSATZ_SLOPE / 2
    if not low < integral < high:
        raise FitError(f"empirical CDF integral {integral:.4f} outside ({low}, {high})")
    p = (1 - ANSATZ_SLOPE) / (integral - low) - 1

    count = u.size
    f_at = ansatz_cdf(u, p)
    upper = np.arange(1, count + 1) / count
    gap = float(max(np.abs(f_at - upper).max(), np.abs(f_at - (upper - 1 / count)).max()))

    grid = np.linspace(0.0, 1.0, CDF_GRID)
    ecdf = np.searchsorted(u, grid, side="right") / count
    slope = float(np.searchsorted(u, SLOPE_WINDOW, side="right") / count / SLOPE_WINDOW)
    return ImagFitReport(p, float(integral), grid, ecdf, gap, slope, count)


def fit_imag_cdf(spectrum, partition):
    """Fit the ansatz to Im z_j for j in [m, floor(n/2)]."""
    return fit_imag_samples(cluster_slice(spectrum, partition.m).imag)


def fit_normal_samples(samples):
    x = np.asarray(samples, dtype=np.float64).reshape(-1)
    if x.size < MIN_SLICE:
        raise FitError(f"need at least {MIN_SLICE} samples, got {x.size}")
    mean = x.mean()
    std = x.std()
    if std == 0:
        raise FitError("zero variance; cannot standardize")
    z = (x - mean) / std
    ks = scipy.stats.kstest(z, "norm").statistic
    return RealFitReport(z, float(ks), float(mean), float(std))


def fit_real_normal(spectrum, partition):
    """Standardize Re z_j on the cluster slice and measure its KS distance to N(0, 1)."""
    return fit_normal_samples(cluster_slice(spectrum, partition.m).real)
