import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import planted_spectrum
from zeta_spectra.cluster import (
    ansatz_cdf,
    cluster_slice,
    default_window,
    find_cloud_index,
    fit_imag_cdf,
    fit_imag_samples,
    fit_normal_samples,
    fit_real_normal,
    smoothness_score,
)
from zeta_spectra.errors import FitError, NoCloudFound
from zeta_spectra.spectral import Convention, Spectrum, forward_transform

# First-build values for the first 1000 bundled zeros with d=16, stride=1.
GOLDEN_M_1000 = 125
GOLDEN_P_1000 = 2.385284296739123
GOLDEN_KS_1000 = 0.0357393173273447


def test_slow_cosine_is_smooth():
    w = 33
    assert smoothness_score(np.cos(2 * np.pi * np.arange(w) / w)) > 0


def test_alternating_is_rough():
    assert smoothness_score((-1.0) ** np.arange(33)) < 0
    assert smoothness_score((-1.0) ** np.arange(32)) < 0


def test_flat_window_is_infinitely_smooth():
    assert smoothness_score(np.full(9, 3.0)) == math.inf


def test_short_window_rejected():
    with pytest.raises(ValueError):
        smoothness_score([1.0, 2.0, 3.0])


def test_white_noise_scores_straddle_zero():
    rng = np.random.default_rng(2024)
    scores = np.array([smoothness_score(rng.normal(size=33)) for _ in range(2000)])
    assert abs(np.median(scores)) < 0.02
    assert 0.3 < np.mean(scores < 0) < 0.7


window = arrays(np.float64, 33, elements=st.floats(-100, 100, allow_nan=False)).filter(
    lambda x: np.ptp(x) > 1e-3
)


@given(window, st.floats(-50, 50).filter(lambda a: abs(a) > 1e-3), st.floats(-1e3, 1e3))
def test_affine_invariance(x, a, b):
    assert smoothness_score(a * x + b) == pytest.approx(smoothness_score(x), abs=1e-10)


def test_default_window():
    assert default_window(1000) == 16
    assert default_window(10000) == 100


@pytest.mark.parametrize("seed", range(10))
def test_planted_changepoint(seed):
    part = find_cloud_index(planted_spectrum(seed), d=16, stride=1)
    assert 300 - 16 <= part.m <= 300 + 16
    assert part.scores[part.scanned.tolist().index(part.m)] < 0
    assert np.all(part.scores[part.scanned < part.m] >= 0)


def test_smooth_sequence_has_no_cloud():
    with pytest.raises(NoCloudFound):
        find_cloud_index(forward_transform(np.arange(1, 1001.0) ** 2), d=16)


def test_find_cloud_validation(zeros):
    s = forward_transform(zeros.values)
    with pytest.raises(ValueError):
        find_cloud_index(s, d=300)
    with pytest.raises(ValueError):
        find_cloud_index(s, d=16, stride=0)
    with pytest.raises(ValueError):
        find_cloud_index(forward_transform(zeros.values, Convention.UNITARY), d=16)


def test_cloud_index_of_zeros_golden(zeros):
    s = forward_transform(zeros.values)
    part = find_cloud_index(s, d=16, stride=1)
    assert part.m == GOLDEN_M_1000
    assert find_cloud_index(s, d=16, stride=1).m == part.m
    assert find_cloud_index(s.conj(), d=16, stride=1).m == part.m
    assert part.scanned[0] == 18 and part.scanned[-1] == 500


def test_stride_subsamples_scan(zeros):
    s = forward_transform(zeros.values)
    full = find_cloud_index(s, d=16, stride=1)
    coarse = find_cloud_index(s, d=16, stride=4)
    np.testing.assert_array_equal(coarse.scores, full.scores[::4])
    assert coarse.m >= full.m


def test_ansatz_boundary_properties():
    for p in (0.5, 1.0, 2.4, 7.0):
        assert ansatz_cdf(0.0, p) == 0
        assert ansatz_cdf(1.0, p) == pytest.approx(1.0)
        if p > 1:
            h = 1e-7
            assert ansatz_cdf(h, p) / h == pytest.approx(0.2, rel=1e-4)


def test_uniform_fit_gives_p_one():
    u = np.random.default_rng(7).uniform(size=10_000)
    rep = fit_imag_samples(u)
    assert 0.95 <= rep.p <= 1.05
    assert rep.max_cdf_gap < 0.03
    assert rep.integral == pytest.approx(0.5, abs=0.01)


def test_uniform_grid_fit_is_exact():
    u = np.linspace(0, 1, 100_001)
    assert fit_imag_samples(u).p == pytest.approx(1.0, abs=1e-9)


def test_mass_near_one_gives_large_p():
    u = 1 - np.random.default_rng(8).uniform(size=5000) ** 6
    rep = fit_imag_samples(u)
    assert rep.integral < 0.2
    assert rep.p > 5


def test_manual_p_formula():
    u = np.random.default_rng(9).beta(3, 1, size=2000)
    rep = fit_imag_samples(u)
    scaled = (u - u.min()) / np.ptp(u)
    assert rep.p == pytest.approx(0.8 / ((1 - scaled.mean()) - 0.1) - 1, rel=1e-12)
    # the integral-matching condition holds for the fitted ansatz
    x = np.linspace(0, 1, 200_001)
    assert np.trapezoid(rep.ansatz(x), x) == pytest.approx(rep.integral, abs=1e-8)


def test_sup_gap_is_exact():
    u = np.array([0.0, 0.25, 0.5, 0.75, 1.0] * 3)
    rep = fit_imag_samples(u)
    dense = np.linspace(0, 1, 100_001)
    ecdf = np.searchsorted(np.sort(u), dense, side="right") / u.size
    assert rep.max_cdf_gap >= np.abs(rep.ansatz(dense) - ecdf).max() - 1e-12


def test_imag_fit_errors():
    with pytest.raises(FitError):
        fit_imag_samples(np.ones(20))
    with pytest.raises(FitError):
        fit_imag_samples(np.arange(5.0))
    with pytest.raises(FitError):
        # all mass at 1 except the minimum: integral just above 0
        fit_imag_samples(np.r_[0.0, np.ones(200)])


def test_imag_fit_zeros_golden(zeros10k):
    out = {}
    for n in (1000, 10000):
        s = forward_transform(zeros10k.values[:n])
        part = find_cloud_index(s)
        rep = fit_imag_cdf(s, part)
        assert rep.samples == n // 2 - part.m + 1
        out[n] = rep.p
    assert out[1000] == pytest.approx(GOLDEN_P_1000, rel=1e-12)
    assert out[10000] > out[1000]


def test_normal_fit_simulation():
    rep = fit_normal_samples(np.random.default_rng(11).normal(3.0, 2.0, size=10_000))
    assert rep.ks_distance < 0.02
    assert abs(rep.standardized.mean()) < 1e-9
    assert abs(rep.standardized.var() - 1) < 1e-9


def test_normal_fit_detects_non_normal():
    assert fit_normal_samples(np.random.default_rng(2).uniform(size=10_000)).ks_distance > 0.05


def test_normal_fit_errors():
    with pytest.raises(FitError):
        fit_normal_samples(np.full(30, 2.0))
    with pytest.raises(FitError):
        fit_normal_samples(np.arange(3.0))


def test_real_fit_zeros_golden(zeros):
    s = forward_transform(zeros.values)
    rep = fit_real_normal(s, find_cloud_index(s, d=16))
    assert abs(rep.standardized.mean()) < 1e-9
    assert abs(rep.standardized.var() - 1) < 1e-9
    assert rep.ks_distance == pytest.approx(GOLDEN_KS_1000, rel=1e-9)


def test_cluster_slice_bounds():
    s = Spectrum(np.arange(10.0))
    np.testing.assert_array_equal(cluster_slice(s, 3).real, [2, 3, 4])
    with pytest.raises(ValueError):
        cluster_slice(s, 6)
