import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_dft
from zeta_spectra.errors import DomainError
from zeta_spectra.recursion import (
    MontgomeryState,
    block_means,
    gamma_from_means,
    geometric_sum_matrix,
    geometric_xi_sum,
    montgomery_error_series,
    montgomery_sequence,
    montgomery_step,
    unity_root_table,
    xi,
    z_recursion_error_series,
    z_recursion_step,
)
from zeta_spectra.spectral import Convention, forward_transform

TWO_PI_E = 2 * math.pi * math.e


def mp_step(g):
    mpmath.mp.dps = 40
    g = mpmath.mpf(g)
    return g + 2 * mpmath.pi / mpmath.log(g / (2 * mpmath.pi))


def test_step_at_2pi_e():
    assert montgomery_step(TWO_PI_E) == pytest.approx(TWO_PI_E + 2 * math.pi, rel=1e-15)


def test_step_first_zero():
    got = montgomery_step(14.134725141)
    assert got == pytest.approx(float(mp_step("14.134725141")), rel=1e-14)
    assert 21.8 < got < 21.9


@pytest.mark.parametrize("gamma", [6.0, 2 * math.pi, 0.0, -3.0])
def test_step_domain(gamma):
    with pytest.raises(DomainError):
        montgomery_step(gamma)


def test_state_domain():
    with pytest.raises(DomainError):
        MontgomeryState(5.0, 1)
    assert MontgomeryState(TWO_PI_E, 1).advance().step_index == 2


def test_sequence_start():
    assert montgomery_sequence(14.5, 1).tolist() == [14.5]
    seq = montgomery_sequence(TWO_PI_E, 3)
    assert seq[0] == TWO_PI_E
    assert seq[1] == pytest.approx(TWO_PI_E + 2 * math.pi, rel=1e-15)
    assert seq[2] == pytest.approx(float(mp_step(mp_step(TWO_PI_E))), rel=1e-14)
    with pytest.raises(ValueError):
        montgomery_sequence(14.5, 0)


def test_sequence_error_trend(zeros):
    means = block_means(montgomery_error_series(zeros).rel_errors, 100)
    assert means.size == 10
    assert np.all(np.diff(means) <= 0)


def test_block_means():
    np.testing.assert_allclose(block_means(np.arange(10.0), 4), [1.5, 5.5])


def test_gamma_from_means_basic():
    assert gamma_from_means(3.0, 3.0, 7) == pytest.approx(3.0)
    assert gamma_from_means(0.0, 1.0, 2) == -1.0
    with pytest.raises(ValueError):
        gamma_from_means(1.0, 1.0, 1)


def test_gamma_from_means_literal_table():
    from zeta_spectra.zeros_io import parse_zero_table

    g = parse_zero_table("14.134725141\n21.022039638\n").values
    assert gamma_from_means(g.mean(), g[0], 2) == pytest.approx(21.022039638, abs=1e-9)


def test_gamma_from_means_recovers_table(zeros):
    means = np.cumsum(zeros.values) / np.arange(1, 1001)
    rec = np.array([gamma_from_means(means[n - 1], means[n - 2], n) for n in range(2, 1001)])
    assert np.abs(rec - zeros.values[1:]).max() < 1e-8


def brute_geometric(k, l, n):
    x = cmath.exp(2j * math.pi * ((k - 1) / n - (l - 1) / (n - 1)))
    return sum(x**j for j in range(n - 1))


def test_xi_unit_modulus():
    for n in (2, 7, 30):
        t = unity_root_table(n)
        np.testing.assert_allclose(np.abs(t.values), 1, atol=1e-12)
        assert t[2, 1] == pytest.approx(xi(2, 1, n))


def test_geometric_trivial_cases():
    assert geometric_xi_sum(1, 1, 9) == 8
    assert geometric_xi_sum(2, 1, 2) == pytest.approx(1)
    assert xi(2, 1, 2) == pytest.approx(-1)


@given(st.integers(2, 32).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n), st.integers(1, n - 1))))
def test_geometric_closed_form(args):
    n, k, l = args
    assert abs(geometric_xi_sum(k, l, n) - brute_geometric(k, l, n)) < 1e-10


@pytest.mark.parametrize("n", [2, 5, 17])
def test_geometric_matrix_matches_scalar(n):
    scalar = np.array([[geometric_xi_sum(k, l, n) for l in range(1, n)] for k in range(1, n + 1)])
    np.testing.assert_allclose(geometric_sum_matrix(n), scalar, rtol=0, atol=1e-10)


@pytest.mark.parametrize("k,l,n", [(0, 1, 4), (5, 1, 4), (1, 4, 4), (1, 1, 1)])
def test_geometric_bad_indices(k, l, n):
    with pytest.raises(ValueError):
        geometric_xi_sum(k, l, n)


def test_step_tiny_instance():
    a, b, c = 14.5, 21.0, 25.0
    z_prev = forward_transform([a, b])
    out = z_recursion_step(z_prev, a, 3, gamma_override=c)
    np.testing.assert_allclose(out.coeffs, brute_dft([a, b, c]), rtol=0, atol=1e-12 * c)


@pytest.mark.parametrize("n", [3, 4, 11, 50, 128])
def test_step_exact_with_override(zeros, n):
    g = zeros.values
    out = z_recursion_step(forward_transform(g[: n - 1]), g[: n - 2].mean(), n, gamma_override=g[n - 1])
    exact = forward_transform(g[:n]).coeffs
    assert np.abs(out.coeffs - exact).max() <= 1e-8 * np.abs(exact).max()


@pytest.mark.parametrize("n", [3, 20, 300])
def test_closed_form_agrees_with_rebuild(zeros, n):
    g = zeros.values
    z_prev = forward_transform(g[: n - 1])
    a = z_recursion_step(z_prev, g[: n - 2].mean(), n)
    b = z_recursion_step(z_prev, g[: n - 2].mean(), n, mode="rebuild")
    assert np.abs(a.coeffs - b.coeffs).max() <= 1e-8 * np.abs(b.coeffs).max()


def test_step_mean_update(zeros):
    g = zeros.values
    n = 400
    z_prev = forward_transform(g[: n - 1])
    z1_prev2 = g[: n - 2].mean()
    out = z_recursion_step(z_prev, z1_prev2, n)
    predicted = montgomery_step(gamma_from_means(z_prev.coeffs[0].real, z1_prev2, n - 1))
    assert out.coeffs[0].real == pytest.approx(((n - 1) * z_prev.coeffs[0].real + predicted) / n, rel=1e-12)
    assert abs(out.coeffs[0].imag) < 1e-9


def test_step_errors():
    z_prev = forward_transform([1.0, 2.0])
    with pytest.raises(DomainError):
        z_recursion_step(z_prev, 1.0, 3)
    with pytest.raises(ValueError):
        z_recursion_step(z_prev, 1.0, 4, gamma_override=5.0)
    with pytest.raises(ValueError):
        z_recursion_step(forward_transform([1.0, 2.0], Convention.UNITARY), 1.0, 3, gamma_override=5.0)
    with pytest.raises(ValueError):
        z_recursion_step(z_prev, 1.0, 3, gamma_override=5.0, mode="fast")


def test_error_series_empty_at_seed(zeros):
    assert len(z_recursion_error_series(zeros, 10, seed=10)) == 0


def test_error_series_override_is_exact(zeros):
    s = z_recursion_error_series(zeros, 60, override_exact=True)
    assert s.indices.tolist() == list(range(11, 61))
    assert s.rel_errors.max() < 1e-8


def test_error_series_first_free_step(zeros):
    # The first free step predicts gamma_11 from the exact gamma_10 only.
    s = z_recursion_error_series(zeros, 11)
    assert s.rel_errors.size == 1 and 0 < s.rel_errors[0] < 0.1


def test_error_series_modes_agree(zeros):
    a = z_recursion_error_series(zeros, 150)
    b = z_recursion_error_series(zeros, 150, mode="rebuild")
    np.testing.assert_allclose(a.rel_errors, b.rel_errors, rtol=1e-6, atol=1e-12)


def test_error_series_trend(zeros):
    s = z_recursion_error_series(zeros, 1000, mode="rebuild")
    means = block_means(s.rel_errors, 99)
    # Errors peak early and then fall off; compare the second block with the last.
    assert means[-1] < means[1]


def test_error_series_bounds(zeros):
    with pytest.raises(ValueError):
        z_recursion_error_series(zeros, 1001)
    with pytest.raises(ValueError):
        z_recursion_error_series(zeros, 5, seed=10)
