"""Montgomery's spacing recursion and the recursive update of Fourier coefficients.

The update builds the length-n spectrum from the length-(n-1) one:

    n z_k^(n) = sum_l z_l^(n-1) S(k, l) + g_n exp(-2 pi i (k-1)/n)

with S(k, l) = 1 + xi + ... + xi^(n-2) and
xi = exp(2 pi i ((k-1)/n - (l-1)/(n-1))). Apart from the choice of g_n
this is an exact identity; g_n is either Montgomery's prediction from the
two previous means or a caller-supplied value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectral import Convention, Spectrum, forward_transform, inverse_transform

__all__ = [
    "MontgomeryState",
    "RecursionErrorSeries",
    "UnityRootTable",
    "montgomery_step",
    "montgomery_sequence",
    "montgomery_error_series",
    "block_means",
    "gamma_from_means",
    "xi",
    "unity_root_table",
    "geometric_xi_sum",
    "geometric_sum_matrix",
    "z_recursion_step",
    "z_recursion_error_series",
    "DEFAULT_SEED",
]

TWO_PI = 2.0 * math.pi
XI_UNITY_THRESHOLD = 1e-9
ERROR_FLOOR = 1e-12
DEFAULT_SEED = 10


@dataclass(frozen=True)
class MontgomeryState:
    current_gamma: float
    step_index: int

    def __post_init__(self):
        if not self.current_gamma > TWO_PI:
            raise DomainError(f"gamma={self.current_gamma!r} must exceed 2*pi")

    def advance(self):
        return MontgomeryState(montgomery_step(self.current_gamma), self.step_index + 1)


@dataclass(frozen=True)
class RecursionErrorSeries:
    indices: np.ndarray
    rel_errors: np.ndarray

    def __post_init__(self):
        if len(self.indices) != len(self.rel_errors):
            raise ValueError("indices and rel_errors differ in length")

    def __len__(self):
        return len(self.indices)


def montgomery_step(gamma_n):
    """gamma_{n+1} = gamma_n + 2 pi / log(gamma_n / 2 pi)."""
    gamma_n = float(gamma_n)
    if not gamma_n > TWO_PI:
        # log(gamma/2pi) <= 0: the step is negative or undefined.
        raise DomainError(f"Montgomery step undefined for gamma={gamma_n!r} <= 2*pi")
    return gamma_n + TWO_PI / math.log(gamma_n / TWO_PI)


def montgomery_sequence(gamma_1, count):
    """``count`` values starting at ``gamma_1`` itself."""
    if count < 1:
        raise ValueError("count must be at least 1")
    state = MontgomeryState(float(gamma_1), 1)
    out = [state.current_gamma]
    for _ in range(count - 1):
        state = state.advance()
        out.append(state.current_gamma)
    return np.array(out)


def montgomery_error_series(table, count=None):
    """Relative error of :func:`montgomery_sequence` seeded at gamma_1."""
    exact = table.values if count is None else table.values[:count]
    approx = montgomery_sequence(exact[0], exact.size)
    return RecursionErrorSeries(
        indices=np.arange(1, exact.size + 1),
        rel_errors=np.abs(approx - exact) / np.abs(exact),
    )


def block_means(values, block=100):
    """Means over consecutive blocks [0, block), [block, 2 block), ...; a short tail is dropped."""
    values = np.asarray(values, dtype=np.float64)
    nblocks = values.size // block
    return values[: nblocks * block].reshape(nblocks, block).mean(axis=1)


def gamma_from_means(z1_n, z1_prev, n):
    """Recover gamma_n = n z_1^(n) - (n-1) z_1^(n-1) from consecutive means."""
    if n < 2:
        raise ValueError("gamma_from_means needs n >= 2")
    return n * z1_n - (n - 1) * z1_prev


def _check_indices(k, l, n):
    if n < 2 or not (1 <= k <= n) or not (1 <= l <= n - 1):
        raise ValueError(f"need 1 <= k <= n, 1 <= l <= n-1, n >= 2; got k={k}, l={l}, n={n}")


def _xi_numerator(k, l, n):
    # xi_{k,l} = exp(2 pi i num / (n (n-1))); keeping num integer avoids cancellation.
    return (k - 1) * (n - 1) - (l - 1) * n


def xi(k, l, n):
    _check_indices(k, l, n)
    num = _xi_numerator(k, l, n) % (n * (n - 1))
    return complex(np.exp(2j * np.pi * num / (n * (n - 1))))


@dataclass(frozen=True)
class UnityRootTable:
    """All xi_{k,l} for one n as an (n, n-1) array indexed [k-1, l-1]."""

    n: int
    values: np.ndarray

    def __getitem__(self, kl):
        k, l = kl
        _check_indices(k, l, self.n)
        return complex(self.values[k - 1, l - 1])


def unity_root_table(n):
    if n < 2:
        raise ValueError("n must be at least 2")
    k = np.arange(n)[:, None]
    l = np.arange(n - 1)[None, :]
    num = (k * (n - 1) - l * n) % (n * (n - 1))
    return UnityRootTable(n, np.exp(2j * np.pi * num / (n * (n - 1))))


def geometric_xi_sum(k, l, n):
    """1 + xi + ... + xi^(n-2) for xi = xi_{k,l}, in closed form."""
    _check_indices(k, l, n)
    x = xi(k, l, n)
    if abs(x - 1) <= XI_UNITY_THRESHOLD:
        return complex(n - 1)
    # xi^(n-1) = exp(2 pi i num / n) reduces exactly.
    num = _xi_numerator(k, l, n) % n
    power = complex(np.exp(2j * np.pi * num / n))
    return (power - 1) / (x - 1)


def geometric_sum_matrix(n):
    """Array S[k-1, l-1] of :func:`geometric_xi_sum` for all k, l."""
    if n < 2:
        raise ValueError("n must be at least 2")
    # xi_{k,l} factors as exp(2 pi i (k-1)/n) * exp(-2 pi i (l-1)/(n-1)), so the
    # table is an outer product of two phase vectors rather than n^2 exponentials.
    row = np.exp(2j * np.pi * np.arange(n) / n)
    col = np.exp(-2j * np.pi * np.arange(n - 1) / (n - 1))
    # xi^(n-1) depends on k only: exp(2 pi i (k-1)(n-1)/n) = exp(-2 pi i (k-1)/n).
    power = np.conj(row)[:, None]
    denom = np.multiply.outer(row, col) - 1
    near = np.abs(denom) <= XI_UNITY_THRESHOLD
    denom[near] = 1
    out = (power - 1) / denom
    out[near] = n - 1
    return out


def _predicted_gamma(z1_prev, z1_prev2, n):
    gamma_prev = gamma_from_means(z1_prev, z1_prev2, n - 1)
    if not gamma_prev > TWO_PI:
        raise DomainError(
            f"predicted gamma_{n - 1}={gamma_prev!r} from the means is not above 2*pi"
        )
    return montgomery_step(gamma_prev)


def z_recursion_step(z_prev, z1_prev2, n, gamma_override=None, mode="closed-form"):
    """Advance a mean-forward spectrum of length n-1 to length n.

    Parameters
    ----------
    z_prev : Spectrum
        z^(n-1), mean-forward convention.
    z1_prev2 : float
        The mean z_1^(n-2) of the first n-2 values.
    n : int
        Target length, n >= 3.
    gamma_override : float, optional
        Use this value for gamma_n instead of Montgomery's prediction.
        With the true gamma_n the step reproduces the exact transform.
    mode : {"closed-form", "rebuild"}
        ``"closed-form"`` evaluates the geometric-sum formula in O(n^2).
        ``"rebuild"`` inverts z_prev, appends gamma_n and re-transforms,
        which is O(n log n) and serves as a cross-check.
    """
    if z_prev.convention is not Convention.MEAN_FORWARD:
        raise ValueError("the recursion is defined for the mean-forward convention")
    if n < 3:
        raise ValueError("the recursion needs n >= 3")
    if z_prev.n != n - 1:
        raise ValueError(f"z_prev has length {z_prev.n}, expected {n - 1}")

    if gamma_override is None:
        gamma_n = _predicted_gamma(z_prev.coeffs[0].real, float(z1_prev2), n)
    else:
        gamma_n = float(gamma_override)

    if mode == "rebuild":
        previous, _ = inverse_transform(z_prev)
        return forward_transform(np.append(previous, gamma_n))
    if mode != "closed-form":
        raise ValueError(f"unknown mode {mode!r}")

    sums = geometric_sum_matrix(n)
    tail = gamma_n * np.exp(-2j * np.pi * np.arange(n) / n)
    return Spectrum((sums @ z_prev.coeffs + tail) / n)


def _median_rel_error(approx, exact):
    scale = np.maximum(np.abs(exact), ERROR_FLOOR)
    return float(np.median(np.abs(approx - exact) / scale))


def z_recursion_error_series(table, n_max, seed=DEFAULT_SEED, override_exact=False,
                             mode="closed-form", return_final=False):
    """Run the coefficient recursion from exact seed spectra up to ``n_max``.

    The recursion is seeded with the exact z^(seed) and z_1^(seed-1) and
    then runs on its own output. The error at each n is the median over k
    of |z_k_approx - z_k| / max(|z_k|, 1e-12).

    With ``return_final=True`` the last approximate spectrum is returned as
    well (the seed spectrum when nothing is iterated).
    """
    if seed < 2:
        raise ValueError("seed must be at least 2")
    if n_max > table.count:
        raise ValueError(f"n_max={n_max} exceeds the table size {table.count}")
    if n_max < seed:
        raise ValueError(f"n_max={n_max} is below the seed size {seed}")
    gamma = table.values
    current = forward_transform(gamma[:seed])
    z1_prev2 = float(np.mean(gamma[: seed - 1]))
    indices, errors = [], []
    for n in range(seed + 1, n_max + 1):
        override = gamma[n - 1] if override_exact else None
        nxt = z_recursion_step(current, z1_prev2, n, gamma_override=override, mode=mode)
        exact = forward_transform(gamma[:n])
        indices.append(n)
        errors.append(_median_rel_error(nxt.coeffs, exact.coeffs))
        z1_prev2 = current.coeffs[0].real
        current = nxt
    series = RecursionErrorSeries(np.array(indices, dtype=int), np.array(errors, dtype=float))
    if return_final:
        return series, current
    return series
