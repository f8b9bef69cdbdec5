"""Discrete Fourier transforms of ordinate sequences.

Two normalizations are supported:

``MEAN_FORWARD``
    z_k = (1/n) sum_j x_j exp(+2 pi i (j-1)(k-1)/n), inverse without a
    prefactor and with a negative exponent. z_1 is the mean of x.
``UNITARY``
    The same exponent signs with 1/sqrt(n) on both directions.

Note the positive exponent in the forward direction. numpy's ``fft`` uses
the opposite sign, so the backend is only called through the adapters in
this module.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Convention",
    "Spectrum",
    "ReconstructionReport",
    "forward_transform",
    "inverse_transform",
    "direct_forward",
    "direct_inverse",
    "check_conjugate_symmetry",
    "midband_window",
    "average_midband_real",
    "reconstruction_report",
]


class Convention(str, enum.Enum):
    MEAN_FORWARD = "mean-forward"
    UNITARY = "unitary"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients z_1..z_n under a tagged convention."""

    coeffs: np.ndarray
    convention: Convention = Convention.MEAN_FORWARD

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        if coeffs.size == 0:
            raise ValueError("a spectrum needs at least one coefficient")
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "convention", Convention(self.convention))

    @property
    def n(self):
        return self.coeffs.size

    def __len__(self):
        return self.coeffs.size

    def z(self, k):
        """Coefficient z_k with the 1-based index used throughout."""
        if not 1 <= k <= self.n:
            raise IndexError(f"index {k} outside 1..{self.n}")
        return complex(self.coeffs[k - 1])

    def conj(self):
        return Spectrum(self.coeffs.conj(), self.convention)


@dataclass(frozen=True)
class ReconstructionReport:
    reconstructed: np.ndarray
    reference: np.ndarray
    abs_diff: np.ndarray
    max_imag_residue: float

    @property
    def max_abs_diff(self):
        return float(self.abs_diff.max())


def _as_real_sequence(x):
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size == 0:
        raise ValueError("cannot transform an empty sequence")
    return x


# The only two places numpy.fft is touched. ifft carries the +i exponent and
# fft the -i exponent, which is exactly the pairing needed here.
def _fft_pos(x, norm):
    return np.fft.ifft(x, norm=norm)


def _fft_neg(z, norm):
    return np.fft.fft(z, norm=norm)


def forward_transform(gamma, convention=Convention.MEAN_FORWARD):
    """Forward transform of a real sequence, O(n log n)."""
    x = _as_real_sequence(gamma)
    convention = Convention(convention)
    if convention is Convention.MEAN_FORWARD:
        # ifft's "backward" norm is the 1/n prefactor on the +i direction.
        coeffs = _fft_pos(x, "backward")
    else:
        coeffs = _fft_pos(x, "ortho")
    return Spectrum(coeffs, convention)


def inverse_transform(spectrum):
    """Invert :func:`forward_transform`.

    Returns
    -------
    values : ndarray
        Real parts of the reconstructed sequence.
    max_imag_residue : float
        Largest discarded imaginary part.
    """
    if spectrum.convention is Convention.MEAN_FORWARD:
        full = _fft_neg(spectrum.coeffs, "backward")
    else:
        full = _fft_neg(spectrum.coeffs, "ortho")
    return full.real.copy(), float(np.abs(full.imag).max())


def _phase_matrix(n, sign):
    # Reduce (j-1)(k-1) modulo n in exact integer arithmetic before scaling,
    # so the oracle keeps full phase accuracy at large index products.
    idx = np.arange(n)
    prod = np.outer(idx, idx) % n
    return np.exp(sign * 2j * np.pi * prod / n)


def direct_forward(x, convention=Convention.MEAN_FORWARD):
    """O(n^2) summation of the forward transform, used as an oracle."""
    x = np.asarray(x, dtype=np.complex128).reshape(-1)
    n = x.size
    scale = 1.0 / n if Convention(convention) is Convention.MEAN_FORWARD else 1.0 / np.sqrt(n)
    return scale * (_phase_matrix(n, +1) @ x)


def direct_inverse(z, convention=Convention.MEAN_FORWARD):
    """O(n^2) summation of the inverse transform, used as an oracle."""
    z = np.asarray(z, dtype=np.complex128).reshape(-1)
    n = z.size
    scale = 1.0 if Convention(convention) is Convention.MEAN_FORWARD else 1.0 / np.sqrt(n)
    return scale * (_phase_matrix(n, -1) @ z)


def check_conjugate_symmetry(spectrum):
    """Return max over j = 2..n of |z_j - conj(z_{n+2-j})|.

    With 1-based indices the mirror of z_j for a real input is z_{n+2-j};
    z_1 pairs with itself and is excluded.
    """
    z = spectrum.coeffs
    if z.size < 2:
        raise ValueError("conjugate symmetry needs n >= 2")
    tail = z[1:]
    return float(np.abs(tail - np.conj(tail[::-1])).max())


def midband_window(n, fraction):
    """1-based indices of the centered window used by :func:`average_midband_real`.

    The window is symmetric about (n+2)/2, the axis of conjugate symmetry.
    A symmetric window has odd size for even n and even size for odd n, so
    round(fraction*n) is reduced by one when its parity does not fit.
    """
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    size = int(round(fraction * n))
    if size < 1:
        raise ValueError(f"fraction {fraction} selects no coefficient for n={n}")
    if size >= n:
        raise ValueError(
            f"a window of {size} coefficients would include z_1 for n={n}; "
            "use a smaller fraction"
        )
    if size % 2 == n % 2:
        size -= 1
    first = (n + 3 - size) // 2
    return np.arange(first, first + size)


def average_midband_real(spectrum, fraction=0.8):
    """Replace the real parts inside the centered window by their mean.

    Imaginary parts are untouched. Because the window and the replacement
    value are both symmetric, a conjugate-symmetric input stays so.
    """
    if spectrum.convention is not Convention.MEAN_FORWARD:
        raise ValueError("midband averaging is defined for the mean-forward convention")
    window = midband_window(spectrum.n, fraction) - 1
    coeffs = spectrum.coeffs.copy()
    if window.size:
        mean = coeffs.real[window].mean()
        coeffs[window] = mean + 1j * coeffs.imag[window]
    return Spectrum(coeffs, spectrum.convention)


def reconstruction_report(spectrum, reference):
    reference = np.asarray(reference, dtype=np.float64)
    if reference.size != spectrum.n:
        raise ValueError(f"reference has {reference.size} values, spectrum has {spectrum.n}")
    values, residue = inverse_transform(spectrum)
    return ReconstructionReport(
        reconstructed=values,
        reference=reference.copy(),
        abs_diff=np.abs(values - reference),
        max_imag_residue=residue,
    )
