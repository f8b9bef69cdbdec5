"""The circulant matrix of a spectrum and the finite-rank operator built on it.

For a mean-forward spectrum z of a real sequence gamma the matrix
M[k, l] = z_{1 + (k - l) mod n} is Hermitian and circulant. Its normalized
eigenvectors are the Fourier polygons v_j and v_j^* M v_j = gamma_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import HermiticityError, NumericContractError
from .spectral import Convention, Spectrum, inverse_transform

__all__ = [
    "CirculantOperator",
    "FourierPolygon",
    "OperatorApplication",
    "SpectrumVerification",
    "build_circulant",
    "eigenvalue_via_polygon",
    "eigenvalues",
    "rayleigh_quotient",
    "verify_spectrum",
    "apply_block",
    "apply_T",
]

HERMITICITY_RTOL = 1e-9
EIGEN_IMAG_RTOL = 1e-8
DENSE_LIMIT = 512
DENSE_CHECK_LIMIT = 128


@dataclass(frozen=True, eq=False)
class CirculantOperator:
    """Circulant matrix stored by its first column c_m = z_{1+m}."""

    first_column: np.ndarray

    def __post_init__(self):
        col = np.array(self.first_column, dtype=np.complex128).reshape(-1)
        if col.size == 0:
            raise ValueError("empty first column")
        col.flags.writeable = False
        object.__setattr__(self, "first_column", col)

    @property
    def n(self):
        return self.first_column.size

    @property
    def hermiticity_defect(self):
        c = self.first_column
        mirror = c[(-np.arange(self.n)) % self.n]
        return float(np.abs(c - np.conj(mirror)).max())

    def entry(self, k, l):
        """M[k, l] with 1-based indices."""
        return complex(self.first_column[(k - l) % self.n])

    def matvec(self, x):
        """M x in O(n log n) by cyclic convolution."""
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.n,):
            raise ValueError(f"expected a vector of length {self.n}, got shape {x.shape}")
        return np.fft.ifft(np.fft.fft(self.first_column) * np.fft.fft(x))

    def to_dense(self):
        if self.n > DENSE_LIMIT:
            raise ValueError(f"refusing to materialize a {self.n}x{self.n} circulant")
        idx = np.arange(self.n)
        return self.first_column[(idx[:, None] - idx[None, :]) % self.n]


@dataclass(frozen=True)
class FourierPolygon:
    """v_k = exp(2 pi i (k-1)(j-1)/n) / sqrt(n), k = 1..n."""

    j: int
    n: int

    def __post_init__(self):
        if not 1 <= self.j <= self.n:
            raise ValueError(f"polygon index j={self.j} outside 1..{self.n}")

    def vector(self):
        k = np.arange(self.n)
        return np.exp(2j * np.pi * ((k * (self.j - 1)) % self.n) / self.n) / np.sqrt(self.n)


@dataclass(frozen=True, eq=False)
class OperatorApplication:
    input_coeffs: np.ndarray
    output_coeffs: np.ndarray
    n: int


@dataclass(frozen=True, eq=False)
class SpectrumVerification:
    """Polygon eigenvalues compared with the ordinates they should reproduce."""

    lambdas: np.ndarray
    gammas: np.ndarray
    abs_diff: np.ndarray
    max_deviation: float
    dense_max_deviation: float | None = None


def build_circulant(spectrum):
    """Circulant of a mean-forward spectrum; raises if it is not Hermitian."""
    if spectrum.convention is not Convention.MEAN_FORWARD:
        raise ValueError("the circulant is defined for mean-forward spectra")
    op = CirculantOperator(spectrum.coeffs)
    scale = float(np.abs(op.first_column).max())
    if op.hermiticity_defect > HERMITICITY_RTOL * scale:
        raise HermiticityError(
            f"circulant defect {op.hermiticity_defect:.3e} exceeds "
            f"{HERMITICITY_RTOL:g} * max|z| = {HERMITICITY_RTOL * scale:.3e}; "
            "the spectrum does not come from a real sequence"
        )
    return op


def eigenvalue_via_polygon(op, j):
    """lambda_j = v_j^* M v_j = sum_k z_k exp(-2 pi i (k-1)(j-1)/n), in O(n)."""
    n = op.n
    if not 1 <= j <= n:
        raise ValueError(f"eigenvalue index j={j} outside 1..{n}")
    k = np.arange(n)
    phase = np.exp(-2j * np.pi * ((k * (j - 1)) % n) / n)
    lam = complex(np.sum(op.first_column * phase))
    if abs(lam.imag) > EIGEN_IMAG_RTOL * max(abs(lam), 1.0):
        raise NumericContractError(
            f"eigenvalue {j} has imaginary part {lam.imag:.3e}; the circulant is not Hermitian"
        )
    return lam.real


def eigenvalues(op):
    """All polygon eigenvalues at once through the inverse transform."""
    values, _ = inverse_transform(Spectrum(op.first_column))
    return values


def rayleigh_quotient(op, v):
    v = np.asarray(v, dtype=np.complex128)
    return complex(np.vdot(v, op.matvec(v)) / np.vdot(v, v))


def verify_spectrum(op, table):
    """Compare polygon eigenvalues with the first n ordinates of ``table``.

    For n <= 128 the sorted eigenvalues of the dense matrix from a general
    Hermitian eigensolver are compared as well.
    """
    n = op.n
    if table.count < n:
        raise ValueError(f"table holds {table.count} ordinates, operator needs {n}")
    gammas = np.asarray(table.values[:n])
    lambdas = np.array([eigenvalue_via_polygon(op, j) for j in range(1, n + 1)])
    diff = np.abs(lambdas - gammas)
    dense = None
    if n <= DENSE_CHECK_LIMIT:
        dense_eigs = scipy.linalg.eigvalsh(op.to_dense())
        dense = float(np.abs(np.sort(dense_eigs) - np.sort(lambdas)).max())
    return SpectrumVerification(lambdas, gammas, diff, float(diff.max()), dense)


def apply_block(op, coeffs):
    """A x = lift(M_n proj_n(x)): the circulant on the first n coordinates, zero after."""
    x = np.asarray(coeffs, dtype=np.complex128).reshape(-1)
    if x.size < op.n:
        raise ValueError(f"input has {x.size} coefficients, operator rank is {op.n}")
    out = np.zeros_like(x)
    out[: op.n] = op.matvec(x[: op.n])
    return out


def apply_T(op, input_coeffs):
    """T_n x = x/2 + i A x, whose eigenvalues on the block are 1/2 + i gamma_j."""
    x = np.asarray(input_coeffs, dtype=np.complex128).reshape(-1)
    out = 0.5 * x + 1j * apply_block(op, x)
    return OperatorApplication(x.copy(), out, op.n)
