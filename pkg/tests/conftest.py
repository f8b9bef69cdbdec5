import cmath
import math

import numpy as np
import pytest

from zeta_spectra.spectral import Spectrum
from zeta_spectra.zeros_io import reference_zeros


@pytest.fixture(scope="session")
def zeros10k():
    return reference_zeros()


@pytest.fixture(scope="session")
def zeros(zeros10k):
    return zeros10k.head(1000)


def brute_dft(x, sign=+1, scale=None):
    """Pure-Python double loop: sum_j x_j exp(sign 2 pi i (j-1)(k-1)/n)."""
    n = len(x)
    scale = 1.0 / n if scale is None else scale
    return [
        scale * sum(x[j] * cmath.exp(sign * 2j * math.pi * j * k / n) for j in range(n))
        for k in range(n)
    ]


def planted_spectrum(seed, n=1000, brk=300, noise=5.0):
    """Smooth parabola-like real parts with rough noise from index ``brk`` on.

    The noise is first-differenced Gaussian noise, i.e. concentrated at high
    frequencies. The layout is conjugate symmetric like a real sequence's
    spectrum.
    """
    rng = np.random.default_rng(seed)
    j = np.arange(1, n + 1)
    dist = np.minimum(j - 1, n + 1 - j)
    re = 10.0 - 50.0 * (dist / n) ** 2
    im = np.sin(np.pi * dist / n) * np.sign(n + 2 - 2 * j)
    rough = np.diff(rng.normal(0.0, noise, n + 1))
    band = (j >= brk) & (j <= n + 2 - brk)
    re = re + np.where(band, rough, 0.0)
    return Spectrum(re + 1j * im)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {text}")
