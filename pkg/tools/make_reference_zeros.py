"""Regenerate the bundled reference table of zeta zero ordinates.

Usage: python tools/make_reference_zeros.py [COUNT] [OUT]

Output format matches Odlyzko's ``zeros1`` table: one ordinate per line,
nine decimals. Uses mpmath's double-precision zero finder, spot-checked
against the multiprecision one.
"""
import sys

import mpmath

count = int(sys.argv[1]) if len(sys.argv) > 1 else 10000
out = sys.argv[2] if len(sys.argv) > 2 else "src/zeta_spectra/data/zeros_10000.txt"

with open(out, "w") as fh:
    for n in range(1, count + 1):
        gamma = mpmath.fp.zetazero(n).imag
        if n % 1000 == 0:
            exact = float(mpmath.zetazero(n).imag)
            assert abs(gamma - exact) < 1e-9, (n, gamma, exact)
        fh.write(f"{gamma:.9f}\n")
