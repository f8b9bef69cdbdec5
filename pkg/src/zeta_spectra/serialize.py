"""CSV and JSON emission with deterministic formatting.

Floats are written with ``repr`` so values round-trip exactly and two runs
on identical input produce identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .spectral import Convention, Spectrum

__all__ = [
    "format_value",
    "write_csv",
    "read_csv",
    "write_json",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "file_digest",
]


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, columns, rows, comments=()):
    """Write ``rows`` under a header; each of ``comments`` becomes a ``#`` line."""
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    path = Path(path)
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def read_csv(path):
    """Return ``(comments, columns, rows)``; rows are lists of strings."""
    comments, body = [], []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line:
            body.append(line)
    reader = csv.reader(body)
    columns = next(reader)
    return comments, columns, list(reader)


def write_json(path, obj):
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_spectrum_csv(path, spectrum, comments=(), polar=False):
    """Columns ``index,re,im`` (plus ``modulus,argument`` with ``polar``).

    The last comment line records ``n`` and the convention so
    :func:`read_spectrum_csv` can restore the spectrum.
    """
    z = spectrum.coeffs
    columns = ["index", "re", "im"]
    cols = [np.arange(1, spectrum.n + 1), z.real, z.imag]
    if polar:
        columns += ["modulus", "argument"]
        cols += [np.abs(z), np.angle(z)]
    rows = zip(*(c.tolist() for c in cols))
    tag = f"spectrum n={spectrum.n} convention={spectrum.convention.value}"
    return write_csv(path, columns, rows, comments=(*comments, tag))


def read_spectrum_csv(path):
    comments, columns, rows = read_csv(path)
    tags = [c for c in comments if c.startswith("spectrum ")]
    if not tags:
        raise ValueError(f"{path} has no spectrum header line")
    fields = dict(item.split("=", 1) for item in tags[-1].split()[1:])
    re_col, im_col = columns.index("re"), columns.index("im")
    coeffs = np.array([float(r[re_col]) + 1j * float(r[im_col]) for r in rows])
    if coeffs.size != int(fields["n"]):
        raise ValueError(f"{path} declares n={fields['n']} but holds {coeffs.size} rows")
    return Spectrum(coeffs, Convention(fields["convention"]))


def file_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
