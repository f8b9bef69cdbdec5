"""Reading, validating and caching tables of zeta zero ordinates.

Tables are plain text with one ordinate per line, optionally preceded by an
integer index column (``"1 14.134725142"``). Which of the two layouts a file
uses is decided by its first non-blank line.
"""

from __future__ import annotations

import hashlib
import os
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from filelock import FileLock

from .errors import (
    CacheIntegrityError,
    TransportError,
    ZeroTableParseError,
    ZeroTableValidationError,
)

__all__ = [
    "ZeroTable",
    "parse_zero_table",
    "format_zero_table",
    "fetch_zero_table",
    "load_zero_table",
    "reference_zeros",
    "default_cache_dir",
    "CACHE_ENV_VAR",
]

CACHE_ENV_VAR = "ZETA_SPECTRA_CACHE"
MIN_ORDINATE = 14.0
REFERENCE_RESOURCE = "zeros_10000.txt"


@dataclass(frozen=True, eq=False)
class ZeroTable:
    """Increasing ordinates gamma_1 < gamma_2 < ... of non-trivial zeros.

    ``values`` is stored as a read-only float64 array.
    """

    values: np.ndarray
    source: str = "<memory>"
    count: int = field(init=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "count", int(values.size))
        _validate(values)

    def __len__(self):
        return self.count

    def head(self, n):
        """Return a table holding the first ``n`` ordinates."""
        if n < 1 or n > self.count:
            raise ValueError(f"cannot take {n} ordinates from a table of {self.count}")
        return ZeroTable(self.values[:n], source=self.source)


def _validate(values):
    if values.size == 0:
        raise ZeroTableValidationError("zero table is empty")
    if not np.all(np.isfinite(values)):
        raise ZeroTableValidationError("zero table contains non-finite values")
    low = int(np.argmin(values))
    if values[low] <= MIN_ORDINATE:
        raise ZeroTableValidationError(
            f"entry {low + 1} is {values[low]!r}; ordinates must exceed {MIN_ORDINATE}"
        )
    steps = np.diff(values)
    if steps.size and np.any(steps <= 0):
        bad = int(np.argmax(steps <= 0))
        raise ZeroTableValidationError(
            f"ordinates not strictly increasing at entries {bad + 1} and {bad + 2} "
            f"({values[bad]!r} >= {values[bad + 1]!r})"
        )


def _parse_float(token, lineno):
    try:
        value = float(token)
    except ValueError:
        raise ZeroTableParseError(f"not a decimal number: {token!r}", line=lineno) from None
    if not np.isfinite(value):
        raise ZeroTableParseError(f"not a finite number: {token!r}", line=lineno)
    return value


def parse_zero_table(raw_text, limit=None, source="<memory>"):
    """Parse a zero table from text or bytes.

    Parameters
    ----------
    raw_text : str or bytes
        Whitespace-delimited decimal ordinates, one per line. Blank lines,
        trailing whitespace and CRLF line endings are ignored.
    limit : int, optional
        Keep only the first ``limit`` ordinates. Lines past the limit are
        not parsed.
    source : str
        Provenance recorded on the returned table.

    Raises
    ------
    ZeroTableParseError
        A token is not a number, or a line's column count disagrees with
        the layout set by the first line.
    ZeroTableValidationError
        The table is empty, not strictly increasing, or has a value <= 14.
    """
    if isinstance(raw_text, (bytes, bytearray)):
        try:
            raw_text = raw_text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ZeroTableParseError(f"non-ASCII byte at offset {exc.start}") from None
    if limit is not None and limit < 1:
        raise ValueError("limit must be a positive integer")

    ncols = None
    values = []
    for lineno, line in enumerate(raw_text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if ncols is None:
            ncols = len(tokens)
            if ncols not in (1, 2):
                raise ZeroTableParseError(
                    f"expected 1 or 2 columns, found {ncols}", line=lineno
                )
        elif len(tokens) != ncols:
            raise ZeroTableParseError(
                f"expected {ncols} column(s) as on the first line, found {len(tokens)}",
                line=lineno,
            )
        if ncols == 2:
            try:
                int(tokens[0])
            except ValueError:
                raise ZeroTableParseError(
                    f"index column is not an integer: {tokens[0]!r}", line=lineno
                ) from None
        values.append(_parse_float(tokens[-1], lineno))
        if limit is not None and len(values) >= limit:
            break
    return ZeroTable(np.asarray(values, dtype=np.float64), source=source)


def format_zero_table(table):
    """Serialize to the one-column text layout, losslessly."""
    return "".join(f"{v!r}\n" for v in table.values.tolist())


def load_zero_table(path, limit=None):
    path = Path(path)
    return parse_zero_table(path.read_bytes(), limit=limit, source=str(path))


def reference_zeros(limit=None):
    """The bundled table of the first 10000 ordinates (nine decimals)."""
    raw = resources.files("zeta_spectra.data").joinpath(REFERENCE_RESOURCE).read_bytes()
    return parse_zero_table(raw, limit=limit, source=f"bundled:{REFERENCE_RESOURCE}")


def default_cache_dir():
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "zeta_spectra"


def _cache_paths(url, cache_dir):
    digest = hashlib.sha256(url.encode("utf-8")).hexdigest()
    return cache_dir / f"{digest}.txt", cache_dir / f"{digest}.meta", cache_dir / f"{digest}.lock"


def _read_meta(path):
    meta = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            meta[key.strip()] = value.strip()
    return meta


def _check_entry(data_path, meta_path, url):
    purge = f"delete {data_path} and {meta_path} to purge the entry"
    if not meta_path.exists():
        raise CacheIntegrityError(f"cache entry {data_path} has no metadata; {purge}")
    meta = _read_meta(meta_path)
    raw = data_path.read_bytes()
    if meta.get("url") != url:
        raise CacheIntegrityError(f"cache entry {data_path} belongs to another URL; {purge}")
    if meta.get("bytes") != str(len(raw)):
        raise CacheIntegrityError(
            f"cache entry {data_path} has {len(raw)} bytes, metadata says "
            f"{meta.get('bytes')}; {purge}"
        )
    if meta.get("sha256") != hashlib.sha256(raw).hexdigest():
        raise CacheIntegrityError(f"cache entry {data_path} fails its checksum; {purge}")
    return raw


def _download(url, timeout):
    try:
        with urllib.request.urlopen(url, timeout=timeout) as response:
            return response.read()
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise TransportError(f"could not download {url}: {exc}") from exc


def fetch_zero_table(url, cache_dir=None, limit=None, timeout=30.0):
    """Download a zero table once and parse it, serving later calls from cache.

    The cache holds ``<sha256(url)>.txt`` with the raw bytes and a
    ``<sha256(url)>.meta`` file of ``key=value`` lines (url, retrieved,
    bytes, sha256). Writers to one entry are serialized with a lock file.
    """
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    data_path, meta_path, lock_path = _cache_paths(url, cache_dir)

    with FileLock(lock_path):
        if data_path.exists():
            raw = _check_entry(data_path, meta_path, url)
        else:
            raw = _download(url, timeout)
            tmp = data_path.with_suffix(".part")
            tmp.write_bytes(raw)
            meta_path.write_text(
                f"url={url}\n"
                f"retrieved={time.strftime('%Y-%m-%dT%H:%M:%SZ', time.gmtime())}\n"
                f"bytes={len(raw)}\n"
                f"sha256={hashlib.sha256(raw).hexdigest()}\n",
                encoding="utf-8",
            )
            os.replace(tmp, data_path)
    return parse_zero_table(raw, limit=limit, source=url)
