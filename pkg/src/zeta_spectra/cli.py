"""Command-line front end.

Every subcommand reads a zero table (``--input`` file, ``--url`` or the
bundled reference table), writes CSV/JSON plot data into ``--output-dir``
and finishes with a ``manifest.json`` listing the config, an input digest
and the digest of every file written.

Exit codes: 0 success, 2 invalid arguments, 3 data or transport error,
4 numeric-contract violation.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from pathlib import Path

import numpy as np
from filelock import FileLock, Timeout

from . import __version__
from .circulant import FourierPolygon, apply_T, build_circulant, verify_spectrum
from .cluster import (
    cluster_slice,
    default_window,
    find_cloud_index,
    fit_imag_samples,
    fit_normal_samples,
)
from .errors import DataError, NumericContractError
from .nested import build_tree, reconstruct_parent, write_tree
from .recursion import (
    DEFAULT_SEED,
    block_means,
    montgomery_error_series,
    montgomery_sequence,
    z_recursion_error_series,
)
from .serialize import file_digest, write_csv, write_json, write_spectrum_csv
from .spectral import (
    Convention,
    average_midband_real,
    check_conjugate_symmetry,
    forward_transform,
    inverse_transform,
    midband_window,
    reconstruction_report,
)
from .zeros_io import fetch_zero_table, format_zero_table, load_zero_table, reference_zeros

log = logging.getLogger("zeta_spectra")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

EIGEN_TOL = 1e-7
APPLY_T_TOL = 1e-8
RESIDUE_RTOL = 1e-9
LOCK_NAME = ".zeta_spectra.lock"

# Not echoed into CSV headers: they name locations, not computations.
_LOCATION_KEYS = {"output_dir", "cache_dir", "input", "func"}


class Run:
    """Output bookkeeping for one invocation."""

    def __init__(self, output_dir, config):
        self.root = Path(output_dir)
        self.config = config
        self.written = []
        self.created = []

    def comments(self):
        echo = " ".join(
            f"{k}={v}" for k, v in sorted(self.config.items())
            if k not in _LOCATION_KEYS and v is not None
        )
        return [f"zeta-spectra {__version__}", f"config {echo}"]

    def path(self, name, subdir=None):
        base = self.root / subdir if subdir else self.root
        self.mkdir(base)
        return base / name

    def mkdir(self, directory):
        missing = [d for d in (directory, *directory.parents) if not d.exists()]
        directory.mkdir(parents=True, exist_ok=True)
        self.created.extend(reversed(missing))

    def csv(self, name, columns, rows, subdir=None):
        path = write_csv(self.path(name, subdir), columns, rows, comments=self.comments())
        self.written.append(path)
        return path

    def spectrum(self, name, spectrum, subdir=None, polar=False):
        path = write_spectrum_csv(self.path(name, subdir), spectrum,
                                  comments=self.comments(), polar=polar)
        self.written.append(path)
        return path

    def json(self, name, obj, subdir=None):
        path = write_json(self.path(name, subdir), obj)
        self.written.append(path)
        return path

    def text(self, name, text, subdir=None):
        path = self.path(name, subdir)
        path.write_text(text, encoding="utf-8")
        self.written.append(path)
        return path

    def csv_writer(self):
        """Adapter for :func:`zeta_spectra.nested.write_tree`."""
        def write(path, columns, rows):
            write_csv(path, columns, rows, comments=self.comments())
        return write

    def manifest(self, table):
        outputs = {
            str(p.relative_to(self.root)): file_digest(p) for p in sorted(self.written)
        }
        record = {
            "tool": "zeta-spectra",
            "version": __version__,
            "config": {k: v for k, v in sorted(self.config.items()) if k != "func"},
            "input": None,
            "outputs": outputs,
        }
        if table is not None:
            record["input"] = {
                "source": table.source,
                "count": table.count,
                "sha256": hashlib.sha256(table.values.tobytes()).hexdigest(),
            }
        write_json(self.root / "manifest.json", record)

    def cleanup(self):
        for path in self.written:
            path.unlink(missing_ok=True)
        for directory in reversed(self.created):
            if directory.is_dir() and not any(directory.iterdir()):
                directory.rmdir()
        self.written.clear()
        self.created.clear()


def _check_residue(residue, gamma_max, what):
    if residue >= RESIDUE_RTOL * gamma_max:
        raise NumericContractError(
            f"{what}: imaginary residue {residue:.3e} exceeds {RESIDUE_RTOL:g} * max gamma"
        )


# --- subcommands -------------------------------------------------------------

def cmd_fetch(run, table, args, subdir=None):
    run.text("zeros.txt", format_zero_table(table), subdir)
    run.json("fetch.json", {"source": table.source, "count": table.count}, subdir)


def cmd_transform(run, table, args, subdir=None):
    spectrum = forward_transform(table.values, Convention(args.convention))
    run.spectrum("fourier_coefs.csv", spectrum, subdir, polar=True)
    return spectrum


def cmd_modulus_argument(run, table, args, subdir=None):
    z = forward_transform(table.values).coeffs
    rows = zip(range(1, z.size + 1), np.abs(z).tolist(), np.angle(z).tolist())
    run.csv("modulus_argument.csv", ["j", "modulus", "argument"], rows, subdir)


def cmd_reconstruct(run, table, args, subdir=None):
    spectrum = forward_transform(table.values, Convention(args.convention))
    rep = reconstruction_report(spectrum, table.values)
    _check_residue(rep.max_imag_residue, table.values.max(), "reconstruct")
    rows = zip(range(1, table.count + 1), rep.reconstructed.tolist(),
               rep.reference.tolist(), rep.abs_diff.tolist())
    run.csv("reconstruction.csv", ["j", "reconstructed", "gamma", "abs_diff"], rows, subdir)
    run.json("reconstruct.json", {"max_abs_diff": rep.max_abs_diff,
                                  "max_imag_residue": rep.max_imag_residue}, subdir)


def cmd_perturb(run, table, args, subdir=None):
    spectrum = forward_transform(table.values)
    modified = average_midband_real(spectrum, args.fraction)
    rep = reconstruction_report(modified, table.values)
    _check_residue(rep.max_imag_residue, table.values.max(), "perturb")
    j = range(1, table.count + 1)
    window = midband_window(table.count, args.fraction)
    run.spectrum("modified_spectrum.csv", modified, subdir)
    run.csv("reconstruction.csv", ["j", "reconstructed", "gamma"],
            zip(j, rep.reconstructed.tolist(), rep.reference.tolist()), subdir)
    run.csv("diffs.csv", ["j", "diff"],
            zip(j, (rep.reconstructed - rep.reference).tolist()), subdir)
    run.json("perturb.json", {
        "window_first": int(window[0]) if window.size else None,
        "window_last": int(window[-1]) if window.size else None,
        "window_size": int(window.size),
        "max_abs_diff": rep.max_abs_diff,
        "max_imag_residue": rep.max_imag_residue,
        "conjugate_asymmetry": check_conjugate_symmetry(modified) if modified.n > 1 else 0.0,
        "strictly_increasing": bool(np.all(np.diff(rep.reconstructed) > 0)),
    }, subdir)


def cmd_montgomery(run, table, args, subdir=None):
    series = montgomery_error_series(table)
    approx = montgomery_sequence(table.values[0], table.count)
    rows = zip(series.indices.tolist(), approx.tolist(), table.values.tolist(),
               series.rel_errors.tolist())
    run.csv("montgomery.csv", ["j", "approx", "exact", "rel_error"], rows, subdir)
    run.json("montgomery.json", {
        "block_size": 100,
        "block_means": block_means(series.rel_errors).tolist(),
    }, subdir)


def cmd_z_recursion(run, table, args, subdir=None, matrix_subdir=None):
    n_max = args.n_max or table.count
    if n_max > table.count:
        raise ValueError(f"--n-max {n_max} exceeds --n {table.count}")
    series, final = z_recursion_error_series(
        table, n_max, seed=args.seed, override_exact=args.override_exact,
        return_final=True,
    )
    run.csv("z_errors.csv", ["n", "rel_error"],
            zip(series.indices.tolist(), series.rel_errors.tolist()), subdir)
    approx, _ = inverse_transform(final)
    exact = table.values[:n_max]
    run.csv("matrix_approx.csv", ["j", "approx", "exact", "abs_diff"],
            zip(range(1, n_max + 1), approx.tolist(), exact.tolist(),
                np.abs(approx - exact).tolist()),
            matrix_subdir or subdir)


def cmd_eigencheck(run, table, args, subdir=None):
    op = build_circulant(forward_transform(table.values))
    check = verify_spectrum(op, table)
    rows = zip(range(1, op.n + 1), check.lambdas.tolist(), check.gammas.tolist(),
               check.abs_diff.tolist())
    run.csv("eigen.csv", ["j", "lambda", "gamma", "abs_diff"], rows, subdir)
    run.json("eigencheck.json", {
        "max_deviation": check.max_deviation,
        "dense_max_deviation": check.dense_max_deviation,
        "hermiticity_defect": op.hermiticity_defect,
    }, subdir)
    worst = max(check.max_deviation, check.dense_max_deviation or 0.0)
    if worst >= EIGEN_TOL:
        raise NumericContractError(f"eigenvalue deviation {worst:.3e} >= {EIGEN_TOL:g}")


def cmd_apply_t(run, table, args, subdir=None):
    op = build_circulant(forward_transform(table.values))
    length = args.length or op.n + 4
    if length < op.n:
        raise ValueError(f"--length {length} is below the operator rank {op.n}")
    x = np.zeros(length, dtype=complex)
    x[: op.n] = FourierPolygon(args.j, op.n).vector()
    result = apply_T(op, x)
    expected = (0.5 + 1j * table.values[args.j - 1]) * x
    residual = float(np.abs(result.output_coeffs - expected).max())
    rows = zip(range(1, length + 1), x.real.tolist(), x.imag.tolist(),
               result.output_coeffs.real.tolist(), result.output_coeffs.imag.tolist())
    run.csv("apply_t.csv", ["index", "in_re", "in_im", "out_re", "out_im"], rows, subdir)
    run.json("apply_t.json", {
        "j": args.j,
        "eigenvalue_re": 0.5,
        "eigenvalue_im": float(table.values[args.j - 1]),
        "max_residual": residual,
    }, subdir)
    if residual >= APPLY_T_TOL:
        raise NumericContractError(f"eigenpair residual {residual:.3e} >= {APPLY_T_TOL:g}")


def _partition(table, args):
    spectrum = forward_transform(table.values)
    return spectrum, find_cloud_index(spectrum, args.window_d, args.stride)


def cmd_cloud(run, table, args, subdir=None):
    _, part = _partition(table, args)
    run.csv("cloud_scores.csv", ["j", "score"],
            zip(part.scanned.tolist(), part.scores.tolist()), subdir)
    run.json("cloud.json", {"m": part.m, "n": part.n, "d": part.window_width,
                            "stride": part.stride}, subdir)
    return part


def _slice_bounds(table, args):
    spectrum = forward_transform(table.values)
    if args.slice:
        start, _, stop = args.slice.partition(":")
        return spectrum, int(start), int(stop) if stop else None
    part = find_cloud_index(spectrum, args.window_d, args.stride)
    return spectrum, part.m, None


def cmd_fit_im(run, table, args, subdir=None):
    spectrum, start, stop = _slice_bounds(table, args)
    rep = fit_imag_samples(cluster_slice(spectrum, start, stop).imag)
    rows = zip(rep.grid.tolist(), rep.empirical_cdf.tolist(), rep.ansatz(rep.grid).tolist())
    run.csv("im_cdf.csv", ["x", "empirical", "ansatz"], rows, subdir)
    run.json("fit_im.json", {
        "p": rep.p, "integral": rep.integral, "max_cdf_gap": rep.max_cdf_gap,
        "slope_near_zero": rep.slope_near_zero, "samples": rep.samples,
        "slice_start": start, "slice_stop": stop or spectrum.n // 2,
    }, subdir)


def cmd_fit_re(run, table, args, subdir=None):
    spectrum, start, stop = _slice_bounds(table, args)
    rep = fit_normal_samples(cluster_slice(spectrum, start, stop).real)
    from scipy.stats import norm

    z = np.sort(rep.standardized)
    ecdf = np.arange(1, z.size + 1) / z.size
    run.csv("re_cdf.csv", ["x", "empirical", "normal"],
            zip(z.tolist(), ecdf.tolist(), norm.cdf(z).tolist()), subdir)
    run.json("fit_re.json", {
        "ks_distance": rep.ks_distance, "mean": rep.mean, "std": rep.std,
        "samples": int(z.size), "slice_start": start, "slice_stop": stop or spectrum.n // 2,
    }, subdir)


def cmd_nested(run, table, args, subdir=None):
    tree = build_tree(table.values, args.depth)
    directory = run.root / subdir / "tree" if subdir else run.root / "tree"
    run.mkdir(directory)
    run.written.extend(write_tree(tree, directory, run.csv_writer()))
    worst = max(
        float(np.abs(reconstruct_parent(tree, w) - tree.nodes[w]).max() / np.abs(tree.nodes[w]).max())
        for w in tree.dropped_heads
    )
    run.json("nested.json", {
        "depth": tree.depth,
        "nodes_per_level": [len(tree.level(l)) for l in range(tree.depth + 1)],
        "max_parseval_defect": max(tree.parseval_defects.values()),
        "max_reconstruction_error": worst,
    }, subdir)


def cmd_report_all(run, table, args):
    cmd_transform(run, table, args, "fourier_coef")
    cmd_modulus_argument(run, table, args, "fourier_coef2")
    cmd_perturb(run, table, args, "constant_real_part")
    cmd_montgomery(run, table, args, "fourier_approx")
    cmd_z_recursion(run, table, args, "fourier_approx", matrix_subdir="matrix_approx")
    cmd_eigencheck(run, table, args, "matrix_approx")
    cmd_cloud(run, table, args, "cloud_index")
    cmd_fit_im(run, table, args, "im_distribution")
    cmd_fit_re(run, table, args, "re_distribution")
    cmd_nested(run, table, args, "tree")


COMMANDS = {
    "fetch": cmd_fetch,
    "transform": cmd_transform,
    "reconstruct": cmd_reconstruct,
    "perturb": cmd_perturb,
    "montgomery": cmd_montgomery,
    "z-recursion": cmd_z_recursion,
    "eigencheck": cmd_eigencheck,
    "apply-t": cmd_apply_t,
    "cloud": cmd_cloud,
    "fit-im": cmd_fit_im,
    "fit-re": cmd_fit_re,
    "nested": cmd_nested,
    "report-all": cmd_report_all,
}


# --- argument handling -------------------------------------------------------

def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_positive, default=1000, help="number of zeros (default 1000)")
    src = common.add_mutually_exclusive_group()
    src.add_argument("--input", help="zero table file (one ordinate per line)")
    src.add_argument("--url", help="zero table URL, cached on first download")
    common.add_argument("--cache-dir", help="download cache (default $ZETA_SPECTRA_CACHE)")
    common.add_argument("--output-dir", default="zeta_out", help="directory for outputs")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="zeta-spectra", description="Fourier analysis of Riemann zeta zero ordinates."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *groups):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=COMMANDS[name], convention="mean-forward")
        for g in groups:
            g(p)
        return p

    def convention(p):
        p.add_argument("--convention", choices=[c.value for c in Convention],
                       default="mean-forward")

    def fraction(p):
        p.add_argument("--fraction", type=float, default=0.8,
                       help="share of mid-band coefficients to average (default 0.8)")

    def recursion(p):
        p.add_argument("--seed", type=_positive, default=DEFAULT_SEED,
                       help=f"length of the exact seed spectrum (default {DEFAULT_SEED})")
        p.add_argument("--n-max", type=_positive, help="last n of the recursion (default --n)")
        p.add_argument("--override-exact", action="store_true",
                       help="feed the true gamma_n instead of Montgomery's prediction")

    def cloud(p):
        p.add_argument("--window-d", type=_positive, help="window half-width (default max(16, n/100))")
        p.add_argument("--stride", type=_positive, default=1)

    def slicing(p):
        p.add_argument("--slice", help="explicit 1-based cluster slice START:STOP")

    def nested(p):
        p.add_argument("--depth", type=_positive, default=3)

    def apply_t(p):
        p.add_argument("--j", type=_positive, default=1, help="Fourier polygon index")
        p.add_argument("--length", type=_positive, help="coefficient list length (default n+4)")

    add("fetch", "download and cache a zero table")
    add("transform", "forward transform (fourier_coefs.csv)", convention)
    add("reconstruct", "inverse transform roundtrip", convention)
    add("perturb", "average mid-band real parts and reconstruct", fraction)
    add("montgomery", "Montgomery recursion against the table")
    add("z-recursion", "recursive Fourier-coefficient update", recursion)
    add("eigencheck", "circulant eigenvalues versus the ordinates")
    add("apply-t", "apply the finite-rank operator to a Fourier polygon", apply_t)
    add("cloud", "cloud index detection", cloud)
    add("fit-im", "imaginary-part CDF ansatz fit", cloud, slicing)
    add("fit-re", "real-part normal fit", cloud, slicing)
    add("nested", "nested Fourier tree", nested)
    add("report-all", "data for every figure", fraction, recursion, cloud, slicing, nested)
    return parser


def _validate(args):
    """Reject inconsistent flags before any data is read."""
    if args.command == "fetch" and not args.url:
        raise ValueError("fetch needs --url")
    fraction = getattr(args, "fraction", None)
    if fraction is not None:
        midband_window(args.n, fraction)
    if getattr(args, "seed", None) is not None:
        if args.seed < 2 or args.seed > args.n:
            raise ValueError(f"--seed must lie in 2..{args.n}")
        if args.n_max is not None and not args.seed <= args.n_max <= args.n:
            raise ValueError(f"--n-max must lie in {args.seed}..{args.n}")
    if hasattr(args, "window_d"):
        d = args.window_d or default_window(args.n)
        if d < 2 or not 2 * d + 1 < args.n / 2:
            raise ValueError(f"window half-width {d} needs 2 <= d and 2d+1 < n/2")
    if getattr(args, "slice", None):
        start, sep, stop = args.slice.partition(":")
        if not start.isdigit() or (stop and not stop.isdigit()):
            raise ValueError("--slice must look like START:STOP")
        if not 1 <= int(start) <= (int(stop) if stop else args.n // 2) <= args.n:
            raise ValueError(f"--slice {args.slice} outside 1..{args.n}")
    if hasattr(args, "depth"):
        if args.n - args.depth < 2 or 2**args.depth > 4096:
            raise ValueError(f"--depth {args.depth} too large for n={args.n}")
    if hasattr(args, "j") and args.j > args.n:
        raise ValueError(f"--j must lie in 1..{args.n}")
    if getattr(args, "length", None) is not None and args.length < args.n:
        raise ValueError("--length must be at least --n")


def _load_table(args):
    if args.input:
        table = load_zero_table(args.input, limit=args.n)
    elif args.url:
        table = fetch_zero_table(args.url, args.cache_dir, limit=args.n)
    else:
        table = reference_zeros(limit=args.n)
    if table.count < args.n:
        raise DataError(f"table {table.source} holds {table.count} ordinates, --n is {args.n}")
    return table


def run(args):
    """Execute parsed arguments; returns the process exit code."""
    config = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
    out = Path(args.output_dir)
    try:
        _validate(args)
        out.mkdir(parents=True, exist_ok=True)
    except NumericContractError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION

    job = Run(out, config)
    try:
        with FileLock(out / LOCK_NAME, timeout=0):
            try:
                table = _load_table(args)
                args.func(job, table, args)
                job.manifest(table)
            except BaseException:
                job.cleanup()
                raise
    except Timeout:
        log.error("another run holds the lock on %s", out)
        return EXIT_VALIDATION
    except NumericContractError as exc:
        log.error("%s", exc)
        return EXIT_NUMERIC
    except DataError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_VALIDATION
    finally:
        (out / LOCK_NAME).unlink(missing_ok=True)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="zeta-spectra: %(message)s")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
