"""Binary trees of iterated real/imaginary Fourier transforms.

Each node vector u of length m is split by the unitary transform into its
cosine part (child ``r``) and sine part (child ``i``). The first entry of
each part only carries the mean of u; both are dropped from the children
and kept as the node's heads, so a child at depth l has length n - l and the
parent stays recoverable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NumericContractError
from .spectral import Convention, Spectrum, forward_transform, inverse_transform

__all__ = [
    "NestedFourierTree",
    "split_transform",
    "build_tree",
    "reconstruct_parent",
    "write_tree",
    "MAX_NODES",
]

MAX_NODES = 4096
PARSEVAL_RTOL = 1e-9
ROOT_FILE = "root"


@dataclass(frozen=True, eq=False)
class NestedFourierTree:
    """``nodes`` maps words over {r, i} (the root is ``""``) to vectors.

    ``dropped_heads[word]`` holds the two leading coefficients discarded
    when ``word`` was split; ``parseval_defects[word]`` the relative energy
    mismatch of that split before the heads were dropped.
    """

    root_input: np.ndarray
    depth: int
    nodes: dict
    dropped_heads: dict
    parseval_defects: dict

    def level(self, length):
        return {w: v for w, v in self.nodes.items() if len(w) == length}


def split_transform(values):
    """Return ``(heads, r_tail, i_tail)`` of a real vector of length m >= 2.

    ``r``/``i`` are the real/imaginary parts of the unitary forward
    transform, i.e. the cosine and sine sums scaled by 1/sqrt(m).
    """
    u = np.asarray(values, dtype=np.float64).reshape(-1)
    if u.size < 2:
        raise ValueError("split_transform needs at least two values")
    z = forward_transform(u, Convention.UNITARY).coeffs
    return (float(z.real[0]), float(z.imag[0])), z.real[1:].copy(), z.imag[1:].copy()


def _parseval_defect(u, heads, r_tail, i_tail):
    energy_in = float(np.dot(u, u))
    energy_out = heads[0] ** 2 + heads[1] ** 2 + float(np.dot(r_tail, r_tail) + np.dot(i_tail, i_tail))
    if energy_in == 0:
        return abs(energy_out)
    return abs(energy_out - energy_in) / energy_in


def build_tree(gamma, depth):
    """Split recursively down to ``depth`` levels below the input vector."""
    root = np.asarray(gamma, dtype=np.float64).reshape(-1)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if root.size - depth < 2:
        raise ValueError(f"depth {depth} too large for n={root.size}; need n - depth >= 2")
    if 2**depth > MAX_NODES:
        raise ValueError(f"depth {depth} exceeds the node budget 2^depth <= {MAX_NODES}")

    nodes = {"": root}
    heads = {}
    defects = {}
    frontier = [""]
    for _ in range(depth):
        nxt = []
        for word in frontier:
            parent = nodes[word]
            head, r_tail, i_tail = split_transform(parent)
            defect = _parseval_defect(parent, head, r_tail, i_tail)
            if defect > PARSEVAL_RTOL:
                raise NumericContractError(
                    f"split of node {word!r} violates Parseval by {defect:.3e}"
                )
            heads[word] = head
            defects[word] = defect
            nodes[word + "r"] = r_tail
            nodes[word + "i"] = i_tail
            nxt.extend((word + "r", word + "i"))
        frontier = nxt
    return NestedFourierTree(root, depth, nodes, heads, defects)


def reconstruct_parent(tree, word):
    """Rebuild the vector at ``word`` from its two children and its heads."""
    if word not in tree.dropped_heads:
        raise KeyError(f"node {word!r} has no children in this tree")
    head_r, head_i = tree.dropped_heads[word]
    real = np.concatenate(([head_r], tree.nodes[word + "r"]))
    imag = np.concatenate(([head_i], tree.nodes[word + "i"]))
    values, _ = inverse_transform(Spectrum(real + 1j * imag, Convention.UNITARY))
    return values


def write_tree(tree, directory, write_csv):
    """Write one ``<word>.csv`` per node (``root.csv`` for the input) and ``heads.json``.

    ``write_csv(path, header, rows)`` does the actual CSV emission so callers
    control the comment header. Returns the list of written paths.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for word, vec in tree.nodes.items():
        path = directory / f"{word or ROOT_FILE}.csv"
        write_csv(path, ["k", "value"], zip(range(1, vec.size + 1), vec.tolist()))
        written.append(path)
    heads = {
        (word or ROOT_FILE): {"r": h[0], "i": h[1]}
        for word, h in tree.dropped_heads.items()
    }
    path = directory / "heads.json"
    path.write_text(json.dumps(heads, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(path)
    return written
