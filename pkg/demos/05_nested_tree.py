# %% [markdown]
# # Nested Fourier analysis
#
# Split a vector into the cosine and sine halves of its unitary transform,
# drop the two leading (mean-only) entries and repeat on each half.

# %%
import numpy as np

from zeta_spectra import build_tree, reference_zeros
from zeta_spectra.nested import reconstruct_parent

tree = build_tree(reference_zeros(limit=1000).values, depth=3)
for level in range(1, 4):
    nodes = tree.level(level)
    print(f"level {level}: {len(nodes)} nodes of length {next(iter(nodes.values())).size}")
    for word, vec in sorted(nodes.items()):
        print(f"   {word:>3}: first values {np.array2string(vec[:3], precision=3)}")

# %% [markdown]
# Each parent is recovered exactly from its children and dropped heads.

# %%
worst = max(np.abs(reconstruct_parent(tree, w) - tree.nodes[w]).max() for w in tree.dropped_heads)
print("worst reconstruction error:", worst)
