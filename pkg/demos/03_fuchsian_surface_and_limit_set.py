"""Genus-2 Fuchsian holonomy from Fenchel-Nielsen data, with limit-set
sampling and a convergence diagnostic.

Run:  python demos/03_fuchsian_surface_and_limit_set.py
"""

import math

import numpy as np

from cp1graft import FNCoordinates, GroupWord, fuchsian_from_fn, limit_set_sample
from cp1graft.surface import cuff_length_from_trace, enumerate_words, jorgensen_flags

fn = FNCoordinates(lengths=(2.0, 2.5, 1.7), twists=(0.3, -0.8, 1.1))
hol = fuchsian_from_fn(fn)

print("surface relation residual:", hol.relation_residual())
print("generator matrices are real: max |Im| =", hol.max_imag_entry())
for word, want in zip(hol.cuff_words, fn.lengths):
    got = cuff_length_from_trace(hol.rho(word))
    print(f"cuff {word}: length {got:.12f} (configured {want})")

# Discreteness heuristic (reported, never asserted).
pairs = [(GroupWord((1,)), GroupWord((2,))), (GroupWord((3,)), GroupWord((4,)))]
print("Jorgensen flags:", jorgensen_flags(hol, pairs) or "none")

# Limit-set samples are attracting fixed points of group elements; for a
# Fuchsian group they fill out the round circle R u {inf}.
for depth in (2, 3, 4, 5):
    pts = limit_set_sample(hol, depth)
    finite = [p.as_complex().real for p in pts if not p.is_infinity]
    print(f"depth {depth}: {len(pts)} samples, spread "
          f"[{min(finite):.2f}, {max(finite):.2f}]")

# Hausdorff-distance diagnostic between consecutive depths: the gap shrinks
# as the sample fills the circle (a convergence indicator, not a theorem).
def hausdorff(a, b):
    xa = np.array([p.sphere_coords() for p in a])
    xb = np.array([p.sphere_coords() for p in b])
    d_ab = max(np.min(np.linalg.norm(xb - x, axis=1)) for x in xa)
    d_ba = max(np.min(np.linalg.norm(xa - x, axis=1)) for x in xb)
    return max(d_ab, d_ba)

prev = None
for depth in (2, 3, 4, 5):
    pts = limit_set_sample(hol, depth)
    if prev is not None:
        print(f"Hausdorff(depth {depth - 1}, depth {depth}) = "
              f"{hausdorff(prev, pts):.4f}")
    prev = pts
