"""The convex-hull dome of a finite ideal set: faces, bending edges, and the
flat degenerate case.

Run:  python demos/02_dome_of_ideal_points.py
"""

import cmath
import math

from cp1graft import INFINITY, cp1, dome

# The regular ideal tetrahedron: 0, 1, infinity, and the sixth root of unity.
omega = cmath.exp(1j * math.pi / 3.0)
mesh = dome([cp1(0), cp1(1), INFINITY, cp1(omega)])

print(f"faces: {len(mesh.faces)}, edges: {len(mesh.edges)}, "
      f"V - E + F = {len(mesh.vertices) - len(mesh.edges) + len(mesh.faces)}")
for e in mesh.edges:
    print(f"  edge {e.vertex_ids}: bending weight {e.weight:.12f}")
print("all weights equal 2 pi / 3 =", 2 * math.pi / 3)

# Each face is supported on a hyperbolic plane whose ideal boundary circle
# passes through the face vertices; the weight is the exterior dihedral
# angle between adjacent support planes.
face = mesh.faces[0]
print("\nface 0 boundary circle:", face.plane.boundary)

# Concircular input degenerates to a single flat face with no bending.
flat = dome([cp1(1), cp1(1j), cp1(-1), cp1(-1j)])
print(f"\nconcircular square: {len(flat.faces)} face, {len(flat.edges)} edges")

# A random 7-point dome still satisfies Euler's formula.
import numpy as np

rng = np.random.default_rng(4)
pts = [cp1(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))) for _ in range(7)]
mesh7 = dome(pts)
print(f"\nrandom 7-point dome: V={len(mesh7.vertices)} E={len(mesh7.edges)} "
      f"F={len(mesh7.faces)}, chi={len(mesh7.vertices) - len(mesh7.edges) + len(mesh7.faces)}")
