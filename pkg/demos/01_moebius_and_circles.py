"""Tour of the PSL(2,C) kernel: points, maps, circles, and enclosing disks.

Run:  python demos/01_moebius_and_circles.py
"""

import math

import numpy as np

from cp1graft import (
    INFINITY,
    MoebiusMap,
    OrientedCircle,
    angle_between,
    apply,
    circle_through,
    classify,
    cp1,
    cross_ratio,
    minimal_enclosing_disk,
)

# Moebius maps act on homogeneous coordinates, so infinity needs no special
# cases: the parabolic z -> z + 1 fixes it.
parabolic = MoebiusMap.from_entries(1, 1, 0, 1)
print("parabolic fixes infinity:", apply(parabolic, INFINITY).is_infinity)
print("classification:", classify(parabolic).kind)

# A hyperbolic element and its axis endpoints.
hyperbolic = MoebiusMap.from_entries(2, 0, 0, 0.5)
cls = classify(hyperbolic)
print("diag(2, 1/2):", cls.kind, "tr^2 =", hyperbolic.trace_squared().real)

# Circles are Hermitian forms; orientation tracks a chosen disk side.
unit = circle_through(cp1(1), cp1(1j), cp1(-1))
print("circle through 1, i, -1:", unit)
print("0 on the disk side:", unit.contains_in_disk(cp1(0)))

# The intersection angle of oriented circles is Moebius invariant.
line = OrientedCircle.real_line()
print("angle(unit circle, real line) =", angle_between(unit, line), "= pi/2?")

m = MoebiusMap.from_entries(1 + 0.3j, 0.2, -0.1j, 0.9)
moved = angle_between(unit.transform(m), line.transform(m))
print("same angle after a random map:", moved)

# Cross-ratios detect concircularity: real iff the four points share a circle.
print("cross-ratio (1, i; -1, -i):", cross_ratio(cp1(1), cp1(1j), cp1(-1), cp1(-1j)))

# Smallest enclosing disks (the engine behind maximal disks downstream).
rng = np.random.default_rng(0)
pts = [complex(rng.normal(), rng.normal()) for _ in range(12)]
disk = minimal_enclosing_disk(pts)
print(f"minimal disk of 12 points: center {disk.center:.4f}, "
      f"radius {disk.radius:.4f}, support {disk.support}")
