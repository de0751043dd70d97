"""Numerical PSL(2,C) kernel: points of the Riemann sphere, Moebius maps,
oriented round circles, and smallest enclosing disks.

Conventions
-----------
* Points of the sphere are homogeneous pairs (z0, z1); z = z0/z1, infinity
  is (1, 0).
* A Moebius map is an SL(2,C) matrix stored up to sign, with a deterministic
  sign normalization so matrices can be compared.
* A circle is a Hermitian 2x2 matrix H with det(H) = -1.  The point p lies
  on the circle iff p* H p = 0, and the chosen disk side is p* H p < 0.
  For H = [[A, B], [conj(B), D]] and a finite circle, the center is -B/A and
  the radius 1/|A|; A > 0 selects the bounded interior.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field

import numpy as np

# Tolerances: algebraic residuals, geometric coincidence, parabolic band.
TOL_ALG = 1e-10
TOL_GEO = 1e-7
TOL_CLASS = 1e-8


class DegenerateInputError(ValueError):
    """Raised when the input collapses (coincident points, empty sets, ...)."""


class NoIntersectionError(ValueError):
    """Raised when two circles do not meet transversally."""


# ---------------------------------------------------------------------------
# Points of CP^1


@dataclass(frozen=True)
class PointCP1:
    """Point of the Riemann sphere in homogeneous coordinates (z0 : z1)."""

    z0: complex
    z1: complex

    def __post_init__(self):
        n = abs(self.z0) ** 2 + abs(self.z1) ** 2
        if n == 0.0 or not math.isfinite(n):
            raise DegenerateInputError("homogeneous coordinates must be finite and not both zero")

    @staticmethod
    def from_complex(z: complex) -> "PointCP1":
        return PointCP1(complex(z), 1.0 + 0.0j)

    @staticmethod
    def infinity() -> "PointCP1":
        return PointCP1(1.0 + 0.0j, 0.0j)

    @property
    def is_infinity(self) -> bool:
        return abs(self.z1) <= TOL_GEO * abs(self.z0)

    def as_complex(self) -> complex:
        """Affine coordinate z0/z1; raises for points at (or too near) infinity."""
        if self.is_infinity:
            raise DegenerateInputError("point is at infinity")
        return self.z0 / self.z1

    def normalized(self) -> "PointCP1":
        n = math.hypot(abs(self.z0), abs(self.z1))
        return PointCP1(self.z0 / n, self.z1 / n)

    def vector(self) -> np.ndarray:
        return np.array([self.z0, self.z1], dtype=complex)

    def sphere_coords(self) -> np.ndarray:
        """Unit-sphere embedding of CP^1 (chordal model); infinity -> (0,0,1)."""
        p = self.normalized()
        z0, z1 = p.z0, p.z1
        # For z = z0/z1: (2 Re z, 2 Im z, |z|^2 - 1) / (|z|^2 + 1), written
        # homogeneously so it is finite at infinity.
        w = 2.0 * z0 * np.conj(z1)
        den = abs(z0) ** 2 + abs(z1) ** 2
        return np.array([w.real / den, w.imag / den, (abs(z0) ** 2 - abs(z1) ** 2) / den])


def cp1(z) -> PointCP1:
    """Coerce a complex number, 'inf', or PointCP1 into a PointCP1."""
    if isinstance(z, PointCP1):
        return z
    if z == math.inf or (isinstance(z, str) and z == "inf"):
        return PointCP1.infinity()
    return PointCP1.from_complex(z)


INFINITY = PointCP1.infinity()


def chordal_distance(p: PointCP1, q: PointCP1) -> float:
    """Chordal metric: Euclidean distance of the sphere embeddings (<= 2)."""
    return float(np.linalg.norm(p.sphere_coords() - q.sphere_coords()))


def points_equal(p: PointCP1, q: PointCP1, tol: float = TOL_GEO) -> bool:
    return chordal_distance(p, q) < tol


def bracket(p: PointCP1, q: PointCP1) -> complex:
    """Determinant [p, q] = p0 q1 - p1 q0 of normalized representatives."""
    pn, qn = p.normalized(), q.normalized()
    return pn.z0 * qn.z1 - pn.z1 * qn.z0


def cross_ratio(p: PointCP1, q: PointCP1, r: PointCP1, s: PointCP1) -> complex:
    """Cross-ratio (p,q;r,s) = ((p-r)(q-s)) / ((p-s)(q-r)), infinity-safe."""
    num = bracket(p, r) * bracket(q, s)
    den = bracket(p, s) * bracket(q, r)
    if abs(den) < TOL_ALG * max(abs(num), 1.0) * 1e-6:
        raise DegenerateInputError("cross-ratio undefined: coincident points")
    return num / den


# ---------------------------------------------------------------------------
# Moebius maps


def _sign_normalize(m: np.ndarray) -> np.ndarray:
    """Flip the global sign so the first entry of magnitude > TOL_ALG has
    positive real part (positive imaginary part breaks the tie)."""
    for e in m.flat:
        if abs(e) > TOL_ALG:
            if e.real < 0 or (e.real == 0 and e.imag < 0):
                return -m
            return m
    return m


@dataclass(frozen=True)
class MoebiusMap:
    """Element of PSL(2,C): SL(2,C) matrix stored up to a normalized sign."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) < 1e-300:
            raise DegenerateInputError("singular matrix is not a Moebius map")
        m = m / np.sqrt(det)
        m = _sign_normalize(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(np.eye(2, dtype=complex))

    @staticmethod
    def from_entries(a, b, c, d) -> "MoebiusMap":
        return MoebiusMap(np.array([[a, b], [c, d]], dtype=complex))

    @property
    def a(self) -> complex:
        return self.matrix[0, 0]

    @property
    def b(self) -> complex:
        return self.matrix[0, 1]

    @property
    def c(self) -> complex:
        return self.matrix[1, 0]

    @property
    def d(self) -> complex:
        return self.matrix[1, 1]

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(self.matrix @ other.matrix)

    def inverse(self) -> "MoebiusMap":
        a, b, c, d = self.a, self.b, self.c, self.d
        return MoebiusMap(np.array([[d, -b], [-c, a]], dtype=complex))

    def trace_squared(self) -> complex:
        """tr^2 is well defined in PSL(2,C) even though tr is not."""
        t = self.a + self.d
        return t * t

    def __call__(self, p):
        """Apply to a PointCP1 (or complex, returned as complex when finite)."""
        if isinstance(p, PointCP1):
            return apply(self, p)
        q = apply(self, cp1(p))
        return q.as_complex()

    def proj_distance(self, other: "MoebiusMap") -> float:
        """Frobenius distance in PSL(2,C): min over the sign ambiguity."""
        d1 = float(np.linalg.norm(self.matrix - other.matrix))
        d2 = float(np.linalg.norm(self.matrix + other.matrix))
        return min(d1, d2)

    def is_identity(self, tol: float = TOL_CLASS) -> bool:
        return self.proj_distance(MoebiusMap.identity()) < tol

    def __repr__(self):
        a, b, c, d = self.a, self.b, self.c, self.d
        return f"MoebiusMap([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


def apply(m: MoebiusMap, p: PointCP1) -> PointCP1:
    """Projective action on homogeneous coordinates (no special case at infinity)."""
    v = m.matrix @ p.normalized().vector()
    return PointCP1(complex(v[0]), complex(v[1]))


def moebius_three_points(p: PointCP1, q: PointCP1, r: PointCP1) -> MoebiusMap:
    """The unique Moebius map sending (p, q, r) to (0, 1, infinity)."""
    p, q, r = p.normalized(), q.normalized(), r.normalized()
    qr = bracket(q, r)
    qp = bracket(q, p)
    # Rows built so that p -> 0 and r -> infinity, scaled to fix q -> 1.
    m = np.array(
        [
            [qr * p.z1, -qr * p.z0],
            [qp * r.z1, -qp * r.z0],
        ],
        dtype=complex,
    )
    return MoebiusMap(m)


def moebius_two_points(p: PointCP1, q: PointCP1) -> MoebiusMap:
    """Some Moebius map sending p -> 0 and q -> infinity (scale not pinned)."""
    p, q = p.normalized(), q.normalized()
    m = np.array([[p.z1, -p.z0], [q.z1, -q.z0]], dtype=complex)
    return MoebiusMap(m)


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class MoebiusClass:
    kind: str  # identity | elliptic | parabolic | hyperbolic | loxodromic
    fixed_points: tuple
    parabolic_ambiguous: bool = False


def fixed_points(m: MoebiusMap) -> tuple:
    """Fixed points as eigenvectors, ordered (repelling, attracting) when the
    eigenvalue moduli differ."""
    a, b, c, d = m.a, m.b, m.c, m.d
    t = a + d
    disc = cmath.sqrt(t * t - 4.0)
    lam1 = (t + disc) / 2.0
    lam2 = (t - disc) / 2.0

    def eigvec(lam):
        v1 = np.array([b, lam - a], dtype=complex)
        v2 = np.array([lam - d, c], dtype=complex)
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        return PointCP1(complex(v[0]), complex(v[1]))

    if abs(disc) < TOL_CLASS:
        return (eigvec(t / 2.0),)
    p1, p2 = eigvec(lam1), eigvec(lam2)
    # Attracting fixed point belongs to the eigenvalue of larger modulus.
    if abs(lam1) >= abs(lam2):
        return (p2, p1)
    return (p1, p2)


def classify(m: MoebiusMap, tol: float = TOL_CLASS) -> MoebiusClass:
    """Classify by tr^2: [0,4) elliptic, 4 parabolic, real (4,inf) hyperbolic,
    anything else loxodromic.  |tr^2 - 4| < tol is flagged parabolic-ambiguous."""
    if m.is_identity(tol):
        return MoebiusClass("identity", ())
    t2 = m.trace_squared()
    near_parabolic = abs(t2 - 4.0) < tol
    if near_parabolic:
        fp = fixed_points(m)
        ambiguous = abs(t2 - 4.0) > 1e-14
        return MoebiusClass("parabolic", (fp[0],), parabolic_ambiguous=ambiguous)
    fp = fixed_points(m)
    if abs(t2.imag) < tol:
        x = t2.real
        if 0.0 <= x < 4.0 or (-tol < x < 0.0):
            return MoebiusClass("elliptic", fp)
        if x > 4.0:
            return MoebiusClass("hyperbolic", fp)
    return MoebiusClass("loxodromic", fp)


# ---------------------------------------------------------------------------
# Oriented circles


@dataclass(frozen=True)
class OrientedCircle:
    """Round circle with a chosen side, as a Hermitian matrix of det -1.

    The disk side is {p : p* H p < 0}.
    """

    hermitian: np.ndarray = field(repr=False)

    def __post_init__(self):
        h = np.asarray(self.hermitian, dtype=complex).reshape(2, 2)
        if np.linalg.norm(h - h.conj().T) > TOL_ALG * max(1.0, np.linalg.norm(h)):
            raise DegenerateInputError("matrix is not Hermitian")
        h = (h + h.conj().T) / 2.0
        det = (h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]).real
        if det >= -1e-300:
            raise DegenerateInputError("Hermitian form does not define a real circle (det >= 0)")
        h = h / math.sqrt(-det)
        h.setflags(write=False)
        object.__setattr__(self, "hermitian", h)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_center_radius(center: complex, radius: float, disk_inside: bool = True) -> "OrientedCircle":
        if radius <= 0:
            raise DegenerateInputError("radius must be positive")
        c = complex(center)
        h = np.array(
            [[1.0, -c], [-np.conj(c), abs(c) ** 2 - radius**2]],
            dtype=complex,
        )
        if not disk_inside:
            h = -h
        return OrientedCircle(h)

    @staticmethod
    def real_line(disk_upper: bool = True) -> "OrientedCircle":
        """The extended real line; disk side defaults to the upper half-plane."""
        h = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
        if not disk_upper:
            h = -h
        return OrientedCircle(h)

    # -- basic queries ------------------------------------------------------

    def evaluate(self, p: PointCP1) -> float:
        """Scale-invariant signed value of the Hermitian form at p."""
        v = p.normalized().vector()
        return float((np.conj(v) @ self.hermitian @ v).real)

    def side(self, p: PointCP1) -> int:
        val = self.evaluate(p)
        if abs(val) < TOL_GEO:
            return 0
        return -1 if val < 0 else 1

    def contains_in_disk(self, p: PointCP1, strict_margin: float = 0.0) -> bool:
        return self.evaluate(p) < -strict_margin

    def on_circle(self, p: PointCP1, tol: float = TOL_GEO) -> bool:
        return abs(self.evaluate(p)) < tol

    @property
    def is_line(self) -> bool:
        return abs(self.hermitian[0, 0].real) < TOL_GEO

    def center_radius(self) -> tuple[complex, float]:
        """Euclidean center and radius; raises for lines."""
        a = self.hermitian[0, 0].real
        if abs(a) < TOL_GEO:
            raise DegenerateInputError("circle is a line; no finite center")
        b = complex(self.hermitian[0, 1])
        return (-b / a, 1.0 / abs(a))

    def reversed(self) -> "OrientedCircle":
        return OrientedCircle(-self.hermitian)

    def transform(self, m: MoebiusMap) -> "OrientedCircle":
        """Push forward: the image circle of m with the image side."""
        minv = m.inverse().matrix
        return OrientedCircle(minv.conj().T @ self.hermitian @ minv)

    def boundary_points(self, n: int = 3) -> list[PointCP1]:
        """n points on the circle, positively ordered (disk on the left)."""
        if not self.is_line:
            c, r = self.center_radius()
            interior = self.hermitian[0, 0].real > 0
            # Counterclockwise keeps a bounded interior on the left.
            sign = 1.0 if interior else -1.0
            return [
                PointCP1.from_complex(c + r * cmath.exp(sign * 2j * math.pi * k / n))
                for k in range(n)
            ]
        bcoef = complex(self.hermitian[0, 1])
        dcoef = self.hermitian[1, 1].real
        z0 = -dcoef * bcoef / (2.0 * abs(bcoef) ** 2)
        direction = 1j * bcoef  # disk side (-B direction) lies on the left
        return [PointCP1.from_complex(z0 + k * direction) for k in range(-(n // 2), n - n // 2)]

    def sample_disk_point(self) -> PointCP1:
        """Some point strictly on the disk side."""
        if not self.is_line:
            c, r = self.center_radius()
            if self.hermitian[0, 0].real > 0:
                return PointCP1.from_complex(c)
            return INFINITY if abs(c) < 1e12 else PointCP1.from_complex(c + 3 * r)
        bcoef = complex(self.hermitian[0, 1])
        dcoef = self.hermitian[1, 1].real
        z0 = -dcoef * bcoef / (2.0 * abs(bcoef) ** 2)
        return PointCP1.from_complex(z0 - bcoef / abs(bcoef))

    def proj_distance(self, other: "OrientedCircle") -> float:
        return float(np.linalg.norm(self.hermitian - other.hermitian))

    def __repr__(self):
        if self.is_line:
            return "OrientedCircle(line)"
        c, r = self.center_radius()
        side = "interior" if self.hermitian[0, 0].real > 0 else "exterior"
        return f"OrientedCircle(center={c:.6g}, radius={r:.6g}, disk={side})"


@dataclass(frozen=True)
class RoundDisk:
    """A round disk: the chosen side of an oriented circle."""

    circle: OrientedCircle

    def contains(self, p: PointCP1, strict_margin: float = 0.0) -> bool:
        return self.circle.contains_in_disk(p, strict_margin)

    def transform(self, m: MoebiusMap) -> "RoundDisk":
        return RoundDisk(self.circle.transform(m))


def inversive_product(c1: OrientedCircle, c2: OrientedCircle) -> float:
    """Normalized inversive product; +1 for equal circles with equal
    orientation, 0 for orthogonal, |.| > 1 for disjoint circles."""
    h1, h2 = c1.hermitian, c2.hermitian
    a1, d1 = h1[0, 0].real, h1[1, 1].real
    a2, d2 = h2[0, 0].real, h2[1, 1].real
    b1, b2 = complex(h1[0, 1]), complex(h2[0, 1])
    return float((2.0 * (b1 * np.conj(b2)).real - a1 * d2 - a2 * d1) / 2.0)


def circle_through(p: PointCP1, q: PointCP1, r: PointCP1) -> OrientedCircle:
    """The round circle through three distinct points, oriented so (p, q, r)
    is positively ordered on the boundary (disk on the left)."""
    pts = [cp1(p), cp1(q), cp1(r)]
    for i in range(3):
        for j in range(i + 1, 3):
            if chordal_distance(pts[i], pts[j]) < TOL_GEO:
                raise DegenerateInputError("circle_through needs pairwise distinct points")
    rows = []
    for pt in pts:
        v = pt.normalized()
        w = np.conj(v.z0) * v.z1
        rows.append([abs(v.z0) ** 2, 2.0 * w.real, -2.0 * w.imag, abs(v.z1) ** 2])
    _, _, vh = np.linalg.svd(np.array(rows, dtype=float))
    a, bre, bim, d = vh[-1]
    h = np.array([[a, bre + 1j * bim], [bre - 1j * bim, d]], dtype=complex)
    circle = OrientedCircle(h)
    # Orientation: transport i by the inverse of (p,q,r) -> (0,1,infinity);
    # that sample must land on the disk side.
    t = moebius_three_points(*pts)
    sample = apply(t.inverse(), PointCP1.from_complex(1j))
    if circle.evaluate(sample) > 0:
        circle = circle.reversed()
    return circle


def angle_between(c1: OrientedCircle, c2: OrientedCircle, tol: float = TOL_GEO) -> float:
    """Oriented intersection angle in [0, pi]: the vertex angle of the
    crescent between the two disk sides.  Moebius invariant.

    Circles equal or tangent within tolerance get the limiting angle (0 or
    pi); an inversive product beyond 1 + tol means no intersection.
    """
    ip = inversive_product(c1, c2)
    if abs(ip) > 1.0 + tol:
        raise NoIntersectionError(f"circles do not intersect transversally (product {ip:.6g})")
    return math.acos(min(1.0, max(-1.0, ip)))


# ---------------------------------------------------------------------------
# Minimal enclosing disk (randomized incremental, deterministic seed)


@dataclass(frozen=True)
class MinimalDisk:
    center: complex
    radius: float
    support: tuple  # indices of <= 3 input points on the boundary


def _circumcircle(p: complex, q: complex, r: complex):
    ax, ay = p.real, p.imag
    bx, by = q.real, q.imag
    cx, cy = r.real, r.imag
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14 * max(abs(p - q), abs(q - r), abs(r - p), 1.0) ** 2:
        return None
    pa, pb, pc = abs(p) ** 2, abs(q) ** 2, abs(r) ** 2
    ux = (pa * (by - cy) + pb * (cy - ay) + pc * (ay - by)) / d
    uy = (pa * (cx - bx) + pb * (ax - cx) + pc * (bx - ax)) / d
    center = complex(ux, uy)
    return center, max(abs(p - center), abs(q - center), abs(r - center))


def _disk_two(p: complex, q: complex):
    center = (p + q) / 2.0
    return center, abs(p - q) / 2.0


def _contains(center, radius, p, eps):
    return abs(p - center) <= radius * (1.0 + eps) + eps


def minimal_enclosing_disk(points, seed: int = 0) -> MinimalDisk:
    """Smallest closed disk containing all (finite) points.

    Randomized incremental construction with a fixed seed for reproducible
    intermediate states; the result itself is unique.
    """
    pts = [complex(p) for p in points]
    if not pts:
        raise DegenerateInputError("minimal_enclosing_disk of empty set")
    for p in pts:
        if not (math.isfinite(p.real) and math.isfinite(p.imag)):
            raise DegenerateInputError("minimal_enclosing_disk requires finite points")
    scale = max(1.0, max(abs(p) for p in pts))
    eps = 1e-12

    order = list(range(len(pts)))
    random.Random(seed).shuffle(order)

    def med_two_known(limit, i1, i2):
        c, r = _disk_two(pts[i1], pts[i2])
        sup = (i1, i2)
        for k in range(limit):
            i = order[k]
            if not _contains(c, r, pts[i], eps):
                cc = _circumcircle(pts[i1], pts[i2], pts[i])
                if cc is None:
                    # Collinear support: widest pair wins.
                    best = max(
                        ((a, b) for a in (i1, i2, i) for b in (i1, i2, i)),
                        key=lambda ab: abs(pts[ab[0]] - pts[ab[1]]),
                    )
                    c, r = _disk_two(pts[best[0]], pts[best[1]])
                    sup = best
                else:
                    c, r = cc
                    sup = (i1, i2, i)
        return c, r, sup

    def med_one_known(limit, i1):
        c, r = pts[i1], 0.0
        sup = (i1,)
        for k in range(limit):
            i = order[k]
            if not _contains(c, r, pts[i], eps):
                c, r, sup = med_two_known(k, i1, i)
        return c, r, sup

    c, r = pts[order[0]], 0.0
    sup = (order[0],)
    for k in range(1, len(order)):
        i = order[k]
        if not _contains(c, r, pts[i], eps):
            c, r, sup = med_one_known(k, i)

    # Tidy the support set: keep boundary contacts only.
    boundary = tuple(
        j for j in sorted(set(sup)) if abs(abs(pts[j] - c) - r) <= 1e-9 * max(scale, r, 1.0)
    )
    if not boundary:
        boundary = tuple(sorted(set(sup)))
    return MinimalDisk(center=c, radius=float(r), support=boundary)
