"""Grafting along weighted multicurves on a Fuchsian base: leaf lifts,
crossing enumeration, the bending cocycle deforming the holonomy, pleated
surface meshes, developing-map continuation, and the collapsing map.

Coordinates: the hyperbolic plane is the upper half-plane UHP in C, embedded
in H^3 as the vertical plane over the real axis.  Leaf lifts are geodesics
with real ideal endpoints (axes of conjugates of the multicurve words).

Sign convention: a crossing counts positive when the oriented leaf (from
repelling to attracting fixed point) passes left-to-right across the
oriented segment, and the bending rotation about the leaf uses that sign.
The opposite convention would produce the complex-conjugate structures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .moebius import (
    TOL_ALG,
    TOL_GEO,
    DegenerateInputError,
    MoebiusMap,
    OrientedCircle,
    PointCP1,
    apply,
    classify,
    cp1,
)
from .hyperbolic import (
    GeodesicH3,
    PlaneH3,
    PointH3,
    apply_isometry,
    rotation_about_geodesic,
)
from .surface import (
    FuchsianHolonomy,
    GroupWord,
    Representation,
    axis,
    LETTER_ORDER,
)


class InvalidMulticurveError(ValueError):
    """Entries whose geodesic representatives intersect (or are not simple)."""


class PerturbInputError(ValueError):
    """A segment endpoint lies on a lifted leaf; carries a suggested offset."""

    def __init__(self, message: str, suggested_offset: complex):
        super().__init__(message)
        self.suggested_offset = suggested_offset


class LiftFailure(RuntimeError):
    """Analytic continuation left the validity range of a crescent chart."""


def embed_cp1(z: complex) -> PointCP1:
    return PointCP1.from_complex(z)


def embed_h3(z: complex) -> PointH3:
    """UHP point as a point of the vertical plane over the real axis."""
    if z.imag <= 0:
        raise DegenerateInputError("point must lie in the upper half-plane")
    return PointH3(complex(z.real, 0.0), z.imag)


# ---------------------------------------------------------------------------
# Multicurves and lifted leaves


@dataclass(frozen=True)
class WeightedMulticurve:
    """Disjoint simple closed geodesics named by group words, with weights
    in radians (weight 0 entries are allowed and act trivially)."""

    entries: tuple  # of (GroupWord, float)

    def __post_init__(self):
        ents = []
        for word, weight in self.entries:
            if not isinstance(word, GroupWord):
                word = GroupWord.parse(str(word))
            w = float(weight)
            if w < 0:
                raise InvalidMulticurveError("weights must be nonnegative")
            ents.append((word, w))
        object.__setattr__(self, "entries", tuple(ents))

    @property
    def words(self):
        return tuple(w for w, _ in self.entries)

    @property
    def weights(self):
        return tuple(t for _, t in self.entries)

    def weight_of(self, word: GroupWord) -> float:
        for w, t in self.entries:
            if w.letters == word.letters:
                return t
        raise KeyError(f"curve {word} is not in the multicurve")


@dataclass(frozen=True)
class LiftedLeaf:
    """A lift of a multicurve leaf: the axis of a conjugate w g w^-1,
    oriented from repelling to attracting fixed point."""

    geodesic: GeodesicH3
    weight: float
    curve_index: int
    conjugator: GroupWord

    @cached_property
    def circle(self) -> OrientedCircle:
        return _geodesic_circle(self.geodesic)

    def key(self):
        a = tuple(np.round(self.geodesic.p.sphere_coords(), 9))
        b = tuple(np.round(self.geodesic.q.sphere_coords(), 9))
        return (self.curve_index, min(a, b), max(a, b))


def _geodesic_circle(g: GeodesicH3) -> OrientedCircle:
    """The circle through the (real) ideal endpoints orthogonal to the real
    axis; the disk side is fixed but unused (only signs of sides matter)."""
    if g.p.is_infinity or g.q.is_infinity:
        finite = g.q if g.p.is_infinity else g.p
        a = finite.as_complex().real
        # Vertical line Re z = a.
        h = np.array([[0.0, 1.0], [1.0, -2.0 * a]], dtype=complex)
        return OrientedCircle(h)
    a = g.p.as_complex().real
    b = g.q.as_complex().real
    c, r = (a + b) / 2.0, abs(b - a) / 2.0
    if r < TOL_GEO:
        raise DegenerateInputError("degenerate leaf endpoints")
    return OrientedCircle.from_center_radius(c, r)


def _real_normalizer(u: PointCP1, v: PointCP1) -> MoebiusMap:
    """Real Moebius map with u -> 0, v -> infinity preserving UHP."""
    if u.is_infinity:
        vv = v.as_complex().real
        return MoebiusMap(np.array([[0.0, 1.0], [-1.0, vv]], dtype=complex))
    if v.is_infinity:
        uu = u.as_complex().real
        return MoebiusMap(np.array([[1.0, -uu], [0.0, 1.0]], dtype=complex))
    uu, vv = u.as_complex().real, v.as_complex().real
    if vv > uu:
        return MoebiusMap(np.array([[1.0, -uu], [-1.0, vv]], dtype=complex))
    return MoebiusMap(np.array([[1.0, -uu], [1.0, -vv]], dtype=complex))


def hyperbolic_distance_uhp(z: complex, w: complex) -> float:
    x = 1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag)
    return math.acosh(max(x, 1.0))


def distance_to_leaf(z: complex, leaf_geodesic: GeodesicH3) -> float:
    """Hyperbolic distance from a UHP point to a geodesic with real endpoints."""
    n = _real_normalizer(leaf_geodesic.p, leaf_geodesic.q)
    w = n(z)
    return math.asinh(abs(w.real) / w.imag)


def uhp_geodesic_point(p: complex, q: complex, s: float) -> complex:
    """Constant-speed point at parameter s in [0,1] on the H^2 geodesic p->q."""
    a = embed_h3(p)
    b = embed_h3(q)
    from .hyperbolic import geodesic_point

    g = geodesic_point(a, b, s)
    return complex(g.z.real, g.t)


def enumerate_leaf_lifts(
    hol: FuchsianHolonomy,
    mc: WeightedMulticurve,
    depth: int,
    focus: list[complex],
    margin: float = 4.0,
    max_elements: int = 500_000,
) -> list[LiftedLeaf]:
    """All distinct lifts w . axis(gamma_i) for conjugators w of length <=
    depth whose orbit point stays within reach of the focus set.

    Any leaf crossing the focus region has a conjugator representative
    (slide along the curve's own powers) whose orbit point comes within
    d(x0, axis) + length/2 of the crossing, so pruning the BFS at that
    radius plus a hyperbolicity margin keeps every relevant prefix chain.
    """
    x0 = hol.basepoint
    base_axes = []
    half_lengths = []
    for word, weight in mc.entries:
        m = hol.rho(word)
        cls = classify(m)
        if cls.kind not in ("hyperbolic", "loxodromic"):
            raise InvalidMulticurveError(f"curve {word} is not hyperbolic ({cls.kind})")
        base_axes.append(axis(m))
        t2 = m.trace_squared().real
        half_lengths.append(math.acosh(math.sqrt(max(t2, 4.0)) / 2.0))

    reach = max(distance_to_leaf(x0, g) for g in base_axes) if base_axes else 0.0
    radius = reach + (max(half_lengths) if half_lengths else 0.0) + margin

    # BFS over group elements, deduplicated by sign-normalized matrices.
    letters = {l: hol.generator(l) for l in LETTER_ORDER}
    seen_elements = {MoebiusMap.identity().matrix.round(9).tobytes()}
    frontier = [(MoebiusMap.identity(), GroupWord(()))]
    elements = [(MoebiusMap.identity(), GroupWord(()))]
    targets = [x0] + list(focus)
    for _ in range(depth):
        nxt = []
        for m, word in frontier:
            for l in LETTER_ORDER:
                if word.letters and word.letters[-1] == -l:
                    continue
                m2 = m @ letters[l]
                key = m2.matrix.round(9).tobytes()
                if key in seen_elements:
                    continue
                orbit = m2(x0)
                if min(hyperbolic_distance_uhp(orbit, f) for f in targets) > radius:
                    continue
                seen_elements.add(key)
                w2 = GroupWord(word.letters + (l,))
                nxt.append((m2, w2))
                elements.append((m2, w2))
                if len(elements) > max_elements:
                    raise RuntimeError(
                        f"leaf lift enumeration exceeded {max_elements} elements"
                    )
        frontier = nxt

    leaves = []
    seen_axes = set()
    for m, word in elements:
        for i, (g, weight) in enumerate(zip(base_axes, mc.weights)):
            try:
                moved = g.transform(m)
                leaf = LiftedLeaf(geodesic=moved, weight=weight, curve_index=i, conjugator=word)
                leaf.circle  # force construction; degenerate axes are skipped
            except DegenerateInputError:
                # Endpoints contracted below resolution: the lift is too deep
                # in a funnel to cross anything near the focus.
                continue
            k = leaf.key()
            if k not in seen_axes:
                seen_axes.add(k)
                leaves.append(leaf)
    leaves.sort(key=lambda lf: lf.key())
    return leaves


def check_multicurve(hol: FuchsianHolonomy, mc: WeightedMulticurve, depth: int = 4):
    """Raise InvalidMulticurveError when any two leaf lifts (up to the given
    conjugation depth) cross transversally."""
    leaves = enumerate_leaf_lifts(hol, mc, depth, focus=[hol.basepoint], margin=8.0)
    ends = []
    for leaf in leaves:
        ends.append((leaf.geodesic.p, leaf.geodesic.q))
    # Move all endpoints away from infinity with a real Moebius map.
    finite_vals = [
        e.as_complex().real for pair in ends for e in pair if not e.is_infinity
    ]
    mu = max((abs(v) for v in finite_vals), default=0.0) + 1.618033988749895
    reals = []
    for p, q in ends:
        def shift(e):
            if e.is_infinity:
                return 0.0
            return -1.0 / (e.as_complex().real - mu)
        reals.append(sorted((shift(p), shift(q))))
    arr = np.array(reals)  # (L, 2) sorted endpoint intervals
    lo, hi = arr[:, 0], arr[:, 1]
    inside_lo = (lo[:, None] < lo[None, :]) & (lo[None, :] < hi[:, None])
    inside_hi = (lo[:, None] < hi[None, :]) & (hi[None, :] < hi[:, None])
    linked = inside_lo ^ inside_hi
    crossings = np.argwhere(np.triu(linked, k=1))
    if len(crossings):
        i, j = crossings[0]
        raise InvalidMulticurveError(
            f"leaf lifts intersect: {leaves[int(i)].conjugator}*curve{leaves[int(i)].curve_index} "
            f"crosses {leaves[int(j)].conjugator}*curve{leaves[int(j)].curve_index}"
        )


# ---------------------------------------------------------------------------
# Crossings along a segment


@dataclass(frozen=True)
class Crossing:
    leaf: LiftedLeaf
    parameter: float  # position along the segment in [0, 1]
    sign: int  # +1: leaf crosses left-to-right across the oriented segment

    @property
    def rotation_angle(self) -> float:
        return self.sign * self.leaf.weight


def _segment_frame(p: complex, q: complex) -> MoebiusMap:
    """Real Moebius map sending the oriented geodesic through p, q to the
    upward vertical axis (p strictly below q)."""
    from .surface import geodesic_through_uhp

    g = geodesic_through_uhp(p, q)
    return _real_normalizer(g.p, g.q)


def _crossing_sign(frame: MoebiusMap, leaf: LiftedLeaf) -> int:
    att = apply(frame, leaf.geodesic.q)
    if att.is_infinity:
        val = math.inf
    else:
        val = att.as_complex().real
    return 1 if val > 0 else -1


def lift_crossings(
    hol: FuchsianHolonomy,
    p: complex,
    q: complex,
    mc: WeightedMulticurve,
    depth: int,
    leaves: list[LiftedLeaf] | None = None,
) -> list[Crossing]:
    """Lifted leaves crossing the geodesic segment [p, q], ordered along it.

    Endpoints must keep clear of every leaf; an endpoint within TOL_GEO of
    a leaf raises PerturbInputError with a suggested offset.
    """
    if leaves is None:
        leaves = enumerate_leaf_lifts(hol, mc, depth, focus=[p, q])
    for z, name in ((p, "start"), (q, "end")):
        for leaf in leaves:
            if distance_to_leaf(z, leaf.geodesic) < TOL_GEO:
                raise PerturbInputError(
                    f"segment {name}point lies on a lifted leaf",
                    suggested_offset=perturbation_offset(z, leaves),
                )
    frame = _segment_frame(p, q)
    out = []
    for leaf in leaves:
        sp = leaf.circle.evaluate(embed_cp1(p))
        sq = leaf.circle.evaluate(embed_cp1(q))
        if sp * sq >= 0:
            continue
        # Bisection on the sign of the side value along the segment.
        lo, hi, flo = 0.0, 1.0, sp
        for _ in range(60):
            mid = (lo + hi) / 2.0
            fm = leaf.circle.evaluate(embed_cp1(uhp_geodesic_point(p, q, mid)))
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        t = (lo + hi) / 2.0
        out.append(Crossing(leaf=leaf, parameter=t, sign=_crossing_sign(frame, leaf)))
    out.sort(key=lambda c: c.parameter)
    return out


def perturbation_offset(z: complex, leaves: list[LiftedLeaf]) -> complex:
    """Deterministic offset (multiples of 1e-4) moving z off every leaf."""
    direction = complex(0.7548776662466927, 0.6557406991565868)
    for k in range(1, 64):
        cand = z + k * 1e-4 * direction
        if cand.imag <= 0:
            cand = complex(cand.real, z.imag)
        if all(distance_to_leaf(cand, lf.geodesic) > 10 * TOL_GEO for lf in leaves):
            return cand - z
    raise DegenerateInputError("could not perturb the basepoint off the leaves")


# ---------------------------------------------------------------------------
# The grafted structure and its deformed holonomy


@dataclass(frozen=True)
class CrescentChart:
    """The strip R x [0, theta] developing by exp; the natural transverse
    measure of the horizontal foliation is the difference of heights."""

    theta: float

    def __post_init__(self):
        if self.theta <= 0:
            raise DegenerateInputError("crescent angle must be positive")

    def develop(self, x: float, y: float) -> PointCP1:
        return crescent_develop(self.theta, (x, y))


def crescent_develop(theta: float, point) -> PointCP1:
    """Developing map of the angle-theta crescent at (x, y), y in [0, theta]."""
    x, y = point
    if y < -TOL_ALG or y > theta + TOL_ALG:
        raise LiftFailure(f"point height {y} outside crescent chart [0, {theta}]")
    return PointCP1.from_complex(cmath.exp(complex(x, y)))


@dataclass(frozen=True)
class DeformedHolonomy(Representation):
    """Holonomy deformed by a bending cocycle (values in PSL(2,C))."""


@dataclass(frozen=True)
class GraftedStructure:
    """A Fuchsian structure grafted along a weighted multicurve.

    The deformed holonomy is computed lazily from the bending cocycle and
    cached (construction is pure, so double initialization is harmless).
    """

    hol: FuchsianHolonomy
    multicurve: WeightedMulticurve
    depth: int = 8

    @cached_property
    def base_leaves(self) -> tuple:
        """Leaf lifts around the basepoint, reused by holonomy and meshes."""
        x0 = self.hol.basepoint
        focus = [x0]
        for l in LETTER_ORDER:
            target = self.hol.generator(l)(x0)
            focus.append(target)
            for s in (0.25, 0.5, 0.75):
                focus.append(uhp_geodesic_point(x0, target, s))
        return tuple(
            enumerate_leaf_lifts(self.hol, self.multicurve, self.depth, focus=focus)
        )

    @cached_property
    def basepoint(self) -> complex:
        x0 = self.hol.basepoint
        leaves = self.base_leaves
        if all(distance_to_leaf(x0, lf.geodesic) > TOL_GEO for lf in leaves):
            return x0
        return x0 + perturbation_offset(x0, list(leaves))

    @cached_property
    def rho_prime(self) -> DeformedHolonomy:
        return grafted_holonomy(self.hol, self.multicurve, self.depth, structure=self)

    def crossings_to(self, z: complex) -> list[Crossing]:
        x0 = self.basepoint
        focus = [x0, z] + [uhp_geodesic_point(x0, z, s) for s in (0.25, 0.5, 0.75)]
        leaves = enumerate_leaf_lifts(self.hol, self.multicurve, self.depth, focus=focus)
        return lift_crossings(
            self.hol, x0, z, self.multicurve, self.depth, leaves=leaves
        )

    def bending_map(self, z: complex) -> MoebiusMap:
        """Ordered product of bending rotations along [basepoint, z]."""
        m = MoebiusMap.identity()
        for crossing in self.crossings_to(z):
            m = m @ rotation_about_geodesic(crossing.leaf.geodesic, crossing.rotation_angle)
        return m

    def develop(self, z: complex) -> PointCP1:
        """Developing map on strata, continued from the base stratum."""
        return apply(self.bending_map(z), embed_cp1(z))

    def all_weights_two_pi_multiples(self, tol: float = 1e-9) -> bool:
        return all(
            abs(t / (2.0 * math.pi) - round(t / (2.0 * math.pi))) < tol
            for t in self.multicurve.weights
        )


def grafted_holonomy(
    hol: FuchsianHolonomy,
    mc: WeightedMulticurve,
    depth: int = 8,
    structure: GraftedStructure | None = None,
) -> DeformedHolonomy:
    """Deformed holonomy: for each generator g the bending cocycle along
    [x0, rho(g) x0] multiplies rho(g) on the left.

    With all weights in 2 pi Z the result is projectively the input; the
    cocycle construction preserves the surface relation for any weights.
    """
    check_multicurve(hol, mc, depth=min(depth, 4))
    gs = structure if structure is not None else GraftedStructure(hol, mc, depth)
    x0 = gs.basepoint
    leaves = list(gs.base_leaves)
    gens = []
    for i in range(4):
        g = hol.generators[i]
        target = g(x0)
        crossings = [
            c for c in lift_crossings(hol, x0, target, mc, depth, leaves=leaves)
            if c.leaf.weight != 0.0
        ]
        if not crossings:
            gens.append(g)  # empty deformation: exactly the input
            continue
        b = MoebiusMap.identity()
        for crossing in crossings:
            b = b @ rotation_about_geodesic(crossing.leaf.geodesic, crossing.rotation_angle)
        gens.append(b @ g)
    return DeformedHolonomy(generators=tuple(gens), basepoint=x0)


# ---------------------------------------------------------------------------
# Pleated surface meshes


@dataclass(frozen=True)
class PleatedFace:
    region_id: int
    entering_leaf: LiftedLeaf | None  # None for the base stratum
    isometry: MoebiusMap  # accumulated bending applied to the flat plane
    sample: complex  # interior point of the stratum, UHP coordinates
    polygon: tuple  # truncated boundary polygon, UHP coordinates

    @property
    def plane(self) -> PlaneH3:
        return PlaneH3(OrientedCircle.real_line(disk_upper=True).transform(self.isometry))

    def image_polygon(self) -> list[PointH3]:
        return [apply_isometry(self.isometry, embed_h3(z)) for z in self.polygon]


@dataclass(frozen=True)
class PleatedEdge:
    leaf: LiftedLeaf
    face_ids: tuple  # (outer face, inner face) across the leaf
    weight: float


@dataclass(frozen=True)
class PleatedSurfaceMesh:
    structure: GraftedStructure
    truncation_radius: float
    faces: tuple
    edges: tuple

    @property
    def rho_prime(self) -> DeformedHolonomy:
        return self.structure.rho_prime

    def beta(self, z: complex) -> PointH3:
        """Pointwise pleated surface: bend the flat embedding along the
        leaves crossed between the basepoint and z."""
        b = self.structure.bending_map(z)
        return apply_isometry(b, embed_h3(z))


def _hyperbolic_circle_euclidean(center: complex, radius: float):
    """Euclidean center and radius of the hyperbolic circle in UHP."""
    a, b = center.real, center.imag
    return complex(a, b * math.cosh(radius)), b * math.sinh(radius)


def _circle_circle_points(c1: complex, r1: float, c2: complex, r2: float):
    d = abs(c2 - c1)
    if d < 1e-15 or d > r1 + r2 or d < abs(r1 - r2):
        return []
    u = (c2 - c1) / d
    x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - x * x
    if h2 < 0:
        return []
    h = math.sqrt(h2)
    base = c1 + u * x
    off = 1j * u * h
    return [base + off, base - off]


def _leaf_truncation_chord(leaf: LiftedLeaf, ecenter: complex, eradius: float):
    circ = leaf.circle
    if circ.is_line:
        # Vertical leaf Re z = a.
        a = -circ.hermitian[1, 1].real / (2.0 * circ.hermitian[0, 1].real)
        dx = a - ecenter.real
        h2 = eradius * eradius - dx * dx
        if h2 <= 0:
            return []
        h = math.sqrt(h2)
        return [complex(a, ecenter.imag - h), complex(a, ecenter.imag + h)]
    c, r = circ.center_radius()
    return _circle_circle_points(c, r, ecenter, eradius)


def pleated_surface(
    hol: FuchsianHolonomy,
    mc: WeightedMulticurve,
    depth: int = 8,
    truncation_radius: float = 3.0,
    structure: GraftedStructure | None = None,
) -> PleatedSurfaceMesh:
    """Equivariant pleated surface: strata of (H^2, lifted leaves) within the
    truncation radius of the basepoint, each carried into H^3 by the bending
    accumulated from the base stratum; adjacent faces differ by a single
    rotation about the shared leaf by its weight."""
    gs = structure if structure is not None else GraftedStructure(hol, mc, depth)
    x0 = gs.basepoint
    leaves = [
        lf for lf in gs.base_leaves
        if distance_to_leaf(x0, lf.geodesic) < truncation_radius
    ]
    if truncation_radius <= 0:
        raise DegenerateInputError("truncation radius must be positive")

    # Separation structure: leaves separating x0 from each leaf.
    feet = []
    for lf in leaves:
        n = _real_normalizer(lf.geodesic.p, lf.geodesic.q)
        w = n(x0)
        feet.append(n.inverse()(1j * abs(w)))

    def separates(a_idx: int, z: complex) -> bool:
        circ = leaves[a_idx].circle
        return circ.evaluate(embed_cp1(x0)) * circ.evaluate(embed_cp1(z)) < 0

    separators = []
    for i, lf in enumerate(leaves):
        seps = [
            j for j in range(len(leaves))
            if j != i and separates(j, feet[i])
        ]
        separators.append(seps)

    ecenter, eradius = _hyperbolic_circle_euclidean(x0, truncation_radius)

    # Faces: base stratum plus one region behind each leaf.
    faces = []
    edges = []
    face_id_of_leaf = {}

    base_chords = [
        _leaf_truncation_chord(lf, ecenter, eradius)
        for lf in leaves
    ]

    def region_polygon(signature_point: complex, bounding: list[int]) -> tuple:
        pts = []
        for j in bounding:
            pts.extend(base_chords[j])
        # Truncation arc samples belonging to this region.
        for k in range(96):
            zz = ecenter + eradius * cmath.exp(2j * math.pi * k / 96.0)
            if zz.imag <= 0:
                continue
            same = all(
                (leaves[j].circle.evaluate(embed_cp1(zz)) > 0)
                == (leaves[j].circle.evaluate(embed_cp1(signature_point)) > 0)
                for j in range(len(leaves))
            )
            if same:
                pts.append(zz)
        if not pts:
            return ()
        ref = signature_point
        pts.sort(key=lambda zz: math.atan2((zz - ref).imag, (zz - ref).real))
        return tuple(pts)

    # Base stratum.
    root_bounding = [i for i in range(len(leaves)) if not separators[i]]
    faces.append(
        PleatedFace(
            region_id=0,
            entering_leaf=None,
            isometry=MoebiusMap.identity(),
            sample=x0,
            polygon=region_polygon(x0, root_bounding),
        )
    )

    order = sorted(range(len(leaves)), key=lambda i: len(separators[i]))
    for i in order:
        lf = leaves[i]
        # Interior sample just beyond the leaf, on the far side from x0.
        n = _real_normalizer(lf.geodesic.p, lf.geodesic.q)
        w = n(x0)
        step = -0.35 * math.copysign(1.0, w.real)
        sample = n.inverse()(abs(w) * cmath.exp(1j * (math.pi / 2.0 - step * 0.5)))
        if separates(i, sample) is False:
            sample = n.inverse()(abs(w) * cmath.exp(1j * (math.pi / 2.0 + step * 0.5)))
        crossings = lift_crossings(
            hol, x0, sample, mc, depth=gs.depth, leaves=list(gs.base_leaves)
        )
        b = MoebiusMap.identity()
        for crossing in crossings:
            b = b @ rotation_about_geodesic(crossing.leaf.geodesic, crossing.rotation_angle)
        children = [
            j for j in range(len(leaves))
            if j != i and i in separators[j] and len(separators[j]) == len(separators[i]) + 1
        ]
        fid = len(faces)
        face_id_of_leaf[i] = fid
        faces.append(
            PleatedFace(
                region_id=fid,
                entering_leaf=lf,
                isometry=b,
                sample=sample,
                polygon=region_polygon(sample, [i] + children),
            )
        )

    for i, lf in enumerate(leaves):
        inner = face_id_of_leaf[i]
        seps = separators[i]
        if not seps:
            outer = 0
        else:
            outermost = max(seps, key=lambda j: len(separators[j]))
            outer = face_id_of_leaf[outermost]
        edges.append(PleatedEdge(leaf=lf, face_ids=(outer, inner), weight=lf.weight))

    return PleatedSurfaceMesh(
        structure=gs,
        truncation_radius=truncation_radius,
        faces=tuple(faces),
        edges=tuple(edges),
    )


# ---------------------------------------------------------------------------
# Developing-map continuation and the collapsing map


@dataclass(frozen=True)
class LiftResult:
    endpoint: PointCP1
    ok: bool
    crossings: tuple
    messages: tuple = ()


def develop_and_lift(
    gs: GraftedStructure,
    path: list[complex],
    wraps: list[int] | None = None,
) -> LiftResult:
    """Continue the developing map along a polygonal path in the collapsed
    coordinates, inserting the crescent continuation at each leaf crossing.

    wraps[k] declares the winding of the k-th crossing through its crescent;
    it must be a nonnegative integer below weight/(2 pi) + 1, and the
    continuation fails (chart exit) when 2 pi wraps exceeds the weight.
    """
    if len(path) < 1:
        raise DegenerateInputError("empty path")
    crossings = []
    b = MoebiusMap.identity()
    leaves = enumerate_leaf_lifts(
        gs.hol, gs.multicurve, gs.depth, focus=list(path) + [gs.basepoint]
    )
    for p, q in zip(path, path[1:]):
        if hyperbolic_distance_uhp(p, q) < 1e-14:
            continue
        segment_crossings = lift_crossings(
            gs.hol, p, q, gs.multicurve, gs.depth, leaves=leaves
        )
        crossings.extend(segment_crossings)
    messages = []
    ok = True
    for k, crossing in enumerate(crossings):
        theta = crossing.leaf.weight
        wrap = 0 if wraps is None or k >= len(wraps) else int(wraps[k])
        if wrap < 0 or not wrap < theta / (2.0 * math.pi) + 1.0:
            raise DegenerateInputError(
                f"wrap count {wrap} inconsistent with weight {theta:.6g}"
            )
        if 2.0 * math.pi * wrap > theta + TOL_ALG:
            ok = False
            messages.append(
                f"crossing {k}: declared wrap {wrap} exits chart [0, {theta:.6g}]"
            )
        b = b @ rotation_about_geodesic(crossing.leaf.geodesic, crossing.rotation_angle)
    endpoint = apply(b, embed_cp1(path[-1]))
    return LiftResult(
        endpoint=endpoint, ok=ok, crossings=tuple(crossings), messages=tuple(messages)
    )


@dataclass(frozen=True)
class StratumPoint:
    z: complex


@dataclass(frozen=True)
class CrescentPoint:
    """Point of an inserted crescent in leaf-adapted coordinates: x is the
    arclength along the leaf (origin at the foot of the basepoint), y the
    transverse height in [0, weight]."""

    leaf: LiftedLeaf
    x: float
    y: float


def leaf_normalizer(gs: GraftedStructure, leaf: LiftedLeaf) -> MoebiusMap:
    """Canonical frame of a leaf: axis to (0, infinity), basepoint foot to i."""
    n = _real_normalizer(leaf.geodesic.p, leaf.geodesic.q)
    w = n(gs.basepoint)
    s = 1.0 / math.sqrt(abs(w))
    scale = MoebiusMap(np.array([[s, 0.0], [0.0, 1.0 / s]], dtype=complex))
    return scale @ n


def collapse(gs: GraftedStructure, point) -> complex:
    """Collapsing map to the hyperbolic base: identity on strata; a crescent
    point (x, y) maps to the leaf point at arclength x for every y."""
    if isinstance(point, StratumPoint):
        return point.z
    if isinstance(point, CrescentPoint):
        theta = point.leaf.weight
        if point.y < -TOL_ALG or point.y > theta + TOL_ALG:
            raise LiftFailure(f"crescent height {point.y} outside [0, {theta:.6g}]")
        n = leaf_normalizer(gs, point.leaf)
        return n.inverse()(1j * math.exp(point.x))
    raise TypeError(f"not a grafted-surface point: {point!r}")
