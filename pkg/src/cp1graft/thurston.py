"""Inverse direction at desk scale: maximal disks via normalized minimal
enclosing disks, ideal points and cores, stratification checks, the
transverse bending measure, the nearest-point projection, recovery of
grafting weights, and path-lifting verification in the discontinuity domain.

Domains are finite-data models: either a finite ideal set Lambda (the domain
is its complement) or a compact convex polygon complement sampled along its
boundary.  Ideal points of maximal disks are realized as contact points of
the transported complement with the minimal enclosing circle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .moebius import (
    TOL_GEO,
    DegenerateInputError,
    MinimalDisk,
    MoebiusMap,
    NoIntersectionError,
    OrientedCircle,
    PointCP1,
    RoundDisk,
    angle_between,
    apply,
    chordal_distance,
    cp1,
    inversive_product,
    minimal_enclosing_disk,
)
from .hyperbolic import PlaneH3, PointH3, nearest_point_projection
from .surface import GroupWord, limit_set_sample
from .grafting import (
    GraftedStructure,
    LiftedLeaf,
    enumerate_leaf_lifts,
    leaf_normalizer,
    lift_crossings,
)

TOL_CONTACT = 1e-6  # relative band for boundary-contact detection
TOL_MEASURE = 1e-5


class PreconditionError(ValueError):
    """Input violates a stated precondition (guard, not a theorem failure)."""


class TransversalityError(RuntimeError):
    """Consecutive maximal disks failed to intersect at maximal refinement."""


# ---------------------------------------------------------------------------
# Domains


@dataclass(frozen=True)
class DiskComplementDomain:
    """Domain U = CP^1 minus a finite complement sample.

    Two models: a finite ideal set (the complement itself), or a convex
    compact polygon whose boundary is sampled at a fixed density.
    """

    complement: tuple  # PointCP1
    kind: str = "ideal_points"

    def __post_init__(self):
        pts = tuple(cp1(p) for p in self.complement)
        if len(pts) < 2:
            raise DegenerateInputError("complement must contain more than one point")
        object.__setattr__(self, "complement", pts)

    @staticmethod
    def from_ideal_points(points) -> "DiskComplementDomain":
        return DiskComplementDomain(tuple(points), kind="ideal_points")

    @staticmethod
    def from_polygon(vertices, samples_per_edge: int = 32) -> "DiskComplementDomain":
        """Convex compact polygon K in C; the complement is realized by its
        vertices plus evenly spaced boundary samples."""
        verts = [complex(v) for v in vertices]
        if len(verts) < 2:
            raise DegenerateInputError("polygon needs at least 2 vertices")
        pts = []
        n = len(verts)
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            for k in range(samples_per_edge):
                pts.append(a + (b - a) * k / samples_per_edge)
        return DiskComplementDomain(tuple(pts), kind="polygon")

    def contains(self, x: PointCP1, margin: float = TOL_GEO) -> bool:
        x = cp1(x)
        return all(chordal_distance(x, p) > margin for p in self.complement)


# ---------------------------------------------------------------------------
# Maximal disks


@dataclass(frozen=True)
class CoreRegion:
    """Hyperbolic convex hull of the ideal points inside the maximal disk,
    represented in a unit-disk frame (query point at the origin)."""

    frame: MoebiusMap  # original coordinates -> unit disk, query -> 0
    boundary_angles: tuple  # ideal points as angles on the unit circle
    edges: tuple  # OrientedCircle per hull edge, core on the disk side

    def contains(self, p: PointCP1, tol: float = TOL_GEO) -> bool:
        q = apply(self.frame, cp1(p))
        if q.is_infinity or abs(q.as_complex()) >= 1.0:
            return False
        if len(self.boundary_angles) == 2:
            return abs(self.edges[0].evaluate(q)) < tol
        return all(e.evaluate(q) < tol for e in self.edges)


@dataclass(frozen=True)
class MaximalDiskRecord:
    disk: RoundDisk  # oriented: disk side is the maximal disk
    ideal_points: tuple  # contact points of the complement, original coords
    core: CoreRegion
    normalized: MinimalDisk  # enclosing disk of the transported complement
    query: PointCP1

    def same_disk(self, other: "MaximalDiskRecord", tol: float = 1e-6) -> bool:
        return self.disk.circle.proj_distance(other.disk.circle) < tol


def _normalizer_to_infinity(x: PointCP1) -> MoebiusMap:
    x = cp1(x)
    if x.is_infinity:
        return MoebiusMap.identity()
    z = x.as_complex()
    return MoebiusMap(np.array([[0.0, 1.0], [1.0, -z]], dtype=complex))


def _poincare_geodesic(u: complex, v: complex) -> OrientedCircle:
    """Geodesic of the unit disk between boundary points u, v, as the circle
    orthogonal to the unit circle (or a diameter)."""
    denom = 1.0 + (u * np.conj(v)).real
    if abs(denom) < 1e-12:
        # Diameter through u and -u: the line through the origin.
        h = np.array([[0.0, 1j * u], [-1j * np.conj(u), 0.0]], dtype=complex)
        return OrientedCircle(h)
    m = (u + v) / denom
    r2 = abs(m) ** 2 - 1.0
    if r2 <= 0:
        raise DegenerateInputError("degenerate hull edge")
    return OrientedCircle.from_center_radius(m, math.sqrt(r2))


def maximal_disk_at(
    dom: DiskComplementDomain,
    x,
    seed: int = 0,
    tol_contact: float = TOL_CONTACT,
) -> MaximalDiskRecord:
    """The maximal disk whose core contains x: normalize x to infinity, take
    the minimal enclosing disk of the transported complement, and return its
    complement; ideal points are the boundary contacts."""
    x = cp1(x)
    if not dom.contains(x):
        raise PreconditionError("query point is too close to the complement")
    t = _normalizer_to_infinity(x)
    transported = [apply(t, p) for p in dom.complement]
    zs = [p.as_complex() for p in transported]
    med = minimal_enclosing_disk(zs, seed=seed)
    contacts = [
        i for i, z in enumerate(zs)
        if abs(abs(z - med.center) - med.radius) <= tol_contact * med.radius
    ]
    if len(contacts) < 2:
        contacts = sorted(set(contacts) | set(med.support))
    circle_norm = OrientedCircle.from_center_radius(med.center, med.radius, disk_inside=False)
    tinv = t.inverse()
    disk = RoundDisk(circle_norm.transform(tinv))

    # Unit-disk frame: z -> radius / (z - center) maps the exterior (with
    # the query at infinity) onto the unit disk with the query at 0.
    u = MoebiusMap(np.array([[0.0, med.radius], [1.0, -med.center]], dtype=complex))
    frame = u @ t
    boundary = []
    for i in contacts:
        w = apply(u, transported[i])
        boundary.append((i, w.as_complex()))
    boundary.sort(key=lambda iw: math.atan2(iw[1].imag, iw[1].real))
    angles = tuple(math.atan2(w.imag, w.real) for _, w in boundary)
    ordered_ids = [i for i, _ in boundary]

    edges = []
    k = len(boundary)
    if k == 2:
        edges.append(_poincare_geodesic(boundary[0][1] / abs(boundary[0][1]),
                                        boundary[1][1] / abs(boundary[1][1])))
    else:
        for j in range(k):
            u1 = boundary[j][1] / abs(boundary[j][1])
            u2 = boundary[(j + 1) % k][1] / abs(boundary[(j + 1) % k][1])
            edge = _poincare_geodesic(u1, u2)
            other = boundary[(j + 2) % k][1]
            if edge.evaluate(PointCP1.from_complex(other)) > 0:
                edge = edge.reversed()
            edges.append(edge)

    core = CoreRegion(frame=frame, boundary_angles=angles, edges=tuple(edges))
    ideal = tuple(dom.complement[i] for i in ordered_ids)
    return MaximalDiskRecord(
        disk=disk, ideal_points=ideal, core=core, normalized=med, query=x
    )


# ---------------------------------------------------------------------------
# Stratification


def stratification_check(
    dom: DiskComplementDomain, samples, seed: int = 0
) -> dict:
    """Check the stratification by cores over the given sample points:
    every sample gets a disk, distinct disks have disjoint cores (tested by
    sides of the separating circle H1 - H2 through the lens), and samples
    sharing a disk share the ideal point set."""
    samples = list(samples)
    records = []
    failures = []
    for i, x in enumerate(samples):
        try:
            records.append((i, maximal_disk_at(dom, x, seed=seed)))
        except (PreconditionError, DegenerateInputError) as exc:
            failures.append({"sample": i, "error": str(exc)})

    # Group samples by disk.
    groups = []
    for i, rec in records:
        for g in groups:
            if rec.same_disk(g["record"]):
                g["samples"].append(i)
                break
        else:
            groups.append({"record": rec, "samples": [i]})

    violations = []
    for fail in failures:
        violations.append({"kind": "no-disk", **fail})

    # (iii) identical disks share ideal points (as sets; the stored cyclic
    # order depends on the query frame).
    def same_ideal_sets(a, b):
        if len(a) != len(b):
            return False
        return all(
            any(chordal_distance(p, q) < 10 * TOL_GEO for q in b) for p in a
        )

    for g in groups:
        rec0 = g["record"]
        for i, rec in records:
            if i in g["samples"] and rec is not rec0:
                if not same_ideal_sets(rec.ideal_points, rec0.ideal_points):
                    violations.append({"kind": "ideal-point-mismatch", "sample": i})

    # (ii) distinct disks: no nesting (which would contradict maximality),
    # and cores on opposite sides of the separating form H1 - H2.  The side
    # test holds whether or not the disks intersect: an ideal point of D1
    # lies on its own circle and outside the open D2, so its H1 - H2 value
    # is nonpositive, and symmetrically for D2.
    def nested(ra, rb):
        # Only circles that do not meet can nest; then rb is inside ra iff
        # its boundary and its disk sample are.
        if abs(inversive_product(ra.disk.circle, rb.disk.circle)) <= 1.0 + TOL_GEO:
            return False
        pts = rb.disk.circle.boundary_points(3) + [rb.disk.circle.sample_disk_point()]
        return all(ra.disk.circle.evaluate(p) < -TOL_GEO for p in pts)

    for a in range(len(groups)):
        for b in range(a + 1, len(groups)):
            ra, rb = groups[a]["record"], groups[b]["record"]
            ha, hb = ra.disk.circle.hermitian, rb.disk.circle.hermitian
            if nested(ra, rb) or nested(rb, ra):
                violations.append({"kind": "nested-disks", "groups": [a, b]})
                continue
            s = ha - hb  # separating circle through the lens vertices
            worst_a = max(
                float((np.conj(v) @ s @ v).real)
                for v in (p.normalized().vector() for p in ra.ideal_points)
            )
            worst_b = min(
                float((np.conj(v) @ s @ v).real)
                for v in (p.normalized().vector() for p in rb.ideal_points)
            )
            if worst_a > TOL_GEO or worst_b < -TOL_GEO:
                violations.append(
                    {
                        "kind": "core-overlap",
                        "groups": [a, b],
                        "side_values": [worst_a, worst_b],
                    }
                )

    return {
        "checks": [
            {"name": "every-sample-assigned", "passed": not failures,
             "details": {"samples": len(samples), "assigned": len(records)}},
            {"name": "core-disjointness", "passed": not any(
                v["kind"] in ("core-overlap", "nested-disks") for v in violations)},
            {"name": "ideal-point-consistency", "passed": not any(
                v["kind"] == "ideal-point-mismatch" for v in violations)},
        ],
        "violations": violations,
        "values": {"distinct_disks": len(groups)},
    }


# ---------------------------------------------------------------------------
# Transverse measure


@dataclass(frozen=True)
class MeasureResult:
    value: float
    trace: tuple  # Theta at each refinement level
    levels: int
    converged: bool


def transverse_measure(
    dom: DiskComplementDomain,
    path,
    tol_measure: float = TOL_MEASURE,
    max_levels: int = 16,
    initial_subdivision: int = 4,
    seed: int = 0,
) -> MeasureResult:
    """Transverse measure of a path: Theta = sum of angles between maximal
    disks at consecutive subdivision points, refined dyadically until the
    increments fall below tol_measure.  Consecutive disks must intersect;
    refinement is the remedy, and failure at max_levels raises."""
    pts = [complex(p) for p in path]
    if len(pts) < 2:
        raise DegenerateInputError("path needs at least 2 vertices")

    seg_lengths = [abs(b - a) for a, b in zip(pts, pts[1:])]
    total = sum(seg_lengths)
    if total <= 0:
        raise DegenerateInputError("path has zero length")

    def eval_point(t: Fraction) -> complex:
        target = float(t) * total
        acc = 0.0
        for (a, b), L in zip(zip(pts, pts[1:]), seg_lengths):
            if target <= acc + L or (a, b) == (pts[-2], pts[-1]):
                s = (target - acc) / L if L > 0 else 0.0
                return a + (b - a) * min(max(s, 0.0), 1.0)
            acc += L
        return pts[-1]

    disk_cache: dict = {}

    def disk_at(t: Fraction) -> MaximalDiskRecord:
        if t not in disk_cache:
            disk_cache[t] = maximal_disk_at(dom, eval_point(t), seed=seed)
        return disk_cache[t]

    trace = []
    prev = None
    for level in range(max_levels + 1):
        n = initial_subdivision * (2**level)
        params = [Fraction(i, n) for i in range(n + 1)]
        try:
            theta = 0.0
            for t0, t1 in zip(params, params[1:]):
                d0, d1 = disk_at(t0), disk_at(t1)
                if d0.same_disk(d1):
                    continue
                theta += angle_between(d0.disk.circle, d1.disk.circle)
        except NoIntersectionError:
            prev = None
            continue  # refine further
        trace.append(theta)
        if prev is not None and abs(theta - prev) < tol_measure:
            return MeasureResult(value=theta, trace=tuple(trace), levels=level, converged=True)
        prev = theta
    if not trace:
        raise TransversalityError(
            "consecutive maximal disks do not intersect at maximal refinement"
        )
    return MeasureResult(value=trace[-1], trace=tuple(trace), levels=max_levels, converged=False)


# ---------------------------------------------------------------------------
# Dome vs. transverse measure


def face_core_point(dom: DiskComplementDomain, face, seed: int = 0) -> PointCP1:
    """A point of the two-dimensional core of a dome face: searched along
    the mean vertex direction in the face's disk frame and verified by the
    maximal-disk computation itself."""
    circle = face.plane.boundary
    plane = face.plane
    half = plane.to_halfplane_map()
    cayley = MoebiusMap(np.array([[1.0, -1j], [1.0, 1j]], dtype=complex))
    frame = cayley @ half  # face disk -> unit disk
    finv = frame.inverse()
    us = []
    for i in face.vertex_ids:
        w = apply(frame, dom.complement[i])
        wc = w.as_complex()
        if abs(wc) > 1e-9:
            us.append(wc / abs(wc))
    mean = sum(us)
    direction = mean / abs(mean) if abs(mean) > 1e-9 else 0.0j
    # Cores of faces whose vertices hug a short boundary arc are thin
    # slivers near the circle, so the radial search must go deep.
    radii = [k / 24.0 for k in range(24)] + [0.97, 0.985, 0.993]
    for r in radii:
        cand = apply(finv, PointCP1.from_complex(r * direction if direction else 0.0j))
        if cand.is_infinity or not dom.contains(cand):
            continue
        try:
            rec = maximal_disk_at(dom, cand, seed=seed)
        except (PreconditionError, DegenerateInputError):
            continue
        if rec.disk.circle.proj_distance(circle) < 1e-6:
            return cand
    raise DegenerateInputError("no core point found for dome face")


def _classify_on_path(dom, mesh, edge, z, seed: int = 0) -> str:
    """Label a path point: in a face core of the edge, in the edge's own
    two-contact family, or somewhere else."""
    f1 = mesh.faces[edge.face_ids[0]]
    f2 = mesh.faces[edge.face_ids[1]]
    try:
        rec = maximal_disk_at(dom, cp1(z), seed=seed)
    except (PreconditionError, DegenerateInputError):
        return "other"
    if rec.disk.circle.proj_distance(f1.plane.boundary) < 1e-6:
        return "face1"
    if rec.disk.circle.proj_distance(f2.plane.boundary) < 1e-6:
        return "face2"
    if len(rec.ideal_points) == 2:
        va = mesh.vertices[edge.vertex_ids[0]]
        vb = mesh.vertices[edge.vertex_ids[1]]
        got = rec.ideal_points
        match = (
            chordal_distance(got[0], va) < 10 * TOL_GEO
            and chordal_distance(got[1], vb) < 10 * TOL_GEO
        ) or (
            chordal_distance(got[0], vb) < 10 * TOL_GEO
            and chordal_distance(got[1], va) < 10 * TOL_GEO
        )
        if match:
            return "family"
    return "other"


def _single_edge_subpath(dom, mesh, edge, path, seed: int = 0, probes: int = 33):
    """Walk the path coarsely looking for a contiguous stretch whose disk
    labels read (one face core) [this edge's family] (other face core); on
    success return the trimmed polyline between the two face cores."""
    seg_lengths = [abs(b - a) for a, b in zip(path, path[1:])]
    total = sum(seg_lengths)
    if total <= 0:
        return None

    def point_at(target):
        acc = 0.0
        for (a, b), length in zip(zip(path, path[1:]), seg_lengths):
            if target <= acc + length:
                return a + (b - a) * ((target - acc) / length if length > 0 else 0.0)
            acc += length
        return path[-1]

    samples = []
    for k in range(probes + 1):
        target = total * k / probes
        samples.append((target, _classify_on_path(dom, mesh, edge, point_at(target), seed=seed)))

    blocks = []
    for target, lab in samples:
        if not blocks or blocks[-1][0] != lab:
            blocks.append([lab, target, target])
        else:
            blocks[-1][2] = target
    for i in range(len(blocks)):
        if blocks[i][0] not in ("face1", "face2"):
            continue
        other = "face2" if blocks[i][0] == "face1" else "face1"
        for j in (i + 1, i + 2):
            if j >= len(blocks) or blocks[j][0] == "other":
                break
            if blocks[j][0] == other:
                t_a = (blocks[i][1] + blocks[i][2]) / 2.0
                t_b = (blocks[j][1] + blocks[j][2]) / 2.0
                trimmed = [point_at(t_a)]
                for acc, z in _path_vertices_between(path, seg_lengths, t_a, t_b):
                    trimmed.append(z)
                trimmed.append(point_at(t_b))
                return trimmed
    return None


def _path_vertices_between(path, seg_lengths, t_a, t_b):
    acc = 0.0
    for (a, b), length in zip(zip(path, path[1:]), seg_lengths):
        acc += length
        if t_a < acc < t_b:
            yield acc, b


def _edge_measure_paths(dom, mesh, edge, seed: int = 0):
    """Candidate polylines crossing the given dome edge.

    With the edge's ideal vertices at 0 and infinity both face circles are
    lines through the origin and the edge's disk family is the pencil of
    lines in the wedge between them, so arcs sweeping the wedge are natural
    candidates; each candidate still gets validated by the caller."""
    from .moebius import moebius_two_points

    f1 = mesh.faces[edge.face_ids[0]]
    f2 = mesh.faces[edge.face_ids[1]]
    va = mesh.vertices[edge.vertex_ids[0]]
    vb = mesh.vertices[edge.vertex_ids[1]]
    n = moebius_two_points(va, vb)
    ninv = n.inverse()

    def line_angle(circle):
        h = circle.transform(n).hermitian
        b = complex(h[0, 1])
        # Line {Re(conj(B) z) = 0}; the disk side is the -B half-plane.
        return cmath.phase(1j * b), -b / abs(b)

    phi1, side1 = line_angle(f1.plane.boundary)
    phi2, side2 = line_angle(f2.plane.boundary)

    def wedge_sweep(delta, r1, r2, samples=48):
        """Arc (log-spiral when r1 != r2) crossing the edge's disk family:
        the family cores fill the sector of angular size edge.weight centered
        on the wedge midline, and the face cores begin just past its ends."""
        best = None
        for s1 in (phi1, phi1 + math.pi):
            for s2 in (phi2, phi2 + math.pi):
                span = ((s2 - s1 + math.pi) % (2.0 * math.pi)) - math.pi  # signed
                mid = s1 + span / 2.0
                inside1 = (cmath.exp(1j * mid) * np.conj(side1)).real > 0
                inside2 = (cmath.exp(1j * mid) * np.conj(side2)).real > 0
                if inside1 and inside2 and (best is None or abs(span) < abs(best[1])):
                    best = (s1, span)
        if best is None:
            return None
        s1, span = best
        mid = s1 + span / 2.0
        half = edge.weight / 2.0 + delta
        ts = np.linspace(0.0, 1.0, samples)
        path = []
        for t in ts:
            psi = mid - half + 2.0 * half * t
            r = math.exp((1.0 - t) * math.log(r1) + t * math.log(r2))
            w = apply(ninv, PointCP1.from_complex(r * cmath.exp(1j * psi)))
            if w.is_infinity or not dom.contains(w):
                return None
            path.append(w.as_complex())
        return path

    def contact_radii():
        mags = sorted(
            abs(apply(n, mesh.vertices[i]).as_complex())
            for f in (f1, f2)
            for i in f.vertex_ids
            if not apply(n, mesh.vertices[i]).is_infinity
            and abs(apply(n, mesh.vertices[i]).as_complex()) > 1e-9
        )
        if not mags:
            return [1.0]
        out = [math.sqrt(mags[0] * mags[-1]), mags[len(mags) // 2], 1.0]
        return list(dict.fromkeys(out))

    for r in contact_radii():
        for delta in (0.12, 0.3, 0.04, 0.6):
            path = wedge_sweep(delta, r, r)
            if path:
                yield path
    # Fallback: straight segment between verified core points.
    try:
        c1 = face_core_point(dom, f1, seed=seed)
        c2 = face_core_point(dom, f2, seed=seed)
        yield [c1.as_complex(), c2.as_complex()]
    except (PreconditionError, DegenerateInputError):
        pass


def dome_measure_report(ideal_points, tol: float = TOL_MEASURE, seed: int = 0) -> dict:
    """Compare the transverse measure across every dome edge against the
    edge's exterior dihedral angle, integrating along a validated path
    that crosses only that edge between the two adjacent face cores."""
    from .hyperbolic import dome

    pts = [cp1(p) for p in ideal_points]
    mesh = dome(pts)
    dom = DiskComplementDomain.from_ideal_points(pts)
    checks = []
    violations = []
    edge_values = []
    for ei, edge in enumerate(mesh.edges):
        path = None
        for candidate in _edge_measure_paths(dom, mesh, edge, seed=seed):
            path = _single_edge_subpath(dom, mesh, edge, candidate, seed=seed)
            if path is not None:
                break
        if path is None:
            violations.append({"kind": "no-measure-path", "edge": ei})
            edge_values.append(
                {"edge": ei, "theta": math.nan, "dihedral": edge.weight,
                 "error": math.inf}
            )
            continue
        res = transverse_measure(dom, path, tol_measure=tol, seed=seed)
        err = abs(res.value - edge.weight)
        edge_values.append(
            {"edge": ei, "theta": res.value, "dihedral": edge.weight, "error": err}
        )
        if err > 10 * tol or not res.converged:
            violations.append(
                {"kind": "measure-dihedral-mismatch", "edge": ei, "error": err}
            )
    checks.append(
        {"name": "measure-matches-dihedral", "passed": not violations,
         "details": {"edges": len(mesh.edges)}}
    )
    return {"checks": checks, "violations": violations,
            "values": {"edges": edge_values,
                       "faces": len(mesh.faces)}}


# ---------------------------------------------------------------------------
# Projection


def projection_psi(dom: DiskComplementDomain, x, seed: int = 0) -> PointH3:
    """Psi(x): nearest-point projection of x onto the hyperbolic plane over
    the boundary of the maximal disk at x."""
    rec = maximal_disk_at(dom, x, seed=seed)
    return nearest_point_projection(PlaneH3(rec.disk.circle), cp1(x))


# ---------------------------------------------------------------------------
# Weight recovery (Goldman direction)


def recover_weight_from_grafted(
    gs: GraftedStructure, curve, samples: int = 256
) -> float:
    """Total crescent angle across a transversal through the grafting
    cylinder of the named curve, integrated by developing sample points
    through the inserted chart and unwrapping the argument."""
    if isinstance(curve, str):
        curve = GroupWord.parse(curve)
    try:
        gs.multicurve.weight_of(curve)
    except KeyError as exc:
        raise PreconditionError(str(exc)) from None

    from .surface import axis as _axis

    leaf_axis = _axis(gs.hol.rho(curve))
    weight = gs.multicurve.weight_of(curve)
    canonical = LiftedLeaf(
        geodesic=leaf_axis, weight=weight, curve_index=-1, conjugator=GroupWord(())
    )
    n = leaf_normalizer(gs, canonical)
    ninv = n.inverse()

    phi = 0.35
    for _ in range(12):
        za = ninv(cmath.exp(1j * (math.pi / 2.0 - phi)))
        zb = ninv(cmath.exp(1j * (math.pi / 2.0 + phi)))
        crossings = lift_crossings(gs.hol, za, zb, gs.multicurve, gs.depth)
        ours = [
            c for c in crossings
            if c.leaf.key()[1:] == canonical.key()[1:]
        ]
        others = [c for c in crossings if c.leaf.key()[1:] != canonical.key()[1:]]
        if len(ours) == 1 and not others:
            break
        phi /= 2.0
    else:
        raise TransversalityError("could not isolate a transversal through the cylinder")

    crossing = ours[0]
    theta = crossing.leaf.weight
    if theta == 0.0:
        return 0.0
    # Integrate the transverse coordinate through the crescent chart: sample
    # the developed boundary sweep and unwrap the winding argument.
    x_param = 0.0  # entry ray position; the sweep angle is x-independent
    ys = np.linspace(0.0, theta, samples)
    developed = np.exp(x_param + 1j * ys)
    swept = np.unwrap(np.angle(developed))
    return float(abs(swept[-1] - swept[0]))


# ---------------------------------------------------------------------------
# Path lifting in the domain of discontinuity


def _leaf_side_values(leaves, w: complex) -> np.ndarray:
    vals = np.empty(len(leaves))
    for j, lf in enumerate(leaves):
        circ = lf.circle
        if circ.is_line:
            a = -circ.hermitian[1, 1].real / (2.0 * circ.hermitian[0, 1].real)
            vals[j] = w.real - a
        else:
            c, r = circ.center_radius()
            vals[j] = abs(w - c) ** 2 - r * r
    return vals


@dataclass
class _Locus:
    kind: str  # "stratum" | "crescent"
    signs: tuple | None = None
    leaf_index: int | None = None
    psi: float | None = None
    enter_sign: float | None = None  # stratum sign on the low-angle side

    def closes_with(self, other: "_Locus", tol: float = 1e-6) -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == "stratum":
            return self.signs == other.signs
        return self.leaf_index == other.leaf_index and abs(self.psi - other.psi) < tol


def verify_covering(
    gs: GraftedStructure,
    loops,
    margin: float = 0.05,
    limit_depth: int = 5,
    steps_per_loop: int = 512,
    max_steps: int = 100_000,
) -> dict:
    """Numerically verify path lifting over the discontinuity domain for a
    2 pi-multiple grafted structure: every closed null-homotopic loop whose
    chordal distance to the limit-set sample exceeds the margin must lift
    from every constructed starting lift and close up.

    Loops too close to the limit set raise PreconditionError (a guard, not
    a covering violation).  Reports per-loop embedding-radius estimates:
    the minimal chordal distance to the support boundary along the lift.
    """
    if not gs.all_weights_two_pi_multiples():
        raise PreconditionError("verify_covering requires weights in 2 pi Z")

    limit_pts = limit_set_sample(gs.hol, limit_depth)
    limit_xyz = np.array([p.sphere_coords() for p in limit_pts])

    def chordal_to_limit(w: complex) -> float:
        xyz = PointCP1.from_complex(w).sphere_coords()
        return float(np.min(np.linalg.norm(limit_xyz - xyz, axis=1)))

    all_leaves = [
        lf for lf in enumerate_leaf_lifts(
            gs.hol, gs.multicurve, gs.depth, focus=[gs.basepoint]
        )
        if lf.weight > 0.0
    ]
    normalizers = [leaf_normalizer(gs, lf) for lf in all_leaves]

    def locus_of(w: complex):
        """All lifts of the point w: at most one stratum locus plus one
        crescent locus per leaf and full 2 pi winding branch."""
        loci = []
        if w.imag > 0:
            signs = tuple(1 if v > 0 else -1 for v in _leaf_side_values(all_leaves, w))
            loci.append(_Locus(kind="stratum", signs=signs))
        for j, lf in enumerate(all_leaves):
            arg = cmath.phase(normalizers[j](w))
            k0 = 0
            while arg + 2.0 * math.pi * k0 <= math.pi / 2.0:
                k0 += 1
            psi = arg + 2.0 * math.pi * k0
            while psi < math.pi / 2.0 + lf.weight:
                low_sign = _stratum_sign_near(all_leaves, normalizers, j, low=True)
                loci.append(
                    _Locus(kind="crescent", leaf_index=j, psi=psi, enter_sign=low_sign)
                )
                psi += 2.0 * math.pi
        return loci

    def _stratum_sign_near(leaves, norms, j, low: bool) -> float:
        zz = norms[j].inverse()(cmath.exp(1j * (math.pi / 2.0 + (-0.05 if low else 0.05))))
        return 1.0 if _leaf_side_values([leaves[j]], zz)[0] > 0 else -1.0

    loops = list(loops)
    checks = []
    violations = []
    values = {"loops": len(loops), "lifts_tested": 0, "closures": 0}
    embedding_radii = []

    for li, loop in enumerate(loops):
        loop_pts = [complex(z) for z in loop]
        if abs(loop_pts[0] - loop_pts[-1]) > 1e-12:
            loop_pts.append(loop_pts[0])
        # Guard: the loop must respect the limit-set margin.
        sub = max(2, steps_per_loop // (len(loop_pts) - 1))
        fine = []
        for a, b in zip(loop_pts, loop_pts[1:]):
            for k in range(sub):
                fine.append(a + (b - a) * k / sub)
        fine.append(loop_pts[-1])
        margin_actual = min(chordal_to_limit(w) for w in fine)
        if margin_actual <= margin:
            raise PreconditionError(
                f"loop {li} violates the limit-set margin "
                f"({margin_actual:.4g} <= {margin})"
            )

        starting = locus_of(fine[0])
        for locus in starting:
            values["lifts_tested"] += 1
            state = _Locus(**vars(locus))
            ok, radius, msg = _march_loop(
                state, list(fine), all_leaves, normalizers, max_steps
            )
            if not ok:
                violations.append({"kind": "lift-failure", "loop": li, "detail": msg})
                continue
            embedding_radii.append(radius)
            if state.closes_with(locus):
                values["closures"] += 1
            else:
                violations.append(
                    {"kind": "no-closure", "loop": li,
                     "start": locus.kind, "end": state.kind}
                )

    checks.append({"name": "all-lifts-close", "passed": not violations,
                   "details": {"lifts": values["lifts_tested"]}})
    if embedding_radii:
        values["min_embedding_radius"] = min(embedding_radii)
        checks.append({"name": "embedding-radius-positive",
                       "passed": values["min_embedding_radius"] > 0.0,
                       "details": {"min": values["min_embedding_radius"]}})
    return {"checks": checks, "violations": violations, "values": values}


def _march_loop(state: _Locus, fine, leaves, normalizers, max_steps) -> tuple:
    """Advance a lift along the sampled loop; returns (ok, min_radius, msg)."""
    steps = 0
    min_radius = math.inf
    i = 0
    n = len(fine)
    w = fine[0]
    while i < n - 1:
        steps += 1
        if steps > max_steps:
            return False, min_radius, "step budget exceeded"
        w_next = fine[i + 1]
        if state.kind == "stratum":
            vals = _leaf_side_values(leaves, w_next)
            signs_next = tuple(1 if v > 0 else -1 for v in vals)
            flips = [j for j in range(len(leaves)) if signs_next[j] != state.signs[j]]
            if not flips:
                min_radius = min(min_radius, 2.0 * abs(w_next.imag) / (1.0 + abs(w_next) ** 2))
                w = w_next
                i += 1
                continue
            if len(flips) > 1:
                # Subdivide to isolate a single transition.
                mid = (w + w_next) / 2.0
                fine.insert(i + 1, mid)
                n += 1
                continue
            j = flips[0]
            arg = cmath.phase(normalizers[j](w_next))
            low_sign = 1.0 if _leaf_side_values([leaves[j]], normalizers[j].inverse()(
                cmath.exp(1j * (math.pi / 2.0 - 0.05))))[0] > 0 else -1.0
            entering_from_low = state.signs[j] == low_sign
            if entering_from_low:
                psi = arg if arg > 0 else arg + 2.0 * math.pi
            else:
                psi = arg + leaves[j].weight
            state.kind = "crescent"
            state.leaf_index = j
            state.psi = psi
            state.enter_sign = low_sign
            state.signs = state.signs  # kept for exit bookkeeping
            w = w_next
            i += 1
            continue
        # Crescent marching.
        j = state.leaf_index
        theta = leaves[j].weight
        nw = normalizers[j](w_next)
        nw_prev = normalizers[j](w)
        dphi = cmath.phase(nw / nw_prev)
        psi_next = state.psi + dphi
        if abs(math.log(abs(nw))) > 30.0:
            return False, min_radius, "escape toward a leaf endpoint"
        if psi_next < math.pi / 2.0 - 1e-12 or psi_next > math.pi / 2.0 + theta + 1e-12:
            # Exit into the stratum on the corresponding side.
            exiting_low = psi_next < math.pi / 2.0
            vals = _leaf_side_values(leaves, w_next)
            signs = [1 if v > 0 else -1 for v in vals]
            want = state.enter_sign if exiting_low else -state.enter_sign
            signs[j] = int(want)
            state.kind = "stratum"
            state.signs = tuple(signs)
            state.leaf_index = None
            state.psi = None
            w = w_next
            i += 1
            continue
        state.psi = psi_next
        min_radius = min(
            min_radius,
            min(abs(psi_next - math.pi / 2.0), abs(math.pi / 2.0 + theta - psi_next))
            * 2.0 * abs(nw) / (1.0 + abs(nw) ** 2),
        )
        w = w_next
        i += 1
    return True, min_radius, ""
