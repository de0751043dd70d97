import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cp1graft.moebius import (
    INFINITY,
    DegenerateInputError,
    MoebiusMap,
    NoIntersectionError,
    OrientedCircle,
    PointCP1,
    angle_between,
    apply,
    chordal_distance,
    circle_through,
    classify,
    cp1,
    cross_ratio,
    inversive_product,
    minimal_enclosing_disk,
)
from oracles import (
    brute_force_minimal_disk,
    least_squares_circle,
    oriented_tangent_angle,
)


def random_moebius(rng):
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) > 0.1:
            return MoebiusMap(m)


# ---------------------------------------------------------------------------
# apply


def test_apply_identity():
    p = PointCP1(1, 1)
    q = apply(MoebiusMap.identity(), p)
    assert chordal_distance(p, q) < 1e-12


def test_apply_diagonal_fixes_zero():
    m = MoebiusMap.from_entries(2, 0, 0, 0.5)
    assert chordal_distance(apply(m, cp1(0)), cp1(0)) < 1e-12


def test_apply_parabolic_fixes_infinity():
    m = MoebiusMap.from_entries(1, 1, 0, 1)
    assert chordal_distance(apply(m, INFINITY), INFINITY) < 1e-12


def test_apply_inverse_roundtrip():
    rng = np.random.default_rng(5)
    for _ in range(25):
        m = random_moebius(rng)
        p = cp1(complex(rng.normal(), rng.normal()))
        q = apply(m.inverse(), apply(m, p))
        assert chordal_distance(p, q) < 1e-9


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_projective_sign_quotient(seed):
    # apply(-M, p) = apply(M, p): the sign is quotiented out.
    rng = np.random.default_rng(seed)
    m = random_moebius(rng)
    p = cp1(complex(rng.normal(), rng.normal()))
    neg = MoebiusMap(-m.matrix)
    assert chordal_distance(apply(m, p), apply(neg, p)) < 1e-12


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_cross_ratio_invariance(seed):
    rng = np.random.default_rng(seed)
    m = random_moebius(rng)
    pts = []
    while len(pts) < 4:
        cand = cp1(complex(rng.normal(), rng.normal()))
        if all(chordal_distance(cand, p) > 1e-3 for p in pts):
            pts.append(cand)
    cr1 = cross_ratio(*pts)
    cr2 = cross_ratio(*(apply(m, p) for p in pts))
    assert abs(cr1 - cr2) < 1e-8 * max(1.0, abs(cr1))


# ---------------------------------------------------------------------------
# classify


def test_classify_hyperbolic_diagonal():
    cls = classify(MoebiusMap.from_entries(2, 0, 0, 0.5))
    assert cls.kind == "hyperbolic"
    fixed = {("0" if not p.is_infinity and abs(p.as_complex()) < 1e-9 else "inf")
             for p in cls.fixed_points if p.is_infinity or abs(p.as_complex()) < 1e-9}
    assert fixed == {"0", "inf"}


def test_classify_parabolic():
    cls = classify(MoebiusMap.from_entries(1, 1, 0, 1))
    assert cls.kind == "parabolic"
    assert not cls.parabolic_ambiguous
    assert len(cls.fixed_points) == 1
    assert cls.fixed_points[0].is_infinity


def test_classify_elliptic_rotation():
    cls = classify(MoebiusMap.from_entries(0, -1, 1, 0))
    assert cls.kind == "elliptic"
    got = sorted(p.as_complex().imag for p in cls.fixed_points)
    assert got == pytest.approx([-1.0, 1.0], abs=1e-12)


def test_classify_identity():
    cls = classify(MoebiusMap.identity())
    assert cls.kind == "identity"
    assert cls.fixed_points == ()


def test_classify_parabolic_ambiguous_band():
    # tr - 2 of order delta^2: pick delta so tr^2 - 4 lands inside the band.
    delta = 3e-6
    m = MoebiusMap.from_entries(1 + delta, 1, 0, 1 / (1 + delta))
    cls = classify(m)
    assert cls.kind == "parabolic"
    assert cls.parabolic_ambiguous


def test_classify_loxodromic():
    cls = classify(MoebiusMap.from_entries(2j, 0, 0, -0.5j))
    assert cls.kind == "loxodromic"


# ---------------------------------------------------------------------------
# circle_through


def test_circle_through_real_line():
    c = circle_through(cp1(0), cp1(1), INFINITY)
    assert c.is_line
    # Positively ordered (0, 1, inf): disk side is the upper half-plane.
    assert c.evaluate(cp1(1j)) < 0
    assert c.evaluate(cp1(-1j)) > 0


def test_circle_through_unit_circle():
    c = circle_through(cp1(1), cp1(1j), cp1(-1))
    center, radius = c.center_radius()
    assert abs(center) < 1e-10
    assert radius == pytest.approx(1.0, abs=1e-10)
    assert c.evaluate(cp1(0)) < 0  # counterclockwise: disk is the interior


def test_circle_through_least_squares_oracle():
    pts = [0, 2, 1 + 1j]
    c = circle_through(*(cp1(p) for p in pts))
    center, radius = c.center_radius()
    oc, orad = least_squares_circle(pts)
    assert abs(center - oc) < 1e-9
    assert radius == pytest.approx(orad, abs=1e-9)
    assert abs(center - 1.0) < 1e-9 and radius == pytest.approx(1.0, abs=1e-9)


def test_circle_through_coincident_points_rejected():
    with pytest.raises(DegenerateInputError):
        circle_through(cp1(0), cp1(0), cp1(1))


def test_circle_transport_naturality():
    rng = np.random.default_rng(11)
    for _ in range(50):
        pts = [cp1(complex(rng.normal(), rng.normal())) for _ in range(3)]
        try:
            c = circle_through(*pts)
        except DegenerateInputError:
            continue
        m = random_moebius(rng)
        lhs = c.transform(m)
        rhs = circle_through(*(apply(m, p) for p in pts))
        # Hermitian forms agree up to sign after det normalization.
        d = min(
            float(np.linalg.norm(lhs.hermitian - rhs.hermitian)),
            float(np.linalg.norm(lhs.hermitian + rhs.hermitian)),
        )
        assert d < 1e-7


# ---------------------------------------------------------------------------
# angle_between


def test_angle_unit_circle_vs_real_line():
    c1 = OrientedCircle.from_center_radius(0, 1)
    c2 = OrientedCircle.real_line()
    assert angle_between(c1, c2) == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_angle_same_circle_is_zero():
    c = OrientedCircle.from_center_radius(0.3 + 0.1j, 2.0)
    assert angle_between(c, c) == pytest.approx(0.0, abs=1e-7)


def test_angle_overlapping_unit_circles_tangent_oracle():
    c1 = OrientedCircle.from_center_radius(0, 1)
    c2 = OrientedCircle.from_center_radius(1, 1)
    want = oriented_tangent_angle(0, 1, True, 1, 1, True)
    assert angle_between(c1, c2) == pytest.approx(want, abs=1e-12)
    assert angle_between(c1, c2) == pytest.approx(math.pi / 3.0, abs=1e-12)


def test_angle_orientation_reversal_supplements():
    c1 = OrientedCircle.from_center_radius(0, 1)
    c2 = OrientedCircle.from_center_radius(1, 1)
    a = angle_between(c1, c2)
    b = angle_between(c1, c2.reversed())
    assert a + b == pytest.approx(math.pi, abs=1e-12)


def test_angle_disjoint_circles_rejected():
    c1 = OrientedCircle.from_center_radius(0, 1)
    c2 = OrientedCircle.from_center_radius(5, 1)
    with pytest.raises(NoIntersectionError):
        angle_between(c1, c2)


def test_angle_moebius_invariance():
    rng = np.random.default_rng(23)
    c1 = OrientedCircle.from_center_radius(0, 1)
    c2 = OrientedCircle.from_center_radius(0.8, 0.9)
    base = angle_between(c1, c2)
    for _ in range(30):
        m = random_moebius(rng)
        moved = angle_between(c1.transform(m), c2.transform(m))
        assert moved == pytest.approx(base, abs=1e-7)


# ---------------------------------------------------------------------------
# minimal_enclosing_disk


def test_med_diameter_pair():
    d = minimal_enclosing_disk([0, 2])
    assert abs(d.center - 1.0) < 1e-12
    assert d.radius == pytest.approx(1.0, abs=1e-12)


def test_med_singleton():
    d = minimal_enclosing_disk([3 + 4j])
    assert d.center == 3 + 4j
    assert d.radius == 0.0


def test_med_three_points_vs_oracle():
    d = minimal_enclosing_disk([0, 1, 1j])
    oc, orad = brute_force_minimal_disk([0, 1, 1j])
    assert abs(d.center - oc) < 1e-12
    assert d.radius == pytest.approx(orad, abs=1e-12)


def test_med_empty_rejected():
    with pytest.raises(DegenerateInputError):
        minimal_enclosing_disk([])


def test_med_random_sets_vs_oracle():
    rng = np.random.default_rng(3)
    for case in range(200):
        pts = [complex(rng.normal(), rng.normal()) for _ in range(10)]
        d = minimal_enclosing_disk(pts, seed=case)
        oc, orad = brute_force_minimal_disk(pts)
        assert abs(d.radius - orad) < 1e-9
        assert abs(d.center - oc) < 1e-8


def test_med_support_on_boundary():
    rng = np.random.default_rng(8)
    pts = [complex(rng.normal(), rng.normal()) for _ in range(12)]
    d = minimal_enclosing_disk(pts)
    assert 2 <= len(d.support) <= 3
    for i in d.support:
        assert abs(abs(pts[i] - d.center) - d.radius) < 1e-9
