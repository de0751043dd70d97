import cmath
import math

import numpy as np
import pytest

from cp1graft.moebius import MoebiusMap, chordal_distance, cp1
from cp1graft.hyperbolic import apply_isometry, nearest_point_projection, PlaneH3, OrientedCircle
from cp1graft.surface import FNCoordinates, GroupWord, fuchsian_from_fn
from cp1graft.grafting import (
    CrescentChart,
    CrescentPoint,
    GraftedStructure,
    InvalidMulticurveError,
    LiftFailure,
    PerturbInputError,
    StratumPoint,
    WeightedMulticurve,
    check_multicurve,
    collapse,
    crescent_develop,
    develop_and_lift,
    distance_to_leaf,
    embed_h3,
    grafted_holonomy,
    leaf_normalizer,
    lift_crossings,
    pleated_surface,
)
from oracles import segment_crossing_count

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# crescent charts


def test_crescent_develop_basic():
    p = crescent_develop(math.pi, (0.0, math.pi / 2.0))
    assert chordal_distance(p, cp1(1j)) < 1e-12
    q = crescent_develop(2.5, (0.0, 0.0))
    assert chordal_distance(q, cp1(1.0)) < 1e-12


def test_crescent_modulus_law():
    rng = np.random.default_rng(7)
    theta = 1.8
    chart = CrescentChart(theta)
    for _ in range(50):
        x = rng.uniform(-2, 2)
        y = rng.uniform(0, theta)
        assert abs(chart.develop(x, y).as_complex()) == pytest.approx(math.exp(x), rel=1e-12)


def test_crescent_out_of_chart():
    with pytest.raises(LiftFailure):
        crescent_develop(1.0, (0.0, 1.5))


# ---------------------------------------------------------------------------
# multicurves and crossings


def test_cuff_multicurve_valid(holonomy):
    mc = WeightedMulticurve(
        ((GroupWord((1,)), 1.0), (GroupWord((-1, 4)), 2.0), (GroupWord((-4,)), 0.5))
    )
    check_multicurve(holonomy, mc, depth=4)  # should not raise


def test_crossing_curves_rejected(holonomy):
    # a1 (cuff 1) and the seam word b1 intersect on the surface.
    mc = WeightedMulticurve(((GroupWord((1,)), 1.0), (GroupWord((2,)), 1.0)))
    with pytest.raises(InvalidMulticurveError):
        check_multicurve(holonomy, mc, depth=3)


def test_lift_crossings_empty_in_stratum(two_pi_structure):
    gs = two_pi_structure
    crossings = lift_crossings(
        gs.hol, 0.05 + 0.9j, 0.1 + 1.05j, gs.multicurve, depth=4
    )
    assert crossings == []


def test_lift_crossings_reversed_segment(two_pi_structure):
    gs = two_pi_structure
    p, q = -0.4 + 0.8j, 0.9 + 1.4j
    fwd = lift_crossings(gs.hol, p, q, gs.multicurve, depth=5)
    bwd = lift_crossings(gs.hol, q, p, gs.multicurve, depth=5)
    assert len(fwd) == len(bwd)
    assert [c.leaf.key() for c in fwd] == [c.leaf.key() for c in reversed(bwd)]
    assert [c.sign for c in fwd] == [-c.sign for c in reversed(bwd)]


def test_lift_crossings_count_vs_oracle(holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), 1.0),))
    p, q = -0.6 + 0.7j, 1.2 + 1.1j
    crossings = lift_crossings(holonomy, p, q, mc, depth=4)
    mats = {}
    for l in (1, -1, 2, -2, 3, -3, 4, -4):
        mats[l] = holonomy.generator(l).matrix
    want = segment_crossing_count(
        mats, [holonomy.rho(GroupWord((1,))).matrix], p, q, depth=4
    )
    assert len(crossings) == want


def test_endpoint_on_leaf_perturbation(holonomy):
    # The basepoint i lies on the cuff-1 axis (0, infinity).
    mc = WeightedMulticurve(((GroupWord((1,)), 1.0),))
    with pytest.raises(PerturbInputError) as err:
        lift_crossings(holonomy, 1j, 0.5 + 1j, mc, depth=3)
    offset = err.value.suggested_offset
    assert 0 < abs(offset) < 1e-2


# ---------------------------------------------------------------------------
# grafted holonomy


def test_two_pi_weights_preserve_holonomy(holonomy, two_pi_structure):
    rp = two_pi_structure.rho_prime
    for before, after in zip(holonomy.generators, rp.generators):
        assert after.proj_distance(before) < 1e-9


def test_four_pi_weights_preserve_holonomy(holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), 2 * TWO_PI),))
    rp = grafted_holonomy(holonomy, mc, depth=6)
    for before, after in zip(holonomy.generators, rp.generators):
        assert after.proj_distance(before) < 1e-9


def test_zero_weight_is_exact_identity(holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), 0.0),))
    rp = grafted_holonomy(holonomy, mc, depth=5)
    for before, after in zip(holonomy.generators, rp.generators):
        assert np.array_equal(before.matrix, after.matrix)


def test_grafted_trace_of_curve_preserved(holonomy, half_pi_structure):
    word = GroupWord((1,))
    before = holonomy.rho(word).trace_squared()
    after = half_pi_structure.rho_prime.rho(word).trace_squared()
    assert abs(before - after) < 1e-9


def test_grafted_relation_preserved(half_pi_structure):
    assert half_pi_structure.rho_prime.relation_residual() < 1e-8


def test_cocycle_consistency(holonomy, half_pi_structure):
    # rho'(uv) = rho'(u) rho'(v) when rho' is computed per generator, and
    # the direct cocycle evaluation of a word agrees with the product.
    gs = half_pi_structure
    rp = gs.rho_prime
    from cp1graft.hyperbolic import rotation_about_geodesic

    for word in (GroupWord((1, 2)), GroupWord((2, -1)), GroupWord((3, 2))):
        x0 = gs.basepoint
        target = holonomy.rho(word)(x0)
        crossings = lift_crossings(holonomy, x0, target, gs.multicurve, gs.depth)
        b = MoebiusMap.identity()
        for crossing in crossings:
            b = b @ rotation_about_geodesic(
                crossing.leaf.geodesic, crossing.rotation_angle
            )
        direct = b @ holonomy.rho(word)
        assert direct.proj_distance(rp.rho(word)) < 1e-8


def test_cocycle_basepoint_independence(holonomy):
    # Deformations computed from two different basepoints are conjugate by a
    # single Moebius map; conjugate representations share all tr^2 values,
    # which determine the representation up to conjugacy.
    mc = WeightedMulticurve(((GroupWord((1,)), math.pi / 2.0),))
    gs1 = GraftedStructure(holonomy, mc, depth=6)
    rp1 = gs1.rho_prime
    hol2 = fuchsian_from_fn(holonomy.fn)
    object.__setattr__(hol2, "basepoint", 0.4 + 1.7j)
    gs2 = GraftedStructure(hol2, mc, depth=6)
    rp2 = gs2.rho_prime
    from cp1graft.surface import enumerate_words

    for word in enumerate_words(2):
        t1 = rp1.rho(word).trace_squared()
        t2 = rp2.rho(word).trace_squared()
        assert abs(t1 - t2) < 1e-8 * max(1.0, abs(t1))


# ---------------------------------------------------------------------------
# pleated surfaces


def test_pleated_flat_when_weight_zero(holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), 0.0),))
    mesh = pleated_surface(holonomy, mc, depth=4, truncation_radius=1.5)
    for f in mesh.faces:
        for p in f.image_polygon():
            assert abs(p.z.imag) < 1e-9


def test_pleated_dihedral_equals_weight(holonomy, half_pi_structure):
    gs = half_pi_structure
    mesh = pleated_surface(
        holonomy, gs.multicurve, depth=6, truncation_radius=2.0, structure=gs
    )
    from cp1graft.moebius import angle_between

    assert len(mesh.edges) >= 1
    for e in mesh.edges[:6]:
        f1 = mesh.faces[e.face_ids[0]]
        f2 = mesh.faces[e.face_ids[1]]
        got = angle_between(f1.plane.boundary, f2.plane.boundary)
        assert got == pytest.approx(e.weight, abs=1e-7)
        assert e.weight == pytest.approx(math.pi / 2.0, abs=1e-12)


def test_pleated_equivariance(holonomy, half_pi_structure):
    gs = half_pi_structure
    mesh = pleated_surface(
        holonomy, gs.multicurve, depth=6, truncation_radius=2.0, structure=gs
    )
    rp = gs.rho_prime
    rng = np.random.default_rng(3)
    words = [GroupWord((l,)) for l in (1, 2, -3, 4)]
    for _ in range(20):
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.4, 2.0))
        if min(distance_to_leaf(z, lf.geodesic) for lf in gs.base_leaves) < 1e-5:
            continue
        w = words[rng.integers(0, len(words))]
        lhs = mesh.beta(holonomy.rho(w)(z))
        rhs = apply_isometry(rp.rho(w), mesh.beta(z))
        assert np.linalg.norm(lhs.coords() - rhs.coords()) < 1e-7


def test_pleated_projection_relation(holonomy, half_pi_structure):
    # beta(kappa(p)) = Psi_p(f(p)) on stratum points.
    gs = half_pi_structure
    rng = np.random.default_rng(8)
    for _ in range(25):
        z = complex(rng.uniform(-1.5, 1.5), rng.uniform(0.3, 2.5))
        if min(distance_to_leaf(z, lf.geodesic) for lf in gs.base_leaves) < 1e-4:
            continue
        bmap = gs.bending_map(z)
        plane = PlaneH3(OrientedCircle.real_line(True).transform(bmap))
        psi = nearest_point_projection(plane, gs.develop(z))
        beta = apply_isometry(bmap, embed_h3(z))
        assert np.linalg.norm(psi.coords() - beta.coords()) < 1e-6


# ---------------------------------------------------------------------------
# developing continuation and collapse


def test_develop_constant_path(two_pi_structure):
    res = develop_and_lift(two_pi_structure, [0.2 + 1.1j])
    assert res.ok
    assert chordal_distance(res.endpoint, cp1(0.2 + 1.1j)) < 1e-12


def test_develop_null_homotopic_square(two_pi_structure):
    square = [0.1 + 0.9j, 0.3 + 0.9j, 0.3 + 1.1j, 0.1 + 1.1j, 0.1 + 0.9j]
    res = develop_and_lift(two_pi_structure, square)
    assert res.ok and not res.crossings
    assert chordal_distance(res.endpoint, cp1(square[0])) < 1e-9


def test_develop_crossing_cylinder_with_wrap(two_pi_structure):
    gs = two_pi_structure
    # Cross the cuff-1 axis (the vertical geodesic) and come back.
    path = [0.3 + 1.0j, -0.3 + 1.0j, -0.3 + 1.2j, 0.3 + 1.2j, 0.3 + 1.0j]
    res = develop_and_lift(gs, path, wraps=[1, 1])
    assert len(res.crossings) == 2
    assert res.ok
    assert chordal_distance(res.endpoint, cp1(path[0])) < 1e-9


def test_develop_invalid_wrap_fails(two_pi_structure, holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), math.pi / 2.0),))
    gs = GraftedStructure(holonomy, mc, depth=5)
    path = [0.3 + 1.0j, -0.3 + 1.0j]
    res = develop_and_lift(gs, path, wraps=[1])
    assert not res.ok
    assert "chart" in res.messages[0]


def test_develop_wrap_precondition(two_pi_structure):
    path = [0.3 + 1.0j, -0.3 + 1.0j]
    from cp1graft.moebius import DegenerateInputError

    with pytest.raises(DegenerateInputError):
        develop_and_lift(two_pi_structure, path, wraps=[3])


def test_collapse_stratum_identity(two_pi_structure):
    z = 0.3 + 1.4j
    assert collapse(two_pi_structure, StratumPoint(z)) == z


def test_collapse_crescent_fiber(two_pi_structure):
    gs = two_pi_structure
    leaf = gs.base_leaves[0]
    a = collapse(gs, CrescentPoint(leaf, x=0.4, y=0.1))
    b = collapse(gs, CrescentPoint(leaf, x=0.4, y=leaf.weight - 0.1))
    assert abs(a - b) < 1e-12


def test_collapse_seam_continuity(two_pi_structure):
    gs = two_pi_structure
    leaf = gs.base_leaves[0]
    n = leaf_normalizer(gs, leaf)
    x = 0.7
    # Stratum point on the leaf at arclength parameter x.
    on_leaf = n.inverse()(1j * math.exp(x))
    via_crescent = collapse(gs, CrescentPoint(leaf, x=x, y=0.0))
    assert abs(on_leaf - via_crescent) < 1e-9


def test_collapse_out_of_chart(two_pi_structure):
    gs = two_pi_structure
    leaf = gs.base_leaves[0]
    with pytest.raises(LiftFailure):
        collapse(gs, CrescentPoint(leaf, x=0.0, y=leaf.weight + 1.0))


# ---------------------------------------------------------------------------
# depth stability


def test_depth_stability(holonomy):
    mc = WeightedMulticurve(((GroupWord((1,)), math.pi / 3.0),))
    rp6 = grafted_holonomy(holonomy, mc, depth=6)
    rp8 = grafted_holonomy(holonomy, mc, depth=8)
    for a, b in zip(rp6.generators, rp8.generators):
        assert a.proj_distance(b) < 1e-8
