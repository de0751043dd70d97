import math

import numpy as np
import pytest

from cp1graft.moebius import DegenerateInputError, MoebiusMap, chordal_distance, classify
from cp1graft.surface import (
    FNCoordinates,
    GroupWord,
    SurfacePresentation,
    axis,
    cuff_length_from_trace,
    enumerate_words,
    fuchsian_from_fn,
    jorgensen_flags,
    limit_set_sample,
)


# ---------------------------------------------------------------------------
# words


def test_presentation_relation_reduced():
    rel = SurfacePresentation(genus=2).relation
    assert len(rel) == 8
    assert rel.letters == (1, 2, -1, -2, 3, 4, -3, -4)


def test_word_reduction_and_inverse():
    w = GroupWord((1, 2, -2, 3))
    assert w.letters == (1, 3)
    assert (w * w.inverse()).letters == ()


def test_word_parse_roundtrip():
    w = GroupWord.parse("aBcD")
    assert w.letters == (1, -2, 3, -4)
    assert str(w) == "aBcD"


def test_enumerate_words_counts():
    assert len(enumerate_words(1)) == 8
    assert len(enumerate_words(2)) == 8 + 8 * 7


def test_enumerate_words_shortlex_stable():
    a = [w.letters for w in enumerate_words(3)]
    b = [w.letters for w in enumerate_words(3)]
    assert a == b
    keys = [w.shortlex_key() for w in enumerate_words(3)]
    assert keys == sorted(keys)


# ---------------------------------------------------------------------------
# Fenchel-Nielsen construction


def test_relation_residual(holonomy):
    assert holonomy.relation_residual() < 1e-8


def test_generators_real(holonomy):
    assert holonomy.max_imag_entry() < 1e-10


def test_generators_hyperbolic(holonomy):
    for g in holonomy.generators:
        assert classify(g).kind == "hyperbolic"


def test_cuff_trace_identity():
    length = 2.0 * math.acosh(1.5)
    hol = fuchsian_from_fn(FNCoordinates((length, 2.0, 2.2)))
    tr2 = hol.rho(hol.cuff_words[0]).trace_squared()
    assert tr2.real == pytest.approx(9.0, abs=1e-9)  # |tr| = 2 cosh(l/2) = 3
    assert abs(tr2.imag) < 1e-12


def test_cuff_length_recovery_random_instances():
    rng = np.random.default_rng(17)
    for _ in range(20):
        lengths = tuple(rng.uniform(0.8, 3.5, size=3))
        twists = tuple(rng.uniform(-2.0, 2.0, size=3))
        hol = fuchsian_from_fn(FNCoordinates(lengths, twists))
        assert hol.relation_residual() < 1e-8
        for word, want in zip(hol.cuff_words, lengths):
            got = cuff_length_from_trace(hol.rho(word))
            assert got == pytest.approx(want, abs=1e-6)


def test_twists_preserve_cuff_axes():
    base = fuchsian_from_fn(FNCoordinates((2.0, 2.4, 1.9)))
    twisted = fuchsian_from_fn(FNCoordinates((2.0, 2.4, 1.9), (0.7, -1.2, 0.4)))
    for word in base.cuff_words:
        g0 = axis(base.rho(word))
        g1 = axis(twisted.rho(word))
        assert chordal_distance(g0.p, g1.p) < 1e-8
        assert chordal_distance(g0.q, g1.q) < 1e-8


def test_nonpositive_length_rejected():
    with pytest.raises(DegenerateInputError):
        FNCoordinates((0.0, 1.0, 1.0))


def test_word_matrix_consistency(holonomy):
    # rho of a word equals the ordered product of generator matrices.
    for w in enumerate_words(3)[::17]:
        prod = MoebiusMap.identity()
        for l in w.letters:
            prod = prod @ holonomy.generator(l)
        assert prod.proj_distance(holonomy.rho(w)) < 1e-10


def test_jorgensen_flags_clean(holonomy):
    pairs = [(GroupWord((1,)), GroupWord((2,))), (GroupWord((3,)), GroupWord((4,)))]
    flags = jorgensen_flags(holonomy, pairs)
    # Heuristic only: report, never assert content; a discrete group built
    # from hexagon data should produce no flags on generator pairs.
    assert isinstance(flags, list)
    if flags:
        print("jorgensen flags:", flags)


# ---------------------------------------------------------------------------
# axes and limit sets


def test_axis_diagonal():
    g = axis(MoebiusMap.from_entries(2, 0, 0, 0.5))
    # z -> 4z: attracting fixed point is infinity.
    assert g.q.is_infinity
    assert abs(g.p.as_complex()) < 1e-12


def test_axis_inverse_swaps_orientation():
    m = MoebiusMap.from_entries(2, 1, 1, 1)
    g = axis(m)
    h = axis(m.inverse())
    assert chordal_distance(g.p, h.q) < 1e-10
    assert chordal_distance(g.q, h.p) < 1e-10


def test_axis_conjugation_naturality():
    rng = np.random.default_rng(31)
    m = MoebiusMap.from_entries(2, 1, 1, 1)
    for _ in range(10):
        g = MoebiusMap(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        conj = g @ m @ g.inverse()
        want = axis(m).transform(g)
        got = axis(conj)
        assert chordal_distance(got.p, want.p) < 1e-7
        assert chordal_distance(got.q, want.q) < 1e-7


def test_axis_elliptic_rejected():
    with pytest.raises(DegenerateInputError):
        axis(MoebiusMap.from_entries(0, -1, 1, 0))


def test_limit_set_real_for_fuchsian(holonomy):
    pts = limit_set_sample(holonomy, depth=4)
    assert len(pts) > 50
    for p in pts:
        if p.is_infinity:
            continue
        z = p.as_complex()
        assert abs(z.imag) < 1e-8 * max(1.0, abs(z))


def test_limit_set_depth_monotone(holonomy):
    def keys(pts):
        return {tuple(np.round(p.sphere_coords(), 6)) for p in pts}

    k3 = keys(limit_set_sample(holonomy, depth=3))
    k4 = keys(limit_set_sample(holonomy, depth=4))
    assert k3 <= k4


def test_limit_set_deterministic(holonomy):
    a = limit_set_sample(holonomy, depth=3)
    b = limit_set_sample(holonomy, depth=3)
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert chordal_distance(p, q) == 0.0
