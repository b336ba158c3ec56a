import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyltrans.instances import polygon_corpus, random_polygon
from cyltrans.piercing import PiercingSet, piercing_points, sample_meeting_slabs, verify_piercing
from cyltrans.planar import EPS, SlabRelation, classify_slab, convex_hull, min_width_slab, Slab2

SQUARE = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1)])
SEGMENT = convex_hull([(0, 0), (2, 0)])


def regular(k, radius=1.0):
    t = 2 * math.pi * np.arange(k) / k
    return convex_hull(np.stack([radius * np.cos(t), radius * np.sin(t)], axis=1))


def as_set(points, nd=9):
    return {(round(x, nd) + 0.0, round(y, nd) + 0.0) for x, y in points}


def test_segment_gives_endpoints():
    T = piercing_points(SEGMENT)
    assert as_set(T.points) == {(0.0, 0.0), (2.0, 0.0)}
    assert T.width == 0.0


def test_point_gives_itself():
    T = piercing_points(convex_hull([(1.5, -2)]))
    assert T.points == ((1.5, -2.0),)


def test_square_six_points():
    T = piercing_points(SQUARE)
    assert as_set(T.points) == {(0, 0.5), (1, 0.5), (0, 0), (1, 0), (0, 1), (1, 1)}
    a, b, c, d = T.anchors
    assert a == b and c == d


def test_square_oracle_clean():
    T = piercing_points(SQUARE)
    assert verify_piercing(SQUARE, T, 10000, 7) == []


def test_segment_oracle_clean():
    assert verify_piercing(SEGMENT, piercing_points(SEGMENT), 10000, 3) == []


def test_twelve_gon():
    K = regular(12)
    T = piercing_points(K)
    assert len(T) <= 12
    assert verify_piercing(K, T, 10000, 1) == []


def test_missing_corner_is_caught():
    T = piercing_points(SQUARE)
    pts = tuple(p for p in T.points if p != (0.0, 0.0))
    assert len(pts) == 5
    thinned = PiercingSet(pts, T.width, T.anchors, T.rectangles, T.chords, T.slab)
    failures = verify_piercing(SQUARE, thinned, 10000, 7)
    assert failures
    # every escaping slab meets the square near the removed corner
    for S in failures[:20]:
        assert classify_slab(SQUARE, S) is SlabRelation.MEETS
        assert S.contains((0.0, 0.0), tol=0.5)


def test_verify_rejects_zero_trials():
    with pytest.raises(ValueError):
        verify_piercing(SQUARE, piercing_points(SQUARE), 0, 1)


def test_sampled_slabs_are_admissible():
    K = regular(7, 2.0)
    w = min_width_slab(K)[1]
    normals, lo, hi = sample_meeting_slabs(K, w, 500, 4)
    assert len(lo) == 500
    for k in range(500):
        S = Slab2(tuple(normals[k]), lo[k], hi[k])
        assert S.width >= w - 1e-12
        assert classify_slab(K, S) is SlabRelation.MEETS


def _check_structure(K):
    T = piercing_points(K)
    assert 1 <= len(T) <= 12
    if T.width <= EPS:
        assert len(T) <= 2
        return T
    slab = T.slab
    a, b, c, d = (np.array(p) for p in T.anchors)
    assert abs(np.dot(a - c, slab.unit_normal)) <= 1e-9
    for (e, f), (p, q) in zip(T.rectangles, T.chords):
        p, q = np.array(p), np.array(q)
        chord = q - p
        right = np.array([chord[1], -chord[0]]) / np.linalg.norm(chord)
        for x in (e, f):
            assert np.dot(np.array(x) - p, right) == pytest.approx(T.width / 2, abs=1e-9)
    return T


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_structure_on_random_polygons(seed):
    K = random_polygon(np.random.default_rng(seed))
    _check_structure(K)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0.01, 100))
def test_scale_equivariance(seed, lam):
    K = random_polygon(np.random.default_rng(seed))
    T = piercing_points(K)
    Ts = piercing_points(K.scaled(lam))
    assert len(T) == len(Ts)
    got = sorted(Ts.points)
    want = sorted((lam * x, lam * y) for x, y in T.points)
    scale = max(1.0, lam) * max(1.0, float(np.abs(K.array).max()))
    assert np.allclose(got, want, atol=1e-8 * scale)


def test_corpus_oracle_sample():
    for K in polygon_corpus(10, 123):
        T = _check_structure(K)
        assert verify_piercing(K, T, 2000, 5) == []


def test_thin_polygon():
    K = convex_hull([(0, 0), (10, 0), (10, 1e-3), (0, 2e-3)])
    T = _check_structure(K)
    assert verify_piercing(K, T, 5000, 2) == []
