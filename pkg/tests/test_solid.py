import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyltrans.errors import ParallelAxes, ZeroDirection
from cyltrans.instances import gen_common_point, gen_stack, mc_crossing_oracle, random_unit
from cyltrans.planar import ConvexPolygon, Slab2, point_in_polygon
from cyltrans.solid import (
    Cylinder3,
    HitCounter,
    Line3,
    crosses,
    cylinder_width,
    fiber,
    first_disjoint_pair,
    intersects,
    line_hits_cylinder,
    make_frame,
    pair_extents,
    shadow,
    witness_point,
)


def box_cylinder(axis, half_widths, center=(0.0, 0.0, 0.0)):
    """Cylinder along a coordinate axis with a rectangular section."""
    axis = np.asarray(axis, dtype=float)
    k = int(np.argmax(np.abs(axis)))
    others = [i for i in range(3) if i != k]
    gens = []
    for sa in (-1, 1):
        for sb in (-1, 1):
            g = np.array(center, dtype=float)
            g[others[0]] += sa * half_widths[0]
            g[others[1]] += sb * half_widths[1]
            gens.append(tuple(g))
    return Cylinder3(tuple(axis), tuple(gens))


FAT_X = box_cylinder((1, 0, 0), (1, 1))
NEEDLE_Y = box_cylinder((0, 1, 0), (0.1, 0.1))
FAT_Y = box_cylinder((0, 1, 0), (1, 1))


# -- frames ------------------------------------------------------------------------


def test_frame_axis_aligned():
    f = make_frame((0, 0, 1))
    assert f.e1 == pytest.approx((1, 0, 0)) and f.e2 == pytest.approx((0, 1, 0))
    f = make_frame((1, 0, 0))
    assert f.e1 == pytest.approx((0, 1, 0)) and f.e2 == pytest.approx((0, 0, 1))


def test_frame_diagonal_orthonormal():
    f = make_frame(np.ones(3) / math.sqrt(3))
    B = np.array([f.e1, f.e2, f.u])
    assert B @ B.T == pytest.approx(np.eye(3), abs=1e-12)
    assert np.linalg.det(B) == pytest.approx(1.0)
    # seeded from the x axis: e1 lies in the plane spanned by x and u
    assert np.dot(np.cross((1, 0, 0), f.u), f.e1) == pytest.approx(0.0, abs=1e-12)


def test_frame_zero_raises():
    with pytest.raises(ZeroDirection):
        make_frame((0, 0, 0))


@settings(max_examples=200, deadline=None)
@given(st.tuples(*[st.floats(-10, 10) for _ in range(3)]).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_frame_right_handed(u):
    f = make_frame(u)
    B = np.array([f.e1, f.e2, f.u])
    assert B @ B.T == pytest.approx(np.eye(3), abs=1e-9)
    assert np.linalg.det(B) == pytest.approx(1.0, abs=1e-9)


# -- cylinders and shadows --------------------------------------------------------------


def test_cylinder_validation():
    with pytest.raises(ZeroDirection):
        Cylinder3((0, 0, 0), ((0, 0, 0),))
    with pytest.raises(ValueError):
        Cylinder3((0, 0, 1), ())
    with pytest.raises(ValueError):
        Cylinder3((0, 0, 1), ((0, 0, math.nan),))


def test_shadow_along_own_axis_is_square():
    A = Cylinder3((1, 0, 0), ((0, 1, 1), (0, 1, -1), (0, -1, 1), (0, -1, -1)))
    s = shadow(A, make_frame((1, 0, 0)))
    assert isinstance(s, ConvexPolygon)
    assert len(s) == 4
    assert cylinder_width(A) == pytest.approx(2.0)


def test_shadow_across_is_slab():
    A = Cylinder3((1, 0, 0), ((0, 1, 1), (0, 1, -1), (0, -1, 1), (0, -1, -1)))
    f = make_frame((0, 1, 0))
    s = shadow(A, f)
    assert isinstance(s, Slab2)
    assert s.width == pytest.approx(2.0)
    # normal is the in-plane direction of z
    n3 = s.unit_normal[0] * np.array(f.e1) + s.unit_normal[1] * np.array(f.e2)
    assert abs(n3[2]) == pytest.approx(1.0)


def test_shadow_of_line_is_zero_width_slab():
    A = Cylinder3((0, 0, 1), ((0, 0, 0),))
    s = shadow(A, make_frame((1, 0, 0)))
    assert isinstance(s, Slab2) and s.width == 0.0
    assert cylinder_width(A) == 0.0


def test_width_triangle_section():
    A = Cylinder3((1, 0, 0), ((0, 0, 0), (0, 4, 0), (0, 0, 3)))
    assert cylinder_width(A) == pytest.approx(2.4, abs=1e-12)


# -- intersects / crosses -------------------------------------------------------------------


def test_intersects_examples():
    B = box_cylinder((0, 1, 0), (1, 1))
    assert intersects(FAT_X, B)
    assert not intersects(FAT_X, box_cylinder((0, 1, 0), (1, 1), center=(0, 0, 10)))
    assert intersects(FAT_X, FAT_X)


def test_intersects_parallel():
    assert intersects(FAT_X, box_cylinder((1, 0, 0), (1, 1), center=(0, 1.5, 0)))
    assert not intersects(FAT_X, box_cylinder((1, 0, 0), (1, 1), center=(0, 3, 0)))


def test_crosses_needle_and_fat():
    assert crosses(NEEDLE_Y, FAT_X)
    assert not crosses(FAT_X, NEEDLE_Y)


def test_crosses_equal_boxes_mutually():
    assert crosses(FAT_X, FAT_Y) and crosses(FAT_Y, FAT_X)


def test_crosses_parallel_raises():
    with pytest.raises(ParallelAxes):
        crosses(FAT_X, box_cylinder((-1, 0, 0), (0.5, 0.5)))


def test_crosses_examples_match_oracle():
    assert mc_crossing_oracle(NEEDLE_Y, FAT_X) is True
    assert mc_crossing_oracle(FAT_X, NEEDLE_Y) is False
    assert mc_crossing_oracle(FAT_X, FAT_Y) is True
    far = box_cylinder((0, 1, 0), (1, 1), center=(0, 0, 10))
    assert mc_crossing_oracle(FAT_X, far) is False


# -- line hits ---------------------------------------------------------------------------------


def test_line_hits_examples():
    assert line_hits_cylinder(Line3((0, 0, 0), (1, 0, 0)), FAT_X)
    assert not line_hits_cylinder(Line3((0, 0, 10), (1, 0, 0)), FAT_X)
    assert line_hits_cylinder(Line3((0, 0, 0), (1, 1, 0)), FAT_X)


def test_line_validation():
    with pytest.raises(ZeroDirection):
        Line3((0, 0, 0), (0, 0, 0))


def test_hit_counter_matches_scalar():
    rng = np.random.default_rng(5)
    fam = gen_common_point(40, 3)
    counter = HitCounter(fam)
    for _ in range(100):
        d = rng.normal(size=3) if rng.random() < 0.8 else np.asarray(fam[int(rng.integers(40))].direction)
        L = Line3(tuple(rng.uniform(-8, 8, 3)), tuple(d))
        assert counter.hits(L) == tuple(j for j, A in enumerate(fam) if line_hits_cylinder(L, A))


# -- properties over generated families ------------------------------------------------------


@pytest.fixture(scope="module")
def family():
    return gen_common_point(30, 8)


def test_fiber_law(family):
    rng = np.random.default_rng(1)
    for A in family:
        v = A.section.array
        for _ in range(5):
            w = rng.dirichlet(np.ones(len(v)))
            p = w @ v
            assert point_in_polygon(p, A.section)
            assert line_hits_cylinder(fiber(A, p), A)


def test_intersects_symmetric(family):
    for i, A in enumerate(family):
        for B in family[i + 1:]:
            assert intersects(A, B) == intersects(B, A)


def test_crossing_implies_intersecting_and_universal_hit(family):
    rng = np.random.default_rng(2)
    seen = 0
    for i, A in enumerate(family):
        for j, B in enumerate(family):
            if i == j or not crosses(A, B):
                continue
            seen += 1
            assert intersects(A, B)
            v = A.section.array
            for _ in range(100):
                p = rng.dirichlet(np.ones(len(v))) @ v
                assert line_hits_cylinder(fiber(A, p), B)
    assert seen > 0


def test_shadow_width_monotone(family):
    for A in family:
        for C in family:
            if A is C:
                continue
            s = shadow(A, C.frame)
            assert s.width >= cylinder_width(A) - 1e-9


def test_pair_extents_agree_with_scalar(family):
    ext = pair_extents(family)
    cross = ext.crossing()
    meet = ext.overlapping()
    for i, A in enumerate(family):
        for j, B in enumerate(family):
            if i == j:
                continue
            assert cross[i, j] == crosses(A, B)
            assert meet[i, j] == intersects(A, B)


def test_pair_extents_jobs_identical(family):
    a = pair_extents(family, jobs=1)
    b = pair_extents(family, jobs=4)
    for name in ("self_lo", "self_hi", "other_lo", "other_hi", "parallel"):
        assert np.array_equal(getattr(a, name), getattr(b, name))


def test_witness_point_lies_in_both(family):
    for i in range(0, len(family), 3):
        for j in range(len(family)):
            if i == j:
                continue
            A, B = family[i], family[j]
            z = witness_point(A, B)
            assert z is not None
            for C in (A, B):
                L = Line3(tuple(z), C.direction)
                assert point_in_polygon(C.frame.project(L.point), C.section, tol=1e-7)


def test_witness_point_none_when_disjoint():
    assert witness_point(FAT_X, box_cylinder((0, 1, 0), (1, 1), center=(0, 0, 10))) is None


def test_first_disjoint_pair():
    fam = [FAT_X, FAT_Y, box_cylinder((0, 0, 1), (1, 1), center=(0, 50, 0))]
    assert first_disjoint_pair(fam) == (0, 2)
    assert first_disjoint_pair(fam[:2]) is None


def test_stack_needle_crossed_by_all():
    fam = gen_stack(10, 0)
    ext = pair_extents(fam)
    cross = ext.crossing()
    assert cross[0, 1:].all()
    assert not cross[1:, 0].any()


def test_random_units_unit():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert np.linalg.norm(random_unit(rng)) == pytest.approx(1.0)
