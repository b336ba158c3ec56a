import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyltrans import fileio
from cyltrans.errors import InsufficientResolution
from cyltrans.instances import (
    GenSpec,
    MIN_MARGIN,
    common_point_of,
    gen_common_point,
    gen_coplanar_lines,
    gen_hyperboloid,
    gen_oracle_pairs,
    gen_rounded,
    gen_stack,
    generate,
    hyperboloid_line,
    line_distance,
    mc_crossing_oracle,
    pair_margins,
    polygon_corpus,
)
from cyltrans.rounded import cover_lines
from cyltrans.solid import (
    Cylinder3,
    Line3,
    crosses,
    first_disjoint_pair,
    intersects,
    line_hits_cylinder,
    pair_extents,
)
from cyltrans.transversal import build_digraph, solve, verify_report


def all_pairs_intersect(fam):
    return all(intersects(A, B) for A, B in itertools.combinations(fam, 2))


def off_diagonal_min(m):
    m = m.copy()
    np.fill_diagonal(m, np.inf)
    return m.min()


# -- common point -------------------------------------------------------------------


def test_common_point_single():
    assert len(gen_common_point(1, 0)) == 1


def test_common_point_56_pairwise():
    fam = gen_common_point(56, 1)
    assert len(fam) == 56
    assert all_pairs_intersect(fam)
    assert off_diagonal_min(pair_margins(fam)) >= MIN_MARGIN


def test_common_point_fiber_hits_all():
    fam = gen_common_point(56, 1)
    p = common_point_of(56, 1)
    for A in fam:
        L = Line3(tuple(p), A.direction)
        assert sum(line_hits_cylinder(L, B) for B in fam) == 56


@pytest.mark.parametrize("shape", ["round", "segment"])
def test_common_point_arcless_shapes(shape):
    fam = gen_common_point(8, 2, shape)
    assert all_pairs_intersect(fam)
    assert build_digraph(fam).matrix.sum() == 0
    if shape == "segment":
        assert all(len(A.section) == 2 for A in fam)


def test_common_point_rejects_bad_shape():
    with pytest.raises(ValueError):
        gen_common_point(3, 0, "star")


# -- coplanar lines -----------------------------------------------------------------------


def test_coplanar_two():
    A, B = gen_coplanar_lines(2, 0)
    assert intersects(A, B)


def test_coplanar_56():
    fam = gen_coplanar_lines(56, 4)
    assert all_pairs_intersect(fam)
    assert off_diagonal_min(pair_margins(fam)) >= MIN_MARGIN
    for A in fam:
        assert abs(A.axis[2]) < 1e-12


def test_coplanar_no_common_triple():
    fam = gen_coplanar_lines(56, 4)
    rng = np.random.default_rng(0)
    # the core lines cross pairwise at distinct points, so no point is in 3 thin tubes
    axes = [A.axis[:2] for A in fam]
    cents = [A.points.mean(axis=0)[:2] for A in fam]
    for _ in range(1000):
        i, j, k = rng.choice(56, 3, replace=False)
        M = np.array([axes[i], -axes[j]]).T
        s = np.linalg.solve(M, cents[j] - cents[i])
        x = cents[i] + s[0] * axes[i]
        nk = np.array([-axes[k][1], axes[k][0]])
        assert abs(np.dot(x - cents[k], nk)) > 4e-3


def test_coplanar_solve():
    fam = gen_coplanar_lines(56, 4)
    r = solve(fam)
    assert len(r.hits) >= 2 and verify_report(fam, r)


# -- hyperboloid -------------------------------------------------------------------------------


def test_hyperboloid_rulings_lie_on_surface():
    for theta in np.linspace(0, 2 * math.pi, 7):
        for ruling in (1, 2):
            p, d = hyperboloid_line(theta, ruling)
            for t in (-3.0, 0.5, 2.0):
                x = p + t * d
                assert x[0] ** 2 + x[1] ** 2 - x[2] ** 2 == pytest.approx(1.0)


def test_hyperboloid_opposite_angles_are_parallel():
    # theta_G = theta_F + pi gives parallel lines at distance 2: the one exception
    pf, df = hyperboloid_line(0.0, 1)
    pg, dg = hyperboloid_line(math.pi, 2)
    assert np.linalg.norm(np.cross(df, dg)) < 1e-12
    assert line_distance(pf, df, pg, dg) == pytest.approx(2.0)


def test_hyperboloid_cross_rulings_meet():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tf, tg = rng.uniform(0, 2 * math.pi, 2)
        if abs((tg - tf) % (2 * math.pi) - math.pi) < 1e-2:
            continue
        pf, df = hyperboloid_line(tf, 1)
        pg, dg = hyperboloid_line(tg, 2)
        assert line_distance(pf, df, pg, dg) < 1e-9


def test_hyperboloid_one_per_side():
    F, G = gen_hyperboloid(1, 0)
    assert intersects(F[0], G[0])


def test_hyperboloid_56_cross_pairs():
    F, G = gen_hyperboloid(56, 5)
    assert len(F) == len(G) == 56
    assert all(intersects(A, B) for A in F for B in G)


def test_hyperboloid_same_side_skew():
    F, _ = gen_hyperboloid(56, 5)
    delta = 1e-2
    found = False
    for A, B in itertools.combinations(F, 2):
        pa, pb = A.points.mean(axis=0), B.points.mean(axis=0)
        if line_distance(pa, A.axis, pb, B.axis) > 2 * delta:
            found = True
            assert not intersects(A, B)
            break
    assert found


# -- stack --------------------------------------------------------------------------------------


def test_stack_two_crosses():
    needle, plate = gen_stack(2, 0)
    assert crosses(needle, plate)
    assert mc_crossing_oracle(needle, plate) is True


def test_stack_28_digraph_and_solve():
    fam = gen_stack(28, 0)
    G = build_digraph(fam)
    assert G.outdeg[0] == 27
    assert G.indeg[0] == 0
    r = solve(fam, seed=2)
    assert len(r.hits) == 28


def test_stack_pairwise():
    fam = gen_stack(56, 3)
    assert first_disjoint_pair(fam) is None


# -- rounded --------------------------------------------------------------------------------------


def test_rounded_single():
    assert len(gen_rounded(1, 2, 0)) == 1


def test_rounded_precondition_passes():
    bodies = gen_rounded(200, 2, 9)
    cover_lines(bodies, 2)
    for b in bodies:
        assert 1.0 <= b.r <= 2.0 and b.R < 2 * b.r


def test_rounded_d1_balls():
    bodies = gen_rounded(500, 1, 9)
    assert all(b.r == b.R for b in bodies)
    assert len(cover_lines(bodies, 1).directions) <= 32


# -- determinism ------------------------------------------------------------------------------------


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["common-point", "coplanar-lines", "stack", "hyperboloid", "rounded"]),
       st.integers(0, 1000))
def test_seed_determinism(kind, seed):
    spec = GenSpec(kind, 6, seed, {"D": 2.0} if kind == "rounded" else {})

    def render():
        out = generate(spec)
        if kind == "hyperboloid":
            return fileio.dumps(fileio.bipartite_to_json(*out))
        if kind == "rounded":
            return fileio.dumps(fileio.rounded_to_json(out, 2.0))
        return fileio.dumps(fileio.family_to_json(out))

    assert render() == render()


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec("common-point", 0, 1)
    with pytest.raises(ValueError):
        GenSpec("nope", 3, 1)
    with pytest.raises(ValueError):
        GenSpec("coplanar-lines", 3, 1, {"delta": -1.0})


def test_polygon_corpus_sizes():
    corpus = polygon_corpus(30, 1)
    assert len(corpus) == 30
    assert all(3 <= len(K) <= 64 for K in corpus)


# -- oracle -------------------------------------------------------------------------------------------


def test_oracle_disjoint_is_false():
    A = Cylinder3((1, 0, 0), ((0, -1, -1), (0, 1, -1), (0, 1, 1), (0, -1, 1)))
    B = Cylinder3((0, 1, 0), ((-1, 0, 9), (1, 0, 9), (1, 0, 11), (-1, 0, 11)))
    assert mc_crossing_oracle(A, B) is False


def test_oracle_coarse_raises():
    A = Cylinder3((1, 0, 0), ((0, 0, 0),))
    B = Cylinder3((0, 1, 0), ((-1, 0, -1), (1, 0, -1), (1, 0, 1), (-1, 0, 1)))
    with pytest.raises(InsufficientResolution):
        mc_crossing_oracle(A, B, resolution=8)


def test_oracle_pairs_are_separated():
    pairs = gen_oracle_pairs(30, 1)
    assert len(pairs) == 30
    flags = []
    for A, B in pairs:
        ext = pair_extents([A, B])
        assert ext.margins()[0, 1] >= 1e-3
        flags.append(crosses(A, B))
    assert any(flags) and not all(flags)


def test_oracle_agrees_on_sample():
    for A, B in gen_oracle_pairs(8, 2):
        assert mc_crossing_oracle(A, B, resolution=40) == crosses(A, B)
