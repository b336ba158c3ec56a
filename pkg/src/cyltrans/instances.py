"""Seeded instance generators and the grid connectivity oracle.

All randomness goes through ``numpy.random.Generator(PCG64(seed))`` so that a
(kind, n, seed, params) tuple always yields the same family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, QhullError

from .errors import GenerationFailed, InsufficientResolution
from .planar import EPS, ConvexPolygon, Slab2, convex_hull
from .rounded import RoundedBody
from .solid import Cylinder3, make_frame, pair_extents

MIN_MARGIN = 1e-6

KINDS = ("common-point", "coplanar-lines", "hyperboloid", "stack", "rounded")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class GenSpec:
    kind: str
    n: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.params.get("delta", 1.0) > 0.0:
            raise ValueError("delta must be positive")
        if not self.params.get("D", 1.0) >= 1.0:
            raise ValueError("D must be at least 1")


# -- random convex polygons -------------------------------------------------


def ellipse_polygon(rng: np.random.Generator, k: int, a: float, b: float,
                    min_gap: float = 0.05) -> np.ndarray:
    """k points in convex position on a rotated ellipse (sorted-angle sampling)."""
    for _ in range(1000):
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, k))
        gaps = np.diff(np.append(ang, ang[0] + 2.0 * math.pi))
        if gaps.min() >= min_gap:
            break
    else:
        ang = np.linspace(0.0, 2.0 * math.pi, k, endpoint=False)
    pts = np.stack([a * np.cos(ang), b * np.sin(ang)], axis=1)
    rot = rng.uniform(0.0, math.pi)
    c, s = math.cos(rot), math.sin(rot)
    return pts @ np.array([[c, s], [-s, c]])


def valtr_polygon(rng: np.random.Generator, k: int) -> np.ndarray:
    """Valtr's uniform random convex polygon on k vertices, centred at 0."""
    xs, ys = np.sort(rng.random(k)), np.sort(rng.random(k))

    def chains(vals):
        lo, hi = vals[0], vals[-1]
        a, b = lo, lo
        out = []
        for x in vals[1:-1]:
            if rng.random() < 0.5:
                out.append(x - a)
                a = x
            else:
                out.append(b - x)
                b = x
        out.append(hi - a)
        out.append(b - hi)
        return np.array(out)

    dx, dy = chains(xs), chains(ys)
    rng.shuffle(dy)
    vec = np.stack([dx, dy], axis=1)
    vec = vec[np.argsort(np.arctan2(vec[:, 1], vec[:, 0]))]
    pts = np.cumsum(vec, axis=0)
    return pts - (pts.min(axis=0) + pts.max(axis=0)) / 2.0


def random_polygon(rng: np.random.Generator, k_min: int = 3, k_max: int = 64) -> ConvexPolygon:
    k = int(rng.integers(k_min, k_max + 1))
    if rng.random() < 0.5:
        pts = ellipse_polygon(rng, k, rng.uniform(0.2, 3.0), rng.uniform(0.2, 3.0), min_gap=0.0)
    else:
        pts = valtr_polygon(rng, k) * rng.uniform(0.5, 5.0)
    return convex_hull(pts + rng.uniform(-5.0, 5.0, 2))


def polygon_corpus(count: int, seed: int) -> List[ConvexPolygon]:
    rng = rng_for(seed)
    return [random_polygon(rng) for _ in range(count)]


def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def _section_cylinder(axis: np.ndarray, section: np.ndarray, anchor: np.ndarray) -> Cylinder3:
    f = make_frame(axis)
    gens = anchor[None, :] + section[:, :1] * np.asarray(f.e1) + section[:, 1:] * np.asarray(f.e2)
    return Cylinder3.from_arrays(axis, gens)


# -- margin control -----------------------------------------------------------


def pair_margins(family: Sequence[Cylinder3], rows=None, cols=None) -> np.ndarray:
    return pair_extents(family, rows, cols).margins()


def _enforce_margins(family: List[Cylinder3], resample: Callable[[int], Cylinder3],
                     frozen: Sequence[int] = (), rounds: int = 200,
                     arcless: bool = False) -> List[Cylinder3]:
    """Redraw cylinders until every pair meets and clears MIN_MARGIN.

    With ``arcless`` crossing pairs are redrawn too, so the digraph ends up empty.
    """
    n = len(family)
    for _ in range(rounds):
        ext = pair_extents(family)
        m = ext.margins()
        bad = (m < MIN_MARGIN) | (~ext.overlapping(0.0) & ~ext.parallel)
        if arcless:
            arcs = ext.crossing(0.0)
            bad |= arcs | arcs.T
        np.fill_diagonal(bad, False)
        bad_i, bad_j = np.nonzero(np.triu(bad))
        if len(bad_i) == 0:
            return family
        redo = set()
        for i, j in zip(bad_i, bad_j):
            redo.add(int(j) if int(j) not in frozen else int(i))
        for k in sorted(redo):
            if k in frozen:
                raise GenerationFailed("margin conflict between frozen cylinders")
            family[k] = resample(k)
    raise GenerationFailed(f"could not reach predicate margin {MIN_MARGIN} for n={n}")


# -- generators ---------------------------------------------------------------


def gen_common_point(n: int, seed: int, shape: str = "ellipse") -> List[Cylinder3]:
    """n cylinders through a hidden common point (not part of the output).

    shape "ellipse" draws 4-12 gons inscribed in random ellipses.  "round"
    uses one regular 48-gon for every member and "segment" uses segment
    sections (flat strips); both redraw members until no pair crosses.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if shape not in ("ellipse", "round", "segment"):
        raise ValueError(f"unknown section shape {shape!r}")
    rng = rng_for(seed)
    p = rng.uniform(-5.0, 5.0, 3)
    ring = np.linspace(0.0, 2.0 * math.pi, 48, endpoint=False)

    def draw(_k=None) -> Cylinder3:
        axis = random_unit(rng)
        if shape == "ellipse":
            k = int(rng.integers(4, 13))
            sec = ellipse_polygon(rng, k, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0))
            # hidden point sits at a random interior convex combination
            wts = rng.dirichlet(np.ones(k))
            inner = 0.5 * sec.mean(axis=0) + 0.5 * (wts @ sec)
        elif shape == "round":
            rot = rng.uniform(0.0, 2.0 * math.pi)
            sec = np.stack([np.cos(ring + rot), np.sin(ring + rot)], axis=1)
            off = rng.uniform(0.0, 2.0 * math.pi)
            inner = 0.8 * math.sqrt(rng.random()) * np.array([math.cos(off), math.sin(off)])
        else:
            t = rng.uniform(0.0, math.pi)
            half = rng.uniform(0.5, 3.0)
            sec = np.array([[-half, 0.0], [half, 0.0]]) @ np.array(
                [[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])
            inner = rng.uniform(-0.9, 0.9) * sec[1]
        sec = sec - inner
        anchor = p + rng.uniform(-3.0, 3.0) * axis
        return _section_cylinder(axis, sec, anchor)

    family = [draw() for _ in range(n)]
    return _enforce_margins(family, draw, arcless=shape != "ellipse",
                            rounds=200 if shape == "ellipse" else 2000)


def common_point_of(n: int, seed: int) -> np.ndarray:
    """The hidden point used by gen_common_point(n, seed)."""
    return rng_for(seed).uniform(-5.0, 5.0, 3)


def gen_coplanar_lines(n: int, seed: int, delta: float = 1e-3) -> List[Cylinder3]:
    """Thin cylinders around pairwise non-parallel lines in the plane z = 0."""
    if n < 1 or delta <= 0.0:
        raise ValueError("need n >= 1 and delta > 0")
    rng = rng_for(seed)
    # distinct angles: one per slot of a uniform partition of [0, pi)
    slots = rng.permutation(n)
    theta = math.pi * (slots + rng.uniform(0.2, 0.8, n)) / n
    # z-extents drawn from separated ladders keep every containment margin >= 2e-6
    step = 2e-6
    lo_rank, hi_rank = rng.permutation(n), rng.permutation(n)

    def draw(k: int) -> Cylinder3:
        axis = np.array([math.cos(theta[k]), math.sin(theta[k]), 0.0])
        normal = np.array([-axis[1], axis[0], 0.0])
        pivot = np.append(rng.uniform(-10.0, 10.0, 2), 0.0)
        m = int(rng.integers(4, 13))
        sec = ellipse_polygon(rng, m, 1.0, 1.0)
        # rescale so the z-range is exactly [-zlo, zhi]
        zlo = 0.5 * delta + step * lo_rank[k]
        zhi = 0.5 * delta + step * hi_rank[k]
        z = sec[:, 1]
        z = -zlo + (z - z.min()) / (z.max() - z.min()) * (zlo + zhi)
        w = sec[:, 0] * delta
        gens = pivot[None, :] + w[:, None] * normal + z[:, None] * np.array([0.0, 0.0, 1.0])
        return Cylinder3.from_arrays(axis, gens)

    family = [draw(k) for k in range(n)]
    return _enforce_margins(family, draw)


def hyperboloid_line(theta: float, ruling: int) -> Tuple[np.ndarray, np.ndarray]:
    """Point and direction of a ruling of x^2 + y^2 - z^2 = 1 (ruling 1 or 2)."""
    c, s = math.cos(theta), math.sin(theta)
    sign = 1.0 if ruling == 1 else -1.0
    return np.array([c, s, 0.0]), np.array([-s, c, sign])


def line_distance(p1, d1, p2, d2) -> float:
    cr = np.cross(d1, d2)
    nn = float(np.linalg.norm(cr))
    if nn < 1e-15:
        diff = np.asarray(p2) - np.asarray(p1)
        return float(np.linalg.norm(diff - np.dot(diff, d1) / np.dot(d1, d1) * np.asarray(d1)))
    return abs(float(np.dot(np.asarray(p2) - np.asarray(p1), cr))) / nn


def gen_hyperboloid(n_per_side: int, seed: int, delta: float = 1e-2,
                    max_meet: float = 1e3) -> Tuple[List[Cylinder3], List[Cylinder3]]:
    """Thickened lines from the two rulings of the hyperboloid x^2+y^2-z^2=1.

    Every F-line meets every G-line unless they are parallel; angles whose
    meeting point would lie beyond ``max_meet`` from the origin are redrawn.
    """
    if n_per_side < 1 or delta <= 0.0:
        raise ValueError("need n_per_side >= 1 and delta > 0")
    rng = rng_for(seed)
    # the lines theta_F and theta_G meet at height tan((theta_G - theta_F) / 2)
    gap = math.pi - 2.0 * math.atan(max_meet)

    def ok(tf: float, tg: float) -> bool:
        diff = (tg - tf) % (2.0 * math.pi)
        if abs(diff - math.pi) < gap:
            return False
        pf, df = hyperboloid_line(tf, 1)
        pg, dg = hyperboloid_line(tg, 2)
        return line_distance(pf, df, pg, dg) <= delta / 2.0

    thetas_f = list(rng.uniform(0.0, 2.0 * math.pi, n_per_side))
    thetas_g: List[float] = []
    for _ in range(n_per_side):
        for _attempt in range(10000):
            tg = float(rng.uniform(0.0, 2.0 * math.pi))
            if all(ok(tf, tg) for tf in thetas_f):
                thetas_g.append(tg)
                break
        else:
            raise GenerationFailed("hyperboloid resampling exhausted")

    def thick(theta: float, ruling: int) -> Cylinder3:
        p, d = hyperboloid_line(theta, ruling)
        m = int(rng.integers(4, 13))
        sec = ellipse_polygon(rng, m, delta, delta * rng.uniform(0.5, 1.0))
        return _section_cylinder(d / np.linalg.norm(d), sec - sec.mean(axis=0), p)

    F = [thick(t, 1) for t in thetas_f]
    G = [thick(t, 2) for t in thetas_g]
    nF = len(F)
    for _ in range(200):
        m = pair_margins(F + G, rows=np.arange(nF), cols=np.arange(nF, 2 * nF))
        bad = np.argwhere(m < MIN_MARGIN)
        if len(bad) == 0:
            return F, G
        for j in sorted({int(b[1]) for b in bad}):
            G[j] = thick(thetas_g[j], 2)
    raise GenerationFailed("hyperboloid margins not reached")


def gen_stack(n: int, seed: int) -> List[Cylinder3]:
    """A thin needle along y (index 0) plus n-1 wide plates it passes through.

    Each plate's section spans the needle's shadow by more than 2 units, so
    every plate severs the needle.  Plates sit at slightly different heights
    on the needle's axis; pairs that fail to meet are redrawn.
    """
    if n < 2:
        raise ValueError("gen_stack needs n >= 2")
    rng = rng_for(seed)
    half = 0.1
    needle = Cylinder3.from_arrays(
        (0.0, 1.0, 0.0),
        [(sx * half, 0.0, sz * half) for sx in (-1.0, 1.0) for sz in (-1.0, 1.0)],
    )
    heights = np.sort(rng.uniform(-0.05, 0.05, n - 1))

    def draw(k: int) -> Cylinder3:
        # axis at least 30 degrees away from the needle
        while True:
            axis = random_unit(rng)
            if abs(axis[1]) < math.cos(math.radians(30.0)):
                break
        y = np.array([0.0, 1.0, 0.0])
        across = np.cross(y, axis)
        across /= np.linalg.norm(across)
        up = np.cross(axis, across)
        m = int(rng.integers(4, 13))
        sec = ellipse_polygon(rng, m, rng.uniform(3.0, 6.0), rng.uniform(0.3, 1.0))
        # long side across the needle, then centre on the needle's axis
        sec = _long_axis_first(sec)
        sec = sec - sec.mean(axis=0)
        sec[:, 0] += rng.uniform(-0.5, 0.5)
        anchor = np.array([0.0, heights[k - 1], 0.0])
        gens = anchor[None, :] + sec[:, :1] * across + sec[:, 1:] * up
        return Cylinder3.from_arrays(axis, gens)

    family = [needle] + [draw(k) for k in range(1, n)]
    return _enforce_margins(family, draw, frozen=(0,))


def _long_axis_first(sec: np.ndarray) -> np.ndarray:
    """Rotate a 2D point set so its principal axis is the first coordinate."""
    c = sec - sec.mean(axis=0)
    _, _, vt = np.linalg.svd(c, full_matrices=False)
    return sec @ vt.T


def gen_rounded(n: int, D: float, seed: int) -> List[RoundedBody]:
    """Well-rounded bodies with r in [1, 2] and R/r < D (balls when D == 1).

    Body 0 is the unit ball at the origin; every other centre lies within
    R_0 + R of it, the outer-ball condition checked by cover_lines.
    """
    if n < 1 or D < 1.0:
        raise ValueError("need n >= 1 and D >= 1")
    rng = rng_for(seed)

    def outer(r: float) -> float:
        return r if D == 1.0 else r * rng.uniform(1.0, D) * (1.0 - 1e-9)

    R0 = outer(1.0)
    bodies = [RoundedBody((0.0, 0.0, 0.0), 1.0, R0)]
    for _ in range(n - 1):
        r = float(rng.uniform(1.0, 2.0))
        R = outer(r)
        reach = (R0 + R) * (1.0 - 1e-6)
        rad = reach * rng.random() ** (1.0 / 3.0)
        c = rad * random_unit(rng)
        bodies.append(RoundedBody((float(c[0]), float(c[1]), float(c[2])), r, float(R)))
    return bodies


def generate(spec: GenSpec):
    """Dispatch on spec.kind; returns a family, an (F, G) pair, or bodies."""
    p = spec.params
    if spec.kind == "common-point":
        return gen_common_point(spec.n, spec.seed, p.get("shape", "ellipse"))
    if spec.kind == "coplanar-lines":
        return gen_coplanar_lines(spec.n, spec.seed, p.get("delta", 1e-3))
    if spec.kind == "hyperboloid":
        return gen_hyperboloid(spec.n, spec.seed, p.get("delta", 1e-2))
    if spec.kind == "stack":
        return gen_stack(spec.n, spec.seed)
    return gen_rounded(spec.n, p.get("D", 1.0), spec.seed)


def gen_oracle_pairs(count: int, seed: int, min_margin: float = 1e-3) -> List[Tuple[Cylinder3, Cylinder3]]:
    """Ordered cylinder pairs for checking `crosses` against the grid oracle.

    Pairs come from common-point (ellipse and round sections) and stack
    families in rotation; only non-parallel pairs whose interval comparisons
    all clear ``min_margin`` are kept.  Crossing pairs are taken preferentially
    from each family so both answers are well represented.
    """
    rng = rng_for(seed)
    makers = (
        lambda s: gen_common_point(12, s),
        lambda s: gen_common_point(12, s, "round"),
        lambda s: gen_stack(8, s),
    )
    out: List[Tuple[Cylinder3, Cylinder3]] = []
    k = 0
    while len(out) < count:
        family = makers[k % len(makers)](int(rng.integers(0, 2**31)))
        k += 1
        ext = pair_extents(family)
        ok = (ext.margins() >= min_margin) & ~ext.parallel
        np.fill_diagonal(ok, False)
        cross = ext.crossing(0.0)
        picks = [tuple(ij) for ij in np.argwhere(ok & cross)[:2]]
        plain = np.argwhere(ok & ~cross)
        if len(plain):
            picks.append(tuple(plain[int(rng.integers(len(plain)))]))
        for i, j in picks:
            if len(out) < count:
                out.append((family[int(i)], family[int(j)]))
        if k > 50 * count:
            raise GenerationFailed("could not collect enough well-separated pairs")
    return out


# -- connectivity oracle --------------------------------------------------------


def _halfplanes(pts2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Rows (a, b) with the hull of pts2 = {x : a.x <= b}, inflated by EPS."""
    try:
        hull = ConvexHull(pts2)
        A = hull.equations[:, :2]
        b = -hull.equations[:, 2]
    except (QhullError, ValueError):
        lo, hi = pts2.min(axis=0), pts2.max(axis=0)
        span = hi - lo
        if np.linalg.norm(span) == 0.0:
            A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
            b = np.array([lo[0], -lo[0], lo[1], -lo[1]])
        else:
            # collinear set: a thin box around the segment
            c = pts2 - pts2.mean(axis=0)
            _, _, vt = np.linalg.svd(c, full_matrices=False)
            along, across = vt[0], np.array([-vt[0][1], vt[0][0]])
            va, vc = pts2 @ along, pts2 @ across
            A = np.array([along, -along, across, -across])
            b = np.array([va.max(), -va.min(), vc.max(), -vc.min()])
    return A, b + EPS


def _clip_params(P0: np.ndarray, V: np.ndarray, A: np.ndarray, b: np.ndarray,
                 t_lo: np.ndarray, t_hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Clip lines P0 + t*V (rows) to {A x <= b}, within [t_lo, t_hi]."""
    num = b[None, :] - P0 @ A.T
    den = V @ A.T
    lo, hi = t_lo.astype(float).copy(), t_hi.astype(float).copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    pos = den > 1e-300
    neg = den < -1e-300
    hi = np.minimum(hi, np.where(pos, ratio, np.inf).min(axis=1))
    lo = np.maximum(lo, np.where(neg, ratio, -np.inf).max(axis=1))
    outside = (np.abs(den) <= 1e-300) & (num < 0.0)
    empty = outside.any(axis=1)
    lo[empty], hi[empty] = np.inf, -np.inf
    return lo, hi


def _lattice_split(columns: np.ndarray, col_edges: np.ndarray, levels: np.ndarray,
                   to_region, region_A, region_b, axis_step: np.ndarray) -> bool:
    """Core of the grid oracle.

    Nodes are (column, level) points ``columns[c] + levels[k] * axis``.  An
    edge survives only if the straight segment between its endpoints avoids
    the region ``{x : region_A @ to_region(x) <= region_b}``.  Returns True iff
    the bottom level and the top level fall into different components.
    """
    C, L = len(columns), len(levels)
    node = np.arange(C * L).reshape(C, L)
    rows, cols = [], []

    # vertical edges: one clip per column gives the exact blocked parameter interval
    P0 = to_region(columns)
    V = to_region(axis_step[None, :]) - to_region(np.zeros((1, axis_step.shape[0])))
    V = np.repeat(V, C, axis=0)
    t_in, t_out = _clip_params(P0, V, region_A, region_b,
                               np.full(C, -np.inf), np.full(C, np.inf))
    lo_lv, hi_lv = levels[:-1][None, :], levels[1:][None, :]
    # a column that misses the region has t_in > t_out and every edge is free
    free = (hi_lv < t_in[:, None]) | (lo_lv > t_out[:, None]) | (t_in > t_out)[:, None]
    ci, ki = np.nonzero(free)
    rows.append(node[ci, ki])
    cols.append(node[ci, ki + 1])

    # horizontal edges: every neighbour pair on every level, clipped exactly
    a, b = col_edges[:, 0], col_edges[:, 1]
    for k, t in enumerate(levels):
        p = to_region(columns[a] + t * axis_step)
        q = to_region(columns[b] + t * axis_step)
        s_in, s_out = _clip_params(p, q - p, region_A, region_b,
                                   np.zeros(len(a)), np.ones(len(a)))
        keep = s_in > s_out
        rows.append(node[a[keep], k])
        cols.append(node[b[keep], k])

    r = np.concatenate(rows)
    c = np.concatenate(cols)
    g = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(C * L, C * L))
    _, labels = connected_components(g, directed=False)
    bottom = set(labels[node[:, 0]].tolist())
    top = set(labels[node[:, -1]].tolist())
    return bottom.isdisjoint(top)


def _grid_columns(section: np.ndarray, resolution: int) -> Tuple[np.ndarray, np.ndarray]:
    """Lattice points inside a convex 2D set plus its vertices, with neighbour pairs."""
    if len(section) < 2:
        raise InsufficientResolution("point cross-section has no lattice")
    centre = section.mean(axis=0)
    c = section - centre
    _, _, vt = np.linalg.svd(c, full_matrices=False)
    local = c @ vt.T
    lo, hi = local.min(axis=0), local.max(axis=0)
    A, b = _halfplanes(section)
    gx = np.linspace(lo[0], hi[0], resolution)
    gy = np.linspace(lo[1], hi[1], resolution)
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    local_grid = np.stack([X.ravel(), Y.ravel()], axis=1)
    world = local_grid @ vt + centre
    inside = (world @ A.T <= b[None, :]).all(axis=1)
    idx = -np.ones(resolution * resolution, dtype=int)
    idx[inside] = np.arange(int(inside.sum()))
    idx = idx.reshape(resolution, resolution)
    pairs = []
    for di, dj in ((1, 0), (0, 1), (1, 1), (1, -1)):
        i0 = np.arange(max(0, -di), resolution - max(0, di))
        j0 = np.arange(max(0, -dj), resolution - max(0, dj))
        I, J = np.meshgrid(i0, j0, indexing="ij")
        u, v = idx[I, J].ravel(), idx[I + di, J + dj].ravel()
        ok = (u >= 0) & (v >= 0)
        pairs.append(np.stack([u[ok], v[ok]], axis=1))
    cols = world[inside]
    # hull vertices join the nearest lattice point (segment stays inside by convexity)
    extra = []
    base = len(cols)
    for k, vert in enumerate(section):
        if len(cols):
            near = int(np.argmin(np.linalg.norm(cols - vert, axis=1)))
            extra.append((base + k, near))
    cols = np.vstack([cols, section]) if len(cols) else section.copy()
    pairs.append(np.array(extra, dtype=int).reshape(-1, 2))
    return cols, np.vstack(pairs)


def mc_crossing_oracle(A: Cylinder3, B: Cylinder3, resolution: int = 64, seed: int = 0) -> bool:
    """Grid check of 'A minus B is disconnected'.

    A is sampled on ``resolution`` lattice columns per side of its cross-section
    (plus the section's vertices) times ``resolution`` levels along its axis.
    Lattice edges are kept only when the segment misses B, tested by clipping
    against B's section in a basis computed independently of the predicate
    code.  The answer is whether the two end caps end up disconnected.
    ``seed`` jitters the level placement only.
    """
    rng = rng_for(seed)
    dA = A.axis
    dB = B.axis
    basis_A = null_space(dA[None, :]).T  # 2x3
    basis_B = null_space(dB[None, :]).T
    secA = A.points @ basis_A.T
    ptsA = np.unique(np.round(secA, 15), axis=0)
    try:
        verts = ptsA[ConvexHull(ptsA).vertices]
    except (QhullError, ValueError):
        verts = ptsA
    regA, regb = _halfplanes(B.points @ basis_B.T)

    def to_region(x3):
        return np.asarray(x3) @ basis_B.T

    cols2, edges = _grid_columns(verts, resolution)
    if len(cols2) < 2:
        raise InsufficientResolution("cross-section too thin for the lattice")
    along = float(np.mean(A.points @ dA))
    columns = cols2 @ basis_A + along * dA

    # axial range: where the column lines meet B, padded by three B-diameters
    P0 = to_region(columns)
    V = np.repeat(to_region(dA[None, :]), len(columns), axis=0)
    t_in, t_out = _clip_params(P0, V, regA, regb,
                               np.full(len(columns), -np.inf), np.full(len(columns), np.inf))
    hit = t_in <= t_out
    secB = B.points @ basis_B.T
    diam = float(np.max(np.linalg.norm(secB[:, None] - secB[None, :], axis=-1))) if len(secB) > 1 else 1.0
    pad = 3.0 * max(diam, 1e-3)
    if hit.any():
        t0, t1 = float(t_in[hit].min()) - pad, float(t_out[hit].max()) + pad
    else:
        t0, t1 = -pad, pad
    levels = np.linspace(t0, t1, resolution)
    jitter = rng.uniform(-0.25, 0.25, resolution - 2) * (t1 - t0) / (resolution - 1)
    levels[1:-1] += jitter
    if len(columns) * resolution < 100:
        raise InsufficientResolution("fewer than 100 lattice samples")
    return _lattice_split(columns, edges, levels, to_region, regA, regb, dA)


def mc_slab_oracle(K: ConvexPolygon, S: Slab2, resolution: int = 64, seed: int = 0) -> bool:
    """Planar version: is the strip S minus K disconnected?"""
    rng = rng_for(seed)
    n = S.unit_normal
    along = np.array([-n[1], n[0]])
    offsets = np.linspace(S.lo, S.hi, resolution) if S.width > 0 else np.array([S.lo])
    columns = offsets[:, None] * n[None, :]
    m = len(columns)
    edges = np.stack([np.arange(m - 1), np.arange(1, m)], axis=1) if m > 1 else np.zeros((0, 2), int)
    A, b = _halfplanes(K.array)
    vals = K.array @ along
    diam = float(vals.max() - vals.min())
    pad = 3.0 * max(diam, 1.0)
    levels = np.linspace(vals.min() - pad, vals.max() + pad, resolution)
    levels[1:-1] += rng.uniform(-0.25, 0.25, resolution - 2) * (levels[1] - levels[0])
    return _lattice_split(columns, edges, levels, lambda x: np.asarray(x), A, b, along)
