"""Cylinders in 3-space and their pairwise predicates.

A cylinder is ``conv(generators) + span(direction)``.  Everything reduces to
the plane orthogonal to one axis: there a cylinder casts either its own
cross-section polygon (projected along its own axis) or a slab.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import ParallelAxes, ZeroDirection
from .planar import (
    EPS,
    ConvexPolygon,
    Slab2,
    SlabRelation,
    classify_slab,
    clip_halfplane,
    common_point,
    convex_hull,
    line_hits_polygon,
    min_width_slab,
    point_in_polygon,
    polygons_intersect,
)

ANGLE_TOL = 1e-9

Vec3 = Tuple[float, float, float]
Shadow = Union[ConvexPolygon, Slab2]


def _vec(x) -> Vec3:
    return (float(x[0]), float(x[1]), float(x[2]))


def line_angle(u, v) -> float:
    """Angle between the lines spanned by u and v, in [0, pi/2]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), abs(float(np.dot(u, v))))


def is_parallel(u, v) -> bool:
    return line_angle(u, v) <= ANGLE_TOL


@dataclass(frozen=True)
class Frame:
    u: Vec3
    e1: Vec3
    e2: Vec3

    @cached_property
    def basis(self) -> np.ndarray:
        """2x3 matrix mapping a 3D point to its in-plane coordinates."""
        return np.array([self.e1, self.e2], dtype=float)

    def project(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.basis.T

    def lift(self, p2) -> np.ndarray:
        return float(p2[0]) * np.asarray(self.e1) + float(p2[1]) * np.asarray(self.e2)


def make_frame(u) -> Frame:
    u = np.asarray(u, dtype=float)
    norm = float(np.linalg.norm(u))
    if norm == 0.0 or not math.isfinite(norm):
        raise ZeroDirection("frame axis must be a nonzero finite vector")
    u = u / norm
    k = int(np.argmin(np.abs(u)))
    seed = np.zeros(3)
    seed[k] = 1.0
    e1 = seed - np.dot(seed, u) * u
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return Frame(_vec(u), _vec(e1), _vec(e2))


@dataclass(frozen=True)
class Line3:
    point: Vec3
    direction: Vec3

    def __post_init__(self):
        if not any(self.direction):
            raise ZeroDirection("line direction must be nonzero")

    def translated(self, offset) -> "Line3":
        return Line3(_vec(np.add(self.point, offset)), self.direction)


@dataclass(frozen=True)
class Cylinder3:
    direction: Vec3
    generators: Tuple[Vec3, ...]

    def __post_init__(self):
        d = np.asarray(self.direction, dtype=float)
        if d.shape != (3,) or not np.all(np.isfinite(d)) or not d.any():
            raise ZeroDirection(f"bad cylinder direction {self.direction}")
        g = np.asarray(self.generators, dtype=float)
        if g.ndim != 2 or g.shape[1] != 3 or len(g) == 0 or not np.all(np.isfinite(g)):
            raise ValueError("generators must be a nonempty list of finite 3D points")

    @classmethod
    def from_arrays(cls, direction, generators) -> "Cylinder3":
        return cls(_vec(direction), tuple(_vec(g) for g in np.asarray(generators, dtype=float)))

    @cached_property
    def axis(self) -> np.ndarray:
        d = np.asarray(self.direction, dtype=float)
        return d / np.linalg.norm(d)

    @cached_property
    def points(self) -> np.ndarray:
        return np.asarray(self.generators, dtype=float)

    @cached_property
    def frame(self) -> Frame:
        return make_frame(self.direction)

    @cached_property
    def section(self) -> ConvexPolygon:
        """Cross-section polygon in the cylinder's own frame."""
        return convex_hull(self.frame.project(self.points))

    @cached_property
    def width(self) -> float:
        return min_width_slab(self.section)[1]


def shadow(A: Cylinder3, f: Frame) -> Shadow:
    """Orthogonal projection of A onto the plane of frame f."""
    if is_parallel(A.direction, f.u):
        return convex_hull(f.project(A.points))
    d2 = f.project(A.axis)
    normal = np.array([-d2[1], d2[0]]) / np.linalg.norm(d2)
    vals = f.project(A.points) @ normal
    return Slab2((float(normal[0]), float(normal[1])), float(vals.min()), float(vals.max()))


def intersects(A: Cylinder3, B: Cylinder3) -> bool:
    s = shadow(A, B.frame)
    if isinstance(s, ConvexPolygon):
        return polygons_intersect(s, B.section)
    return classify_slab(B.section, s) is not SlabRelation.DISJOINT


def crosses(A: Cylinder3, B: Cylinder3) -> bool:
    """True iff A minus B is disconnected, i.e. B's section spans A's slab."""
    if is_parallel(A.direction, B.direction):
        raise ParallelAxes("crossing is undefined for parallel axes; perturb first")
    return classify_slab(B.section, shadow(A, B.frame)) is SlabRelation.CROSSES


def cylinder_width(A: Cylinder3) -> float:
    return A.width


def fiber(A: Cylinder3, p2) -> Line3:
    """The line parallel to A's axis over the in-plane point p2 of A's frame."""
    return Line3(_vec(A.frame.lift(p2)), _vec(A.axis))


def line_hits_cylinder(L: Line3, A: Cylinder3) -> bool:
    f = A.frame
    p2 = f.project(L.point)
    if is_parallel(L.direction, A.direction):
        return point_in_polygon(p2, A.section)
    return line_hits_polygon(p2, f.project(L.direction), A.section)


class HitCounter:
    """Batched `line_hits_cylinder` against a fixed family."""

    def __init__(self, family: Sequence[Cylinder3]):
        self.family = list(family)
        self.axes = np.array([c.axis for c in self.family])
        self.gens = _padded(self.family)

    def mask(self, L: Line3) -> np.ndarray:
        u = np.asarray(L.direction, dtype=float)
        u = u / np.linalg.norm(u)
        cr = np.cross(u[None, :], self.axes)
        sin = np.linalg.norm(cr, axis=1)
        par = np.arctan2(sin, np.abs(self.axes @ u)) <= ANGLE_TOL
        nrm = cr / np.where(par, 1.0, sin)[:, None]
        vals = np.einsum("jgk,jk->jg", self.gens, nrm)
        c = nrm @ np.asarray(L.point, dtype=float)
        out = (vals.min(axis=1) - EPS <= c) & (c <= vals.max(axis=1) + EPS)
        for j in np.flatnonzero(par):
            out[j] = line_hits_cylinder(L, self.family[j])
        return out

    def hits(self, L: Line3) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.mask(L)))


def _point_on_line(K: ConvexPolygon, p2: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """A point of K on the line p2 + t*d2 (assumed to meet K)."""
    v = K.array
    nu = np.array([-d2[1], d2[0]])
    vals = v @ nu - float(np.dot(p2, nu))
    if len(v) == 1:
        return v[0]
    m = len(v)
    best_k, best = 0, math.inf
    for k in range(m if m >= 3 else 1):
        a, b = vals[k], vals[(k + 1) % m]
        if a * b <= 0.0:
            t = 0.0 if a == b else a / (a - b)
            return v[k] + t * (v[(k + 1) % m] - v[k])
        if min(abs(a), abs(b)) < best:
            best, best_k = min(abs(a), abs(b)), k if abs(a) <= abs(b) else (k + 1) % m
    # tangent within tolerance
    return v[best_k]


def witness_point(A: Cylinder3, B: Cylinder3) -> np.ndarray | None:
    """A point of A ∩ B, or None when they are disjoint."""
    fB = B.frame
    s = shadow(A, fB)
    if isinstance(s, ConvexPolygon):
        q = common_point(s, B.section)
        return None if q is None else fB.lift(q)
    if classify_slab(B.section, s) is SlabRelation.DISJOINT:
        return None
    n = s.unit_normal
    pts = B.section.array
    clipped = clip_halfplane(clip_halfplane(pts, n, s.hi), -n, -s.lo) if len(pts) >= 3 else pts[:0]
    if len(clipped):
        q = clipped.mean(axis=0)
    else:
        # degenerate section: the point of it nearest the slab's middle
        vals = pts @ n
        target = min(max(0.5 * (s.lo + s.hi), vals.min()), vals.max())
        i0, i1 = int(np.argmin(vals)), int(np.argmax(vals))
        span = vals[i1] - vals[i0]
        t = 0.0 if span == 0.0 else (target - vals[i0]) / span
        q = pts[i0] + t * (pts[i1] - pts[i0])
    base = fB.lift(q)
    # the B-fiber over q meets A; locate it in A's frame
    fA = A.frame
    p2 = fA.project(base)
    d2 = fA.project(B.axis)
    x = _point_on_line(A.section, p2, d2)
    t = float(np.dot(x - p2, d2) / np.dot(d2, d2))
    return base + t * B.axis


# ---------------------------------------------------------------------------
# batched pair predicates for the O(n^2) stages


@dataclass
class PairExtents:
    """Extents of every ordered pair along the common normal ``d_i x d_j``.

    ``self_lo[i, j]``/``self_hi[i, j]`` bound cylinder i along the unit normal,
    ``other_lo[i, j]``/``other_hi[i, j]`` bound cylinder j along the same
    normal.  ``parallel[i, j]`` marks pairs with no well-defined normal.
    """

    self_lo: np.ndarray
    self_hi: np.ndarray
    other_lo: np.ndarray
    other_hi: np.ndarray
    parallel: np.ndarray

    def crossing(self, eps: float = EPS) -> np.ndarray:
        out = (self.other_lo <= self.self_lo + eps) & (self.other_hi >= self.self_hi - eps)
        out[self.parallel] = False
        return out

    def overlapping(self, eps: float = EPS) -> np.ndarray:
        out = (self.self_lo <= self.other_hi + eps) & (self.other_lo <= self.self_hi + eps)
        out[self.parallel] = False
        return out

    def margins(self) -> np.ndarray:
        """Smallest absolute slack of the four interval comparisons per pair."""
        slacks = np.stack([
            self.self_lo - self.other_lo,
            self.other_hi - self.self_hi,
            self.other_hi - self.self_lo,
            self.self_hi - self.other_lo,
        ])
        m = np.abs(slacks).min(axis=0)
        m[self.parallel] = np.inf
        return m


def _padded(family: Sequence[Cylinder3]) -> np.ndarray:
    gmax = max(len(c.generators) for c in family)
    out = np.empty((len(family), gmax, 3))
    for k, c in enumerate(family):
        g = c.points
        out[k, : len(g)] = g
        out[k, len(g):] = g[0]
    return out


def pair_extents(family: Sequence[Cylinder3], rows=None, cols=None, jobs: int = 1) -> PairExtents:
    """Vectorized interval data for the pairs ``rows x cols`` (default all)."""
    rows = np.arange(len(family)) if rows is None else np.asarray(rows)
    cols = np.arange(len(family)) if cols is None else np.asarray(cols)
    axes = np.array([c.axis for c in family])
    gens = _padded(family)
    shape = (len(rows), len(cols))
    res = {k: np.empty(shape) for k in ("self_lo", "self_hi", "other_lo", "other_hi")}
    parallel = np.empty(shape, dtype=bool)

    def work(chunk):
        for r in chunk:
            i = rows[r]
            cr = np.cross(axes[i][None, :], axes[cols])
            sin = np.linalg.norm(cr, axis=1)
            cos = np.abs(axes[cols] @ axes[i])
            par = np.arctan2(sin, cos) <= ANGLE_TOL
            nrm = cr / np.where(par, 1.0, sin)[:, None]
            own = gens[i] @ nrm.T
            other = np.einsum("jgk,jk->jg", gens[cols], nrm)
            res["self_lo"][r] = own.min(axis=0)
            res["self_hi"][r] = own.max(axis=0)
            res["other_lo"][r] = other.min(axis=1)
            res["other_hi"][r] = other.max(axis=1)
            parallel[r] = par

    idx = np.arange(len(rows))
    if jobs > 1 and len(rows) > 1:
        chunks = np.array_split(idx, jobs)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, chunks))
    else:
        work(idx)
    return PairExtents(parallel=parallel, **res)


def first_disjoint_pair(family: Sequence[Cylinder3], jobs: int = 1) -> Tuple[int, int] | None:
    """Lowest (i, j), i < j, with the cylinders disjoint; None if all meet."""
    n = len(family)
    if n < 2:
        return None
    ext = pair_extents(family, jobs=jobs)
    meet = ext.overlapping()
    for i, j in zip(*np.nonzero(ext.parallel)):
        if i < j:
            meet[i, j] = intersects(family[i], family[j])
    iu = np.triu_indices(n, 1)
    bad = np.flatnonzero(~meet[iu])
    if len(bad) == 0:
        return None
    k = bad[0]
    return int(iu[0][k]), int(iu[1][k])
