"""Planar convex-geometry kernel.

Polygons are canonical: counterclockwise, starting at the lexicographically
smallest vertex, no repeated or collinear vertices.  A polygon with one or two
vertices is a point or a segment.  Every predicate uses the single absolute
tolerance ``EPS``; inputs are expected to live in the [-100, 100] box.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import EmptyInput, ZeroDirection

EPS = 1e-9

Point2 = Tuple[float, float]


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: Tuple[Point2, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float).reshape(-1, 2)

    @property
    def is_point(self) -> bool:
        return len(self.vertices) == 1

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def centroid(self) -> Point2:
        """Mean of the vertices (strictly interior for a proper polygon)."""
        c = self.array.mean(axis=0)
        return (float(c[0]), float(c[1]))

    def scaled(self, factor: float) -> "ConvexPolygon":
        return convex_hull([(factor * x, factor * y) for x, y in self.vertices])


@dataclass(frozen=True)
class Slab2:
    """The strip ``lo <= <p, normal>/|normal| <= hi``."""

    normal: Point2
    lo: float
    hi: float

    def __post_init__(self):
        if self.normal[0] == 0.0 and self.normal[1] == 0.0:
            raise ZeroDirection("slab normal must be nonzero")
        if self.lo > self.hi:
            raise ValueError(f"slab bounds out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @cached_property
    def unit_normal(self) -> np.ndarray:
        n = np.asarray(self.normal, dtype=float)
        return n / np.linalg.norm(n)

    def contains(self, p, tol: float = EPS) -> bool:
        v = float(np.dot(self.unit_normal, p))
        return self.lo - tol <= v <= self.hi + tol


class SlabRelation(enum.Enum):
    DISJOINT = "Disjoint"
    MEETS = "Meets"
    CROSSES = "Crosses"


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _turns_left(o, a, b) -> bool:
    # sine-relative test so that near-collinear vertices are dropped
    cr = _cross(o, a, b)
    la = math.hypot(a[0] - o[0], a[1] - o[1])
    lb = math.hypot(b[0] - o[0], b[1] - o[1])
    return cr > EPS * la * lb


def convex_hull(points: Iterable[Sequence[float]]) -> ConvexPolygon:
    """Andrew's monotone chain; returns the canonical polygon."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if not pts:
        raise EmptyInput("convex_hull needs at least one point")
    for p in pts:
        if not (math.isfinite(p[0]) and math.isfinite(p[1])):
            raise ValueError(f"non-finite coordinate {p}")
    if len(pts) <= 2:
        return ConvexPolygon(tuple(pts))

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and not _turns_left(lower[-2], lower[-1], p):
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and not _turns_left(upper[-2], upper[-1], p):
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all collinear: keep the two extremes
        return ConvexPolygon((pts[0], pts[-1]))
    return ConvexPolygon(tuple(hull))


def edge_widths(K: ConvexPolygon) -> np.ndarray:
    """Extent of K along the inward normal of each edge (rotating calipers)."""
    v = K.array
    m = len(v)
    widths = np.empty(m)
    j = 1
    for i in range(m):
        p, q = v[i], v[(i + 1) % m]
        e = q - p
        length = math.hypot(e[0], e[1])
        nrm = np.array([-e[1], e[0]]) / length

        def height(k):
            return float(np.dot(v[k % m] - p, nrm))

        if i == 0:
            j = 1
        # advance the antipodal pointer while height keeps growing
        while height(j + 1) >= height(j) and (j + 1) % m != (i + 1) % m:
            j += 1
        widths[i] = height(j)
    return widths


def min_width_slab(K: ConvexPolygon) -> Tuple[Slab2, float]:
    """Narrowest strip containing K; ties go to the lowest edge index."""
    v = K.array
    if len(v) == 1:
        c = float(v[0, 1])
        return Slab2((0.0, 1.0), c, c), 0.0
    if len(v) == 2:
        e = v[1] - v[0]
        nrm = np.array([-e[1], e[0]]) / math.hypot(e[0], e[1])
        c = float(np.dot(v[0], nrm))
        return Slab2((float(nrm[0]), float(nrm[1])), c, c), 0.0

    widths = edge_widths(K)
    i = int(np.flatnonzero(widths <= widths.min() + EPS)[0])
    p, q = v[i], v[(i + 1) % len(v)]
    e = q - p
    nrm = np.array([-e[1], e[0]]) / math.hypot(e[0], e[1])
    proj = v @ nrm
    lo, hi = float(proj.min()), float(proj.max())
    return Slab2((float(nrm[0]), float(nrm[1])), lo, hi), hi - lo


def polygon_extent(K: ConvexPolygon, direction) -> Tuple[float, float]:
    vals = K.array @ np.asarray(direction, dtype=float)
    return float(vals.min()), float(vals.max())


def classify_slab(K: ConvexPolygon, S: Slab2) -> SlabRelation:
    kmin, kmax = polygon_extent(K, S.unit_normal)
    if kmax < S.lo - EPS or kmin > S.hi + EPS:
        return SlabRelation.DISJOINT
    if kmin <= S.lo + EPS and kmax >= S.hi - EPS:
        return SlabRelation.CROSSES
    return SlabRelation.MEETS


def extreme_points(K: ConvexPolygon, d) -> Tuple[Point2, Point2]:
    d = np.asarray(d, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise ZeroDirection("extreme_points needs a nonzero direction")
    vals = K.array @ (d / norm)
    # vertices are not in lexicographic order, so pick the smallest tuple
    lo = min(K.vertices[k] for k in np.flatnonzero(vals <= vals.min() + EPS))
    hi = min(K.vertices[k] for k in np.flatnonzero(vals >= vals.max() - EPS))
    return lo, hi


def line_hits_polygon(p, d, K: ConvexPolygon) -> bool:
    d = np.asarray(d, dtype=float)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        raise ZeroDirection("line direction must be nonzero")
    nrm = np.array([-d[1], d[0]]) / norm
    c = float(np.dot(nrm, p))
    kmin, kmax = polygon_extent(K, nrm)
    return kmin - EPS <= c <= kmax + EPS


def point_polygon_distance(p, K: ConvexPolygon) -> float:
    """Euclidean distance from p to K (0 inside)."""
    p = np.asarray(p, dtype=float)
    v = K.array
    if len(v) == 1:
        return float(np.linalg.norm(p - v[0]))
    m = len(v)
    if m >= 3:
        inside = True
        for i in range(m):
            if _cross(v[i], v[(i + 1) % m], p) < 0.0:
                inside = False
                break
        if inside:
            return 0.0
    best = math.inf
    edges = m if m >= 3 else 1
    for i in range(edges):
        a, b = v[i], v[(i + 1) % m]
        ab = b - a
        t = float(np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0))
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def point_in_polygon(p, K: ConvexPolygon, tol: float = EPS) -> bool:
    return point_polygon_distance(p, K) <= tol


def minkowski_difference(K1: ConvexPolygon, K2: ConvexPolygon) -> ConvexPolygon:
    a, b = K1.array, K2.array
    return convex_hull((a[:, None, :] - b[None, :, :]).reshape(-1, 2))


def polygons_intersect(K1: ConvexPolygon, K2: ConvexPolygon, tol: float = EPS) -> bool:
    """K1 and K2 meet iff the origin lies in K1 - K2."""
    return point_polygon_distance((0.0, 0.0), minkowski_difference(K1, K2)) <= tol


def clip_halfplane(points: np.ndarray, normal, offset: float, tol: float = EPS) -> np.ndarray:
    """Sutherland-Hodgman step keeping ``<x, normal> <= offset + tol``."""
    normal = np.asarray(normal, dtype=float)
    if len(points) == 0:
        return points
    vals = points @ normal - offset - tol
    out = []
    m = len(points)
    for i in range(m):
        p, q = points[i], points[(i + 1) % m]
        vp, vq = vals[i], vals[(i + 1) % m]
        if vp <= 0.0:
            out.append(p)
        if (vp < 0.0 < vq) or (vq < 0.0 < vp):
            out.append(p + (vp / (vp - vq)) * (q - p))
    return np.array(out).reshape(-1, 2)


def _clip_by_polygon(pts: np.ndarray, K: ConvexPolygon) -> np.ndarray:
    v = K.array
    m = len(v)
    for i in range(m):
        e = v[(i + 1) % m] - v[i]
        outward = np.array([e[1], -e[0]]) / math.hypot(e[0], e[1])
        pts = clip_halfplane(pts, outward, float(np.dot(outward, v[i])))
    return pts


def common_point(K1: ConvexPolygon, K2: ConvexPolygon) -> Point2 | None:
    """Some point of K1 ∩ K2 (within tolerance), or None."""
    if not polygons_intersect(K1, K2):
        return None
    if len(K2) >= 3:
        pts = _clip_by_polygon(K1.array, K2)
    elif len(K1) >= 3:
        pts = _clip_by_polygon(K2.array, K1)
    else:
        pts = np.empty((0, 2))
    if len(pts) == 0:
        # degenerate or tangent contact: midpoint of the closest pair
        best, arg = math.inf, None
        for q in K2.array:
            for cand in _closest_points(K1, q):
                dd = float(np.linalg.norm(cand - q))
                if dd < best:
                    best, arg = dd, (cand + q) / 2.0
        for q in K1.array:
            for cand in _closest_points(K2, q):
                dd = float(np.linalg.norm(cand - q))
                if dd < best:
                    best, arg = dd, (cand + q) / 2.0
        return (float(arg[0]), float(arg[1]))
    c = pts.mean(axis=0)
    return (float(c[0]), float(c[1]))


def _closest_points(K: ConvexPolygon, q) -> list:
    v = K.array
    q = np.asarray(q, dtype=float)
    if len(v) == 1:
        return [v[0]]
    m = len(v)
    if m >= 3 and point_polygon_distance(q, K) == 0.0:
        return [q]
    out = []
    for i in range(m if m >= 3 else 1):
        a, b = v[i], v[(i + 1) % m]
        ab = b - a
        t = float(np.clip(np.dot(q - a, ab) / np.dot(ab, ab), 0.0, 1.0))
        out.append(a + t * ab)
    return out
