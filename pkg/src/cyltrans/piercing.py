"""Twelve-point piercing of wide non-crossing slabs.

Given a convex polygon K of minimal width w, `piercing_points` builds at most
twelve points such that every slab of width at least w that meets K without
crossing it contains one of them.  `verify_piercing` samples such slabs and
reports the ones that escape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .planar import (
    EPS,
    ConvexPolygon,
    Point2,
    Slab2,
    extreme_points,
    min_width_slab,
)


@dataclass(frozen=True)
class PiercingSet:
    points: Tuple[Point2, ...]
    width: float
    anchors: Tuple[Point2, Point2, Point2, Point2]
    rectangles: Tuple[Tuple[Point2, Point2], ...] = ()
    chords: Tuple[Tuple[Point2, Point2], ...] = ()
    slab: Slab2 | None = None

    def __len__(self) -> int:
        return len(self.points)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)


def _pt(x) -> Point2:
    return (float(x[0]), float(x[1]))


def _midline_hits(v: np.ndarray, normal: np.ndarray, level: float) -> List[Tuple[float, np.ndarray]]:
    """Boundary parameters and points where the line <p, normal> = level meets the boundary."""
    m = len(v)
    s = v @ normal - level
    hits: List[Tuple[float, np.ndarray]] = []
    for i in range(m):
        j = (i + 1) % m
        if s[i] == 0.0:
            hits.append((float(i), v[i].copy()))
        elif s[i] * s[j] < 0.0:
            t = s[i] / (s[i] - s[j])
            hits.append((i + t, v[i] + t * (v[j] - v[i])))
    # exact vertex hits can be reported twice in pathological input; keep two distinct
    out: List[Tuple[float, np.ndarray]] = []
    for par, p in hits:
        if all(np.linalg.norm(p - q) > EPS for _, q in out):
            out.append((par, p))
    return out


def _segment_set(K: ConvexPolygon, p: np.ndarray, q: np.ndarray) -> PiercingSet:
    a, c = _pt(p), _pt(q)
    return PiercingSet(points=(a, c) if a != c else (a,), width=0.0, anchors=(a, a, c, c))


def piercing_points(K: ConvexPolygon) -> PiercingSet:
    v = K.array
    if len(v) == 1:
        p = _pt(v[0])
        return PiercingSet(points=(p,), width=0.0, anchors=(p, p, p, p))
    if len(v) == 2:
        return _segment_set(K, v[0], v[1])

    slab, w = min_width_slab(K)
    n_hat = slab.unit_normal
    if w <= EPS:
        lo, hi = extreme_points(K, (-n_hat[1], n_hat[0]))
        return _segment_set(K, np.array(lo), np.array(hi))

    m = len(v)
    level = 0.5 * (slab.lo + slab.hi)
    hits = _midline_hits(v, n_hat, level)
    if len(hits) != 2:
        raise ArithmeticError(f"midline met the boundary {len(hits)} times")
    (pa, a), (pc, c) = sorted(hits, key=lambda h: (h[1][0], h[1][1]))

    axis = (c - a) / np.linalg.norm(c - a)
    b_pt, d_pt = extreme_points(K, axis)
    b, d = np.array(b_pt), np.array(d_pt)
    pb = float(K.vertices.index(b_pt))
    pd = float(K.vertices.index(d_pt))
    if np.dot(a, axis) <= np.dot(b, axis) + EPS:
        b, pb = a, pa
    if np.dot(c, axis) >= np.dot(d, axis) - EPS:
        d, pd = c, pc

    anchors = [(pa, a), (pb, b), (pc, c), (pd, d)]
    anchors.sort(key=lambda h: (h[0] - pa) % m)
    distinct: List[Tuple[float, np.ndarray]] = []
    for par, p in anchors:
        if all(np.linalg.norm(p - q) > EPS for _, q in distinct):
            distinct.append((par, p))

    half = 0.5 * w
    points = [p for _, p in distinct]
    rects, chords = [], []
    for k in range(len(distinct)):
        p = distinct[k][1]
        q = distinct[(k + 1) % len(distinct)][1]
        chord = q - p
        length = float(np.linalg.norm(chord))
        # the counterclockwise arc from p to q bulges to the right of p->q
        right = np.array([chord[1], -chord[0]]) / length
        e = q + half * right
        f = p + half * right
        rects.append((_pt(e), _pt(f)))
        chords.append((_pt(p), _pt(q)))
        points.extend([e, f])

    unique: List[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > EPS for q in unique):
            unique.append(p)
    return PiercingSet(
        points=tuple(_pt(p) for p in unique),
        width=w,
        anchors=(_pt(a), _pt(b), _pt(c), _pt(d)),
        rectangles=tuple(rects),
        chords=tuple(chords),
        slab=slab,
    )


def sample_meeting_slabs(K: ConvexPolygon, width: float, trials: int, seed: int,
                         margin: float = 1e-6) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw `trials` slabs of width >= `width` that meet K without crossing it.

    Returns (unit normals, lo, hi).  Samples whose classification sits within
    `margin` of a boundary case are redrawn.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    v = K.array
    diam = float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=-1))) if len(v) > 1 else 1.0
    base = width if width > 0.0 else max(diam, 1.0)
    normals, los, his = [], [], []
    got = 0
    for _ in range(200):
        if got >= trials:
            break
        batch = max(4 * (trials - got), 64)
        theta = rng.uniform(0.0, math.pi, batch)
        nrm = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        tight = rng.random(batch) < 0.5
        W = np.where(tight, base, base * rng.uniform(1.0, 3.0, batch))
        if width == 0.0:
            W = base * rng.uniform(1e-3, 1.0, batch)
        proj = v @ nrm.T
        kmin, kmax = proj.min(axis=0), proj.max(axis=0)
        lo = rng.uniform(kmin - W, kmax)
        hi = lo + W
        crosses = (kmin <= lo) & (kmax >= hi)
        disjoint = (kmax < lo) | (kmin > hi)
        ambiguous = (
            (np.abs(kmin - lo) < margin) | (np.abs(kmax - hi) < margin)
            | (np.abs(kmax - lo) < margin) | (np.abs(kmin - hi) < margin)
        )
        ok = ~crosses & ~disjoint & ~ambiguous
        take = np.flatnonzero(ok)[: trials - got]
        normals.append(nrm[take])
        los.append(lo[take])
        his.append(hi[take])
        got += len(take)
    return np.concatenate(normals), np.concatenate(los), np.concatenate(his)


def verify_piercing(K: ConvexPolygon, T: PiercingSet, trials: int, seed: int,
                    margin: float = 1e-6) -> List[Slab2]:
    """Slabs among `trials` random admissible ones that contain no point of T."""
    if trials < 1:
        raise ValueError("trials must be positive")
    normals, lo, hi = sample_meeting_slabs(K, T.width, trials, seed, margin)
    vals = T.array @ normals.T
    hit = ((vals >= lo - margin) & (vals <= hi + margin)).any(axis=0)
    return [
        Slab2((float(normals[k, 0]), float(normals[k, 1])), float(lo[k]), float(hi[k]))
        for k in np.flatnonzero(~hit)
    ]
