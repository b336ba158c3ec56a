"""Line covers for well-rounded families.

A body is well-rounded with parameter D when it sits between concentric balls
of radii r <= R < D*r.  For a pairwise intersecting family, lines through the
centre of the body with smallest r, one per cluster of centre directions
within arcsin(1/(2D)), meet every inner ball; at most 32*D^2 lines are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InvalidParameter, NotPairwiseIntersectable, NotWellRounded
from .planar import EPS

Vec3 = Tuple[float, float, float]


@dataclass(frozen=True)
class RoundedBody:
    center: Vec3
    r: float
    R: float

    def __post_init__(self):
        if not (0.0 < self.r <= self.R):
            raise ValueError(f"need 0 < r <= R, got r={self.r}, R={self.R}")


@dataclass(frozen=True)
class LineCover:
    origin: Vec3
    directions: Tuple[Vec3, ...]
    assignment: Tuple[int, ...]
    phi: float
    D: float

    @property
    def bound(self) -> float:
        return 32.0 * self.D * self.D


def phi_angle(D: float) -> float:
    if not D >= 1.0:
        raise InvalidParameter(f"D must be at least 1, got {D}")
    return math.asin(1.0 / (2.0 * D))


def _axis_angle(d: np.ndarray, v: np.ndarray) -> float:
    """Angle between the line spanned by unit d and the vector v."""
    return math.atan2(float(np.linalg.norm(np.cross(d, v))), abs(float(np.dot(d, v))))


def cover_lines(bodies: Sequence[RoundedBody], D: float, strict: bool = True) -> LineCover:
    """Greedy cover of the family by lines through the smallest body's centre.

    With ``strict`` every body must satisfy |a| <= R_0 + R (outer balls of the
    reference body and the body meet, implied by pairwise intersection); the
    lenient mode only asks for the weaker |a| <= 2 r D that the hit law uses.
    Distances are measured after rescaling the smallest inner radius to 1.
    """
    phi = phi_angle(D)
    if not bodies:
        raise ValueError("need at least one body")
    for k, b in enumerate(bodies):
        if b.R > D * b.r + EPS:
            raise NotWellRounded(k)

    ref = min(range(len(bodies)), key=lambda k: (bodies[k].r, k))
    origin = np.asarray(bodies[ref].center, dtype=float)
    scale = 1.0 / bodies[ref].r
    R0 = bodies[ref].R * scale

    rel = []
    for k, b in enumerate(bodies):
        a = (np.asarray(b.center, dtype=float) - origin) * scale
        r, R = b.r * scale, b.R * scale
        dist = float(np.linalg.norm(a))
        limit = R0 + R if strict else 2.0 * r * D
        if dist > limit + EPS:
            raise NotPairwiseIntersectable(k)
        rel.append(a)

    directions: List[np.ndarray] = []
    assignment = [-1] * len(bodies)
    for k, a in enumerate(rel):
        if np.linalg.norm(a) <= EPS:
            continue
        for idx, d in enumerate(directions):
            if _axis_angle(d, a) <= phi:
                assignment[k] = idx
                break
        else:
            directions.append(a / np.linalg.norm(a))
            assignment[k] = len(directions) - 1
    if any(x < 0 for x in assignment):
        # centres at the origin: any line through it will do
        if not directions:
            directions.append(np.array([0.0, 0.0, 1.0]))
        assignment = [0 if x < 0 else x for x in assignment]

    return LineCover(
        origin=tuple(float(x) for x in origin),
        directions=tuple(tuple(float(x) for x in d) for d in directions),
        assignment=tuple(assignment),
        phi=phi,
        D=float(D),
    )


def point_line_distance(p, origin, direction) -> float:
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    w = np.asarray(p, dtype=float) - np.asarray(origin, dtype=float)
    return float(np.linalg.norm(w - np.dot(w, d) * d))


def cover_failures(bodies: Sequence[RoundedBody], cover: LineCover) -> List[str]:
    """Human-readable reasons the cover is invalid; empty when it is valid."""
    out = []
    if len(cover.assignment) != len(bodies):
        return [f"assignment has {len(cover.assignment)} entries for {len(bodies)} bodies"]
    if len(cover.directions) > cover.bound:
        out.append(f"{len(cover.directions)} lines exceed 32D^2 = {cover.bound:g}")
    dirs = [np.asarray(d, dtype=float) for d in cover.directions]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if _axis_angle(dirs[i], dirs[j]) <= cover.phi - EPS:
                out.append(f"directions {i} and {j} closer than phi")
    for k, b in enumerate(bodies):
        idx = cover.assignment[k]
        if not 0 <= idx < len(dirs):
            out.append(f"body {k} has no line")
            continue
        if point_line_distance(b.center, cover.origin, dirs[idx]) > b.r + EPS:
            out.append(f"body {k} missed by line {idx}")
    return out


def verify_cover(bodies: Sequence[RoundedBody], cover: LineCover) -> bool:
    return not cover_failures(bodies, cover)
