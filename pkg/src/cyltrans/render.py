"""Static SVG diagnostics for piercing sets and solves.

The viewport is the bounding box of K inflated by twice its width, slabs are
clipped to it, and every role has a fixed colour.  Output is byte-identical
for identical input: the SVG hash salt is pinned and the date stamp dropped.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .piercing import PiercingSet  # noqa: E402
from .planar import ConvexPolygon, Slab2, clip_halfplane  # noqa: E402

PALETTE = {
    "body": "#1f77b4",
    "midline": "#7f7f7f",
    "anchor": "#d62728",
    "point": "#2ca02c",
    "failure": "#ff7f0e",
    "slab": "#9467bd",
    "hit": "#17becf",
    "chosen": "#000000",
}

_RC = {"svg.hashsalt": "cyltrans", "svg.fonttype": "none", "font.size": 8}


def viewport(K: ConvexPolygon, width: float):
    v = K.array
    lo, hi = v.min(axis=0), v.max(axis=0)
    pad = 2.0 * width
    if pad <= 0.0:
        pad = 0.25 * max(float(np.max(hi - lo)), 1.0)
    return lo - pad, hi + pad


def _box(lo, hi) -> np.ndarray:
    return np.array([[lo[0], lo[1]], [hi[0], lo[1]], [hi[0], hi[1]], [lo[0], hi[1]]])


def slab_patch(S: Slab2, lo, hi) -> np.ndarray:
    """The slab intersected with the viewport, as a polygon (possibly empty)."""
    n = S.unit_normal
    pts = clip_halfplane(_box(lo, hi), n, S.hi, tol=0.0)
    return clip_halfplane(pts, -n, -S.lo, tol=0.0)


def _closed(pts: np.ndarray) -> np.ndarray:
    return np.vstack([pts, pts[:1]])


def _draw_body(ax, K: ConvexPolygon):
    v = K.array
    if len(v) == 1:
        ax.plot(v[:, 0], v[:, 1], "o", color=PALETTE["body"], ms=4)
    elif len(v) == 2:
        ax.plot(v[:, 0], v[:, 1], "-", color=PALETTE["body"], lw=1.5)
    else:
        ax.fill(v[:, 0], v[:, 1], facecolor=PALETTE["body"], alpha=0.2, edgecolor=PALETTE["body"], lw=1.2)


def _draw_slabs(ax, slabs: Iterable[Slab2], lo, hi, colour: str, alpha: float):
    for S in slabs:
        p = slab_patch(S, lo, hi)
        if len(p) >= 3:
            ax.fill(p[:, 0], p[:, 1], facecolor=colour, alpha=alpha, edgecolor=colour, lw=0.5)


def _finish(fig, ax, lo, hi, path: str, title: str):
    ax.set_xlim(lo[0], hi[0])
    ax.set_ylim(lo[1], hi[1])
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def pierce_figure(K: ConvexPolygon, T: PiercingSet, failures: Sequence[Slab2], path: str):
    """K, its minimal-slab midline, anchors, piercing points and escaped slabs."""
    lo, hi = viewport(K, T.width)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        _draw_slabs(ax, failures, lo, hi, PALETTE["failure"], 0.25)
        _draw_body(ax, K)
        if T.slab is not None:
            n = T.slab.unit_normal
            mid = 0.5 * (T.slab.lo + T.slab.hi)
            reach = float(np.linalg.norm(hi - lo))
            foot = mid * n + np.dot(0.5 * (lo + hi), [-n[1], n[0]]) * np.array([-n[1], n[0]])
            ends = np.array([foot - reach * np.array([-n[1], n[0]]), foot + reach * np.array([-n[1], n[0]])])
            ax.plot(ends[:, 0], ends[:, 1], "--", color=PALETTE["midline"], lw=0.8)
        for chord in T.chords:
            c = np.array(chord)
            ax.plot(c[:, 0], c[:, 1], ":", color=PALETTE["midline"], lw=0.6)
        anchors = np.array(T.anchors)
        ax.plot(anchors[:, 0], anchors[:, 1], "s", color=PALETTE["anchor"], ms=5, mfc="none")
        for name, p in zip("abcd", T.anchors):
            ax.annotate(name, p, textcoords="offset points", xytext=(4, 4), color=PALETTE["anchor"])
        pts = T.array
        ax.plot(pts[:, 0], pts[:, 1], "o", color=PALETTE["point"], ms=3)
        _finish(fig, ax, lo, hi, path, f"|T|={len(T)} failures={len(failures)}")


def solve_figure(K: ConvexPolygon, width: float, slabs: Sequence[Slab2], hit: Sequence[bool],
                 points: Optional[np.ndarray], chosen: np.ndarray, path: str, title: str):
    """Pivot section with the other cylinders' shadows, candidates and the chosen foot point."""
    lo, hi = viewport(K, width)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        _draw_slabs(ax, [s for s, h in zip(slabs, hit) if not h], lo, hi, PALETTE["slab"], 0.06)
        _draw_slabs(ax, [s for s, h in zip(slabs, hit) if h], lo, hi, PALETTE["hit"], 0.06)
        _draw_body(ax, K)
        if points is not None and len(points):
            ax.plot(points[:, 0], points[:, 1], "o", color=PALETTE["point"], ms=3)
        ax.plot([chosen[0]], [chosen[1]], "x", color=PALETTE["chosen"], ms=7)
        _finish(fig, ax, lo, hi, path, title)
