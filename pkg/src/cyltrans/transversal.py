"""Transversal lines for pairwise intersecting cylinder families.

`solve` returns a line meeting at least max(1, floor(n/28)) cylinders of a
pairwise intersecting family; `solve_bipartite` does the same for one side of
two cross-intersecting families.  The pipeline:

1. break parallel axes by a tiny deterministic rotation;
2. build the crossing digraph (arc A->B when A minus B is disconnected);
3. if some cylinder crosses at least n/28 others, its own fiber is the answer;
4. otherwise keep the low-indegree cylinders, take the narrowest one C, drop
   those crossing C, project the rest along C's axis to slabs and pierce them
   with at most twelve points;
5. lift every candidate point to a line parallel to C and recount hits
   against the original (unperturbed) input.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    GuaranteeNotMet,
    InvariantViolation,
    NotCrossIntersecting,
    NotPairwiseIntersecting,
    ParallelAxes,
    PerturbationFailed,
)
from .piercing import PiercingSet, piercing_points
from .planar import EPS, Slab2, SlabRelation, classify_slab
from .solid import (
    ANGLE_TOL,
    Cylinder3,
    HitCounter,
    Line3,
    _vec,
    fiber,
    intersects,
    pair_extents,
    shadow,
    witness_point,
)

DEFAULT_PERTURB = 1e-7
MAX_RETRIES = 8


class Branch(str, enum.Enum):
    EARLY_EXIT = "EarlyExit"
    PLANAR_PIERCING = "PlanarPiercing"
    DEGENERATE_SEGMENT = "DegenerateSegment"


@dataclass(eq=False)
class Digraph:
    matrix: np.ndarray  # matrix[i, j] is the arc i -> j

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def arcs(self) -> List[Tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.matrix))]

    @property
    def outdeg(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    @property
    def indeg(self) -> np.ndarray:
        return self.matrix.sum(axis=0)


@dataclass(frozen=True)
class Perturbation:
    seed: int
    magnitude: float
    deltas: Tuple[float, ...]


@dataclass(frozen=True)
class TransversalReport:
    branch: Branch
    line: Line3
    hits: Tuple[int, ...]
    pivot: int
    n: int
    piercing: Optional[PiercingSet] = None
    slab_counts: Optional[Tuple[int, ...]] = None
    perturbation: Optional[Perturbation] = None
    side: Optional[str] = None
    sizes: Optional[Tuple[int, int]] = None
    stats: Dict[str, float] = field(default_factory=dict)

    def side_hits(self) -> Tuple[int, ...]:
        """Hits on the family the guarantee refers to (all hits for one family)."""
        if self.side is None:
            return self.hits
        nF, nG = self.sizes
        if self.side == "f":
            return tuple(h for h in self.hits if h < nF)
        return tuple(h for h in self.hits if h >= nF)

    @property
    def bound(self) -> int:
        return guarantee(self.side_size)

    @property
    def side_size(self) -> int:
        if self.side is None:
            return self.n
        return self.sizes[0] if self.side == "f" else self.sizes[1]


def guarantee(n: int) -> int:
    return max(1, n // 28)


# -- perturbation ---------------------------------------------------------------


def _line_angles(axes: np.ndarray) -> np.ndarray:
    cr = np.linalg.norm(np.cross(axes[:, None, :], axes[None, :, :]), axis=-1)
    dot = np.abs(axes @ axes.T)
    return np.arctan2(cr, dot)


def parallel_followers(family: Sequence[Cylinder3]) -> List[int]:
    """Indices whose axis is parallel to some lower-indexed cylinder's axis."""
    if len(family) < 2:
        return []
    ang = _line_angles(np.array([c.axis for c in family]))
    close = np.tril(ang <= ANGLE_TOL, k=-1)
    return [int(k) for k in np.flatnonzero(close.any(axis=1))]


def perturb_directions(family: Sequence[Cylinder3], seed: int = 0,
                       magnitude: float = DEFAULT_PERTURB) -> Tuple[List[Cylinder3], Tuple[float, ...]]:
    """Rotate repeated axis directions apart; untouched when already distinct.

    Retries draw new rotations with the magnitude growing by sqrt(2) per
    attempt, so the last of the 8 retries allows 16x the requested angle.
    """
    if not magnitude > 0.0:
        raise ValueError("perturbation magnitude must be positive")
    family = list(family)
    movers = parallel_followers(family)
    if not movers:
        return family, (0.0,) * len(family)
    rng = np.random.Generator(np.random.PCG64(seed))
    axes = np.array([c.axis for c in family])
    for attempt in range(MAX_RETRIES + 1):
        mag = magnitude * 2.0 ** (attempt / 2.0)
        new = axes.copy()
        deltas = np.zeros(len(family))
        for k in movers:
            a = axes[k]
            v = rng.normal(size=3)
            v -= np.dot(v, a) * a
            v /= np.linalg.norm(v)
            ang = mag * rng.uniform(0.25, 1.0)
            new[k] = math.cos(ang) * a + math.sin(ang) * v
            deltas[k] = ang
        gaps = _line_angles(new)
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() > ANGLE_TOL:
            out = list(family)
            for k in movers:
                out[k] = Cylinder3(_vec(new[k]), family[k].generators)
            return out, tuple(float(x) for x in deltas)
    raise PerturbationFailed(f"could not separate axes within {16 * magnitude:g} rad")


def _anchor_witnesses(family: Sequence[Cylinder3], movers: Sequence[int]) -> List[Cylinder3]:
    """Add a common point with every partner to the generators of each mover.

    The solid is unchanged, but the added points keep pairs meeting once the
    mover's axis is rotated.
    """
    out = list(family)
    for k in movers:
        A = family[k]
        extra = []
        for j, B in enumerate(family):
            if j == k:
                continue
            z = witness_point(A, B)
            if z is not None:
                extra.append(_vec(z))
        out[k] = Cylinder3(A.direction, A.generators + tuple(extra))
    return out


# -- digraph ----------------------------------------------------------------------


def _crossing_matrix(family: Sequence[Cylinder3], allowed: np.ndarray, jobs: int,
                     eps: float = EPS) -> np.ndarray:
    ext = pair_extents(family, jobs=jobs)
    if (ext.parallel & allowed).any():
        i, j = np.argwhere(ext.parallel & allowed)[0]
        raise ParallelAxes(f"cylinders {int(i)} and {int(j)} have parallel axes")
    return ext.crossing(eps) & allowed


def build_digraph(family: Sequence[Cylinder3], jobs: int = 1, eps: float = EPS) -> Digraph:
    n = len(family)
    allowed = ~np.eye(n, dtype=bool)
    return Digraph(_crossing_matrix(family, allowed, jobs, eps))


def build_bipartite_digraph(F: Sequence[Cylinder3], G: Sequence[Cylinder3], jobs: int = 1,
                            eps: float = EPS) -> Digraph:
    """Digraph on F + G (F first) with arcs only between the two classes."""
    nF = len(F)
    cls = np.arange(nF + len(G)) >= nF
    allowed = cls[:, None] != cls[None, :]
    return Digraph(_crossing_matrix(list(F) + list(G), allowed, jobs, eps))


# -- scoring -------------------------------------------------------------------------


def hits_of(line: Line3, family: Sequence[Cylinder3]) -> Tuple[int, ...]:
    return HitCounter(family).hits(line)


def _check(cond: bool, what: str):
    if not cond:
        raise InvariantViolation(what)


@dataclass
class _Candidate:
    line: Line3
    pivot: int
    side: Optional[str] = None


def _planar_stage(fam: Sequence[Cylinder3], C: int, survivors: Sequence[int]):
    """Project survivors along C's axis, pierce, and count slabs per point."""
    pivot = fam[C]
    K = pivot.section
    w = pivot.width
    slabs: List[Slab2] = []
    for i in survivors:
        s = shadow(fam[i], pivot.frame)
        _check(isinstance(s, Slab2), f"cylinder {i} projects to a polygon along C's axis")
        _check(s.width >= w - 1e-9, f"slab of cylinder {i} narrower than width(C)")
        rel = classify_slab(K, s)
        _check(rel is SlabRelation.MEETS, f"slab of cylinder {i} is {rel.value} against K")
        slabs.append(s)
    T = piercing_points(K)
    counts = tuple(sum(1 for s in slabs if s.contains(t)) for t in T.points)
    lines = [Line3(_vec(pivot.frame.lift(t)), _vec(pivot.axis)) for t in T.points]
    branch = Branch.DEGENERATE_SEGMENT if T.width <= EPS else Branch.PLANAR_PIERCING
    return T, counts, lines, branch, float(w), min((s.width for s in slabs), default=None)


def _pick(cands: List[_Candidate], score) -> Tuple[_Candidate, Tuple[int, ...]]:
    best, best_hits, best_key = None, (), -1
    for c in cands:
        h = score(c)
        if best is None or h[0] > best_key:
            best, best_hits, best_key = c, h[1], h[0]
    return best, best_hits


# -- single family -----------------------------------------------------------------


def _solve_once(original: Sequence[Cylinder3], fam: Sequence[Cylinder3], jobs: int, eps: float,
                perturbation: Optional[Perturbation]) -> TransversalReport:
    n = len(fam)
    G = build_digraph(fam, jobs, eps)
    out, ind = G.outdeg, G.indeg
    stats: Dict[str, float] = {"arcs": int(G.matrix.sum())}
    counter = HitCounter(original)

    def score(c: _Candidate):
        h = counter.hits(c.line)
        return len(h), h

    early = [i for i in range(n) if 28 * int(out[i]) >= n]
    if early:
        cands = [_Candidate(fiber(fam[i], fam[i].section.centroid()), i) for i in early]
        best, hits = _pick(cands, score)
        stats["outdeg_pivot"] = int(out[best.pivot])
        return TransversalReport(Branch.EARLY_EXIT, best.line, hits, best.pivot, n,
                                 perturbation=perturbation, stats=stats)

    _check(bool((28 * out < n).all()), "outdegree dichotomy")
    f_prime = [i for i in range(n) if 14 * int(ind[i]) <= n]
    _check(len(f_prime) >= math.ceil(n / 2), f"|F'| = {len(f_prime)} < n/2")
    C = min(f_prime, key=lambda i: (fam[i].width, i))
    f_star = [i for i in f_prime if not G.matrix[i, C]]
    _check(len(f_star) > 3 * n / 7 - 1, f"|F*| = {len(f_star)} too small")

    T, counts, lines, branch, w, min_slab = _planar_stage(fam, C, [i for i in f_star if i != C])
    need = math.ceil((len(f_star) - 1) / 12)
    _check(max(counts) >= need, f"best piercing point meets {max(counts)} < {need} slabs")

    cands = [_Candidate(L, C) for L in lines]
    best, hits = _pick(cands, score)
    stats.update({
        "f_prime": len(f_prime), "f_star": len(f_star), "width_C": w,
        "min_slab_width": min_slab, "pigeonhole": need, "max_count": max(counts),
    })
    if min_slab is None:
        del stats["min_slab_width"]
    return TransversalReport(branch, best.line, hits, C, n, piercing=T, slab_counts=counts,
                             perturbation=perturbation, stats=stats)


def _with_retries(run, family: Sequence[Cylinder3], seed: int, perturb: float, enough):
    movers = parallel_followers(family)
    if not movers:
        report = run(list(family), None)
        if not enough(report):
            raise GuaranteeNotMet(f"{len(report.side_hits())} hits below bound {report.bound}")
        return report
    base = _anchor_witnesses(family, movers)
    last = None
    for attempt in range(MAX_RETRIES + 1):
        mag = perturb / 2.0 ** attempt
        fam, deltas = perturb_directions(base, seed, mag)
        report = run(fam, Perturbation(seed, mag, deltas))
        if enough(report):
            return report
        last = report
    raise GuaranteeNotMet(f"{len(last.side_hits())} hits below bound {last.bound} after retries")


def solve(family: Sequence[Cylinder3], seed: int = 0, perturb: float = DEFAULT_PERTURB,
          jobs: int = 1, eps: float = EPS) -> TransversalReport:
    """Line meeting at least max(1, floor(n/28)) members of a pairwise intersecting family.

    ``eps`` is the tolerance of the crossing predicate used for the digraph.
    """
    family = list(family)
    n = len(family)
    if n == 0:
        raise ValueError("family must be nonempty")
    from .solid import first_disjoint_pair

    bad = first_disjoint_pair(family, jobs)
    if bad is not None:
        raise NotPairwiseIntersecting(bad)
    if n == 1:
        A = family[0]
        line = fiber(A, A.section.centroid())
        return TransversalReport(Branch.EARLY_EXIT, line, hits_of(line, family), 0, 1)

    return _with_retries(
        lambda fam, pert: _solve_once(family, fam, jobs, eps, pert),
        family, seed, perturb,
        lambda r: len(r.hits) >= guarantee(n),
    )


# -- bipartite --------------------------------------------------------------------


def first_disjoint_cross_pair(F: Sequence[Cylinder3], G: Sequence[Cylinder3],
                              jobs: int = 1) -> Optional[Tuple[int, int]]:
    nF = len(F)
    U = list(F) + list(G)
    ext = pair_extents(U, rows=np.arange(nF), cols=np.arange(nF, len(U)), jobs=jobs)
    meet = ext.overlapping()
    for i, j in np.argwhere(ext.parallel):
        meet[i, j] = intersects(F[i], G[j])
    bad = np.argwhere(~meet)
    if len(bad) == 0:
        return None
    return int(bad[0][0]), int(bad[0][1])


def _solve_bipartite_once(original: Sequence[Cylinder3], fam: Sequence[Cylinder3], nF: int,
                          jobs: int, eps: float, perturbation: Optional[Perturbation]) -> TransversalReport:
    N = len(fam)
    nG = N - nF
    in_f = np.arange(N) < nF
    G = build_bipartite_digraph(fam[:nF], fam[nF:], jobs, eps)
    out, ind = G.outdeg, G.indeg
    stats: Dict[str, float] = {"arcs": int(G.matrix.sum())}
    counter = HitCounter(original)

    def other_size(i):
        return nG if in_f[i] else nF

    def score(c: _Candidate):
        h = counter.hits(c.line)
        on_side = [x for x in h if (x < nF) == (c.side == "f")]
        return len(on_side) / (nF if c.side == "f" else nG), h

    early = [i for i in range(N) if 28 * int(out[i]) >= other_size(i)]
    if early:
        cands = [_Candidate(fiber(fam[i], fam[i].section.centroid()), i, "g" if in_f[i] else "f")
                 for i in early]
        best, hits = _pick(cands, score)
        stats["outdeg_pivot"] = int(out[best.pivot])
        return TransversalReport(Branch.EARLY_EXIT, best.line, hits, best.pivot, N,
                                 perturbation=perturbation, side=best.side, sizes=(nF, nG),
                                 stats=stats)

    f_prime = [i for i in range(nF) if 14 * int(ind[i]) <= nG]
    g_prime = [i for i in range(nF, N) if 14 * int(ind[i]) <= nF]
    _check(len(f_prime) >= math.ceil(nF / 2), "|F'| below half")
    _check(len(g_prime) >= math.ceil(nG / 2), "|G'| below half")
    C = min(f_prime + g_prime, key=lambda i: (fam[i].width, i))
    side = "g" if in_f[C] else "f"
    opposite = g_prime if in_f[C] else f_prime
    n_side = nG if in_f[C] else nF
    survivors = [i for i in opposite if not G.matrix[i, C]]
    _check(len(survivors) > 3 * n_side / 7 - 1, "too few survivors on the opposite side")

    T, counts, lines, branch, w, min_slab = _planar_stage(fam, C, survivors)
    need = math.ceil(len(survivors) / 12)
    _check(max(counts) >= need, f"best piercing point meets {max(counts)} < {need} slabs")
    cands = [_Candidate(L, C, side) for L in lines]
    best, hits = _pick(cands, score)
    stats.update({
        "f_prime": len(f_prime), "g_prime": len(g_prime), "survivors": len(survivors),
        "width_C": w, "min_slab_width": min_slab, "pigeonhole": need, "max_count": max(counts),
    })
    if min_slab is None:
        del stats["min_slab_width"]
    return TransversalReport(branch, best.line, hits, C, N, piercing=T, slab_counts=counts,
                             perturbation=perturbation, side=side, sizes=(nF, nG), stats=stats)


def solve_bipartite(F: Sequence[Cylinder3], G: Sequence[Cylinder3], seed: int = 0,
                    perturb: float = DEFAULT_PERTURB, jobs: int = 1, eps: float = EPS) -> TransversalReport:
    """Line meeting max(1, floor(m/28)) members of one side (m = that side's size).

    Hit indices refer to the concatenation F + G.
    """
    F, G = list(F), list(G)
    if not F or not G:
        raise ValueError("both families must be nonempty")
    bad = first_disjoint_cross_pair(F, G, jobs)
    if bad is not None:
        raise NotCrossIntersecting(bad)
    U = F + G
    nF = len(F)
    return _with_retries(
        lambda fam, pert: _solve_bipartite_once(U, fam, nF, jobs, eps, pert),
        U, seed, perturb,
        lambda r: len(r.side_hits()) >= r.bound,
    )


# -- verification -------------------------------------------------------------------


def verify_report(family, report: TransversalReport) -> bool:
    """Recount hits of report.line on the original input and check the bound.

    `family` is a list of cylinders, or an (F, G) pair for bipartite reports.
    """
    if isinstance(family, tuple) and len(family) == 2 and isinstance(family[0], (list, tuple)):
        F, G = family
        U = list(F) + list(G)
        if report.sizes != (len(F), len(G)) or report.side not in ("f", "g"):
            return False
    else:
        U = list(family)
        if report.side is not None or report.n != len(U):
            return False
    if not report.hits or any(not 0 <= h < len(U) for h in report.hits):
        return False
    recount = set(hits_of(report.line, U))
    if not set(report.hits) <= recount:
        return False
    return len(report.side_hits()) >= report.bound
