"""JSON files for families, reports and covers.

Floats are written with Python's shortest round-trip repr, so parsing a file
and writing it again reproduces it byte for byte.  Writes go through a
temporary file in the target directory and an atomic rename, so a failed
command never leaves a partial file behind.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .piercing import PiercingSet
from .planar import ConvexPolygon, Slab2, convex_hull
from .rounded import LineCover, RoundedBody
from .solid import Cylinder3, Line3
from .transversal import Branch, Perturbation, TransversalReport

FORMAT_VERSION = 1


class SchemaError(ValueError):
    pass


# -- low level -----------------------------------------------------------------


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: str, obj: Any) -> None:
    text = dumps(obj)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=folder)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)


def _num(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise SchemaError(f"{what}: expected a finite number, got {x!r}")
    return float(x)


def _vec(x, dim: int, what: str) -> Tuple[float, ...]:
    if not isinstance(x, list) or len(x) != dim:
        raise SchemaError(f"{what}: expected {dim} numbers")
    return tuple(_num(v, what) for v in x)


def _nonempty(x, what: str) -> list:
    if not isinstance(x, list) or not x:
        raise SchemaError(f"{what}: expected a nonempty array")
    return x


# -- cylinders and families ---------------------------------------------------------


def cylinder_to_json(c: Cylinder3) -> Dict[str, Any]:
    return {"direction": list(c.direction), "generators": [list(g) for g in c.generators]}


def cylinder_from_json(obj) -> Cylinder3:
    if not isinstance(obj, dict):
        raise SchemaError("cylinder must be an object")
    d = _vec(obj.get("direction"), 3, "direction")
    gens = tuple(_vec(g, 3, "generator") for g in _nonempty(obj.get("generators"), "generators"))
    try:
        return Cylinder3(d, gens)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def family_to_json(family: Sequence[Cylinder3], meta: Optional[dict] = None) -> dict:
    return {"kind": "family", "cylinders": [cylinder_to_json(c) for c in family], "meta": meta or {}}


def bipartite_to_json(F, G, meta: Optional[dict] = None) -> dict:
    return {
        "kind": "bipartite",
        "f": [cylinder_to_json(c) for c in F],
        "g": [cylinder_to_json(c) for c in G],
        "meta": meta or {},
    }


def rounded_to_json(bodies: Sequence[RoundedBody], D: float, meta: Optional[dict] = None) -> dict:
    return {
        "kind": "rounded",
        "D": float(D),
        "bodies": [{"center": list(b.center), "r": b.r, "R": b.R} for b in bodies],
        "meta": meta or {},
    }


def parse_instance(obj) -> Tuple[str, Any]:
    """Returns (kind, payload): a family list, an (F, G) pair, or (bodies, D)."""
    if not isinstance(obj, dict):
        raise SchemaError("instance file must hold an object")
    kind = obj.get("kind")
    if kind == "family":
        return kind, [cylinder_from_json(c) for c in _nonempty(obj.get("cylinders"), "cylinders")]
    if kind == "bipartite":
        F = [cylinder_from_json(c) for c in _nonempty(obj.get("f"), "f")]
        G = [cylinder_from_json(c) for c in _nonempty(obj.get("g"), "g")]
        return kind, (F, G)
    if kind == "rounded":
        D = _num(obj.get("D"), "D")
        bodies = []
        for b in _nonempty(obj.get("bodies"), "bodies"):
            if not isinstance(b, dict):
                raise SchemaError("body must be an object")
            try:
                bodies.append(RoundedBody(_vec(b.get("center"), 3, "center"),
                                          _num(b.get("r"), "r"), _num(b.get("R"), "R")))
            except ValueError as exc:
                raise SchemaError(str(exc)) from exc
        return kind, (bodies, D)
    raise SchemaError(f"unknown instance kind {kind!r}")


def read_instance(path: str) -> Tuple[str, Any]:
    return parse_instance(read_json(path))


def parse_polygon(obj) -> ConvexPolygon:
    """A polygon file is {"vertices": [[x, y], ...]} or a bare vertex list."""
    verts = obj.get("vertices") if isinstance(obj, dict) else obj
    pts = [_vec(v, 2, "vertex") for v in _nonempty(verts, "vertices")]
    return convex_hull(pts)


# -- reports ----------------------------------------------------------------------


def _pairs(xs) -> List[list]:
    return [list(p) for p in xs]


def piercing_to_json(T: PiercingSet) -> dict:
    out = {
        "points": _pairs(T.points),
        "width": T.width,
        "anchors": _pairs(T.anchors),
        "rectangles": [_pairs(r) for r in T.rectangles],
        "chords": [_pairs(c) for c in T.chords],
    }
    if T.slab is not None:
        out["slab"] = {"normal": list(T.slab.normal), "lo": T.slab.lo, "hi": T.slab.hi}
    return out


def piercing_from_json(obj) -> PiercingSet:
    slab = obj.get("slab")
    return PiercingSet(
        points=tuple(_vec(p, 2, "point") for p in obj["points"]),
        width=_num(obj["width"], "width"),
        anchors=tuple(_vec(p, 2, "anchor") for p in obj["anchors"]),
        rectangles=tuple(tuple(_vec(p, 2, "rectangle") for p in r) for r in obj.get("rectangles", [])),
        chords=tuple(tuple(_vec(p, 2, "chord") for p in c) for c in obj.get("chords", [])),
        slab=None if slab is None else Slab2(_vec(slab["normal"], 2, "normal"),
                                             _num(slab["lo"], "lo"), _num(slab["hi"], "hi")),
    )


def report_to_json(r: TransversalReport) -> dict:
    out: Dict[str, Any] = {
        "branch": r.branch.value,
        "line": {"point": list(r.line.point), "direction": list(r.line.direction)},
        "hits": list(r.hits),
        "pivot": r.pivot,
        "n": r.n,
        "stats": dict(r.stats),
    }
    if r.piercing is not None:
        out["piercing"] = piercing_to_json(r.piercing)
        out["slab_counts"] = list(r.slab_counts)
    if r.perturbation is not None:
        p = r.perturbation
        out["perturbation"] = {"seed": p.seed, "magnitude": p.magnitude, "deltas": list(p.deltas)}
    if r.side is not None:
        out["side"] = r.side
        out["sizes"] = list(r.sizes)
    return out


def report_from_json(obj) -> TransversalReport:
    try:
        line = obj["line"]
        pert = obj.get("perturbation")
        return TransversalReport(
            branch=Branch(obj["branch"]),
            line=Line3(_vec(line["point"], 3, "point"), _vec(line["direction"], 3, "direction")),
            hits=tuple(int(h) for h in obj["hits"]),
            pivot=int(obj["pivot"]),
            n=int(obj["n"]),
            piercing=piercing_from_json(obj["piercing"]) if "piercing" in obj else None,
            slab_counts=tuple(int(c) for c in obj["slab_counts"]) if "slab_counts" in obj else None,
            perturbation=None if pert is None else Perturbation(
                int(pert["seed"]), _num(pert["magnitude"], "magnitude"),
                tuple(_num(x, "delta") for x in pert["deltas"])),
            side=obj.get("side"),
            sizes=tuple(int(s) for s in obj["sizes"]) if "sizes" in obj else None,
            stats=dict(obj.get("stats", {})),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed report: {exc}") from exc


def report_file(r: TransversalReport, verified: bool, timing: Optional[float] = None) -> dict:
    """Wrapper written to disk; the stored verification flag is informational only."""
    out = {"kind": "report", "version": FORMAT_VERSION, "report": report_to_json(r), "verified": verified}
    if timing is not None:
        out["timing"] = timing
    return out


def read_report(path: str) -> TransversalReport:
    obj = read_json(path)
    if not isinstance(obj, dict) or obj.get("kind") != "report":
        raise SchemaError("not a report file")
    return report_from_json(obj["report"])


def cover_to_json(c: LineCover) -> dict:
    return {
        "origin": list(c.origin),
        "directions": _pairs(c.directions),
        "assignment": list(c.assignment),
        "phi": c.phi,
        "D": c.D,
    }


def cover_from_json(obj) -> LineCover:
    return LineCover(
        origin=_vec(obj["origin"], 3, "origin"),
        directions=tuple(_vec(d, 3, "direction") for d in obj["directions"]),
        assignment=tuple(int(a) for a in obj["assignment"]),
        phi=_num(obj["phi"], "phi"),
        D=_num(obj["D"], "D"),
    )


def cover_file(c: LineCover, verified: bool, timing: Optional[float] = None) -> dict:
    out = {"kind": "cover", "version": FORMAT_VERSION, "cover": cover_to_json(c), "verified": verified}
    if timing is not None:
        out["timing"] = timing
    return out
