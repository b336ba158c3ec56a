"""Command line interface: gen, solve, verify, pierce, cover-rounded.

Exit codes: 0 success, 2 usage or I/O error, 3 generation failed, 4 input not
pairwise intersecting, 5 guarantee missed, 6 verification mismatch, 7 piercing
oracle failure, 8 body not well-rounded.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import List, Optional

import numpy as np

from . import __version__
from . import fileio
from .errors import (
    GenerationFailed,
    GuaranteeNotMet,
    InvalidParameter,
    NotPairwiseIntersectable,
    NotPairwiseIntersecting,
    NotWellRounded,
    PerturbationFailed,
)
from .instances import KINDS, GenSpec, generate
from .piercing import piercing_points, verify_piercing
from .planar import EPS, Slab2
from .rounded import cover_failures, cover_lines
from .solid import is_parallel, shadow
from .transversal import DEFAULT_PERTURB, TransversalReport, hits_of, solve, solve_bipartite, verify_report

EXIT_OK = 0
EXIT_IO = 2
EXIT_GENERATION = 3
EXIT_NOT_INTERSECTING = 4
EXIT_GUARANTEE = 5
EXIT_MISMATCH = 6
EXIT_PIERCE = 7
EXIT_NOT_ROUNDED = 8


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _summary(r: TransversalReport) -> str:
    line = f"n={r.side_size} branch={r.branch.value} hits={len(r.side_hits())} bound={r.side_size // 28}"
    if r.side is not None:
        line += f" side={r.side}"
    return line


# -- gen ------------------------------------------------------------------------------


def cmd_gen(args) -> int:
    params = {}
    if args.kind in ("coplanar-lines", "hyperboloid") and args.delta is not None:
        params["delta"] = args.delta
    if args.kind == "rounded":
        params["D"] = args.d
    if args.kind == "common-point" and args.shape != "ellipse":
        params["shape"] = args.shape
    spec = GenSpec(args.kind, args.n, args.seed, params)
    try:
        out = generate(spec)
    except GenerationFailed as exc:
        return _fail(str(exc), EXIT_GENERATION)
    except ValueError as exc:
        return _fail(str(exc), EXIT_IO)
    meta = {"generator": args.kind, "n": args.n, "seed": args.seed, "params": params}
    if args.kind == "hyperboloid":
        doc = fileio.bipartite_to_json(out[0], out[1], meta)
        count = f"{len(out[0])}+{len(out[1])}"
    elif args.kind == "rounded":
        doc = fileio.rounded_to_json(out, args.d, meta)
        count = str(len(out))
    else:
        doc = fileio.family_to_json(out, meta)
        count = str(len(out))
    try:
        fileio.write_json(args.out, doc)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    print(f"kind={doc['kind']} count={count} out={args.out}")
    return EXIT_OK


# -- solve ----------------------------------------------------------------------------


def _figure(path: str, cylinders, r: TransversalReport):
    from .render import solve_figure

    C = cylinders[r.pivot]
    hit = set(r.hits)
    slabs, flags = [], []
    for j, A in enumerate(cylinders):
        if j == r.pivot or is_parallel(A.direction, C.direction):
            continue
        s = shadow(A, C.frame)
        if isinstance(s, Slab2):
            slabs.append(s)
            flags.append(j in hit)
    pts = r.piercing.array if r.piercing is not None else None
    chosen = C.frame.project(r.line.point)
    solve_figure(C.section, C.width, slabs, flags, pts, np.asarray(chosen), path, _summary(r))


def cmd_solve(args) -> int:
    try:
        kind, payload = fileio.read_instance(args.input)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_IO)
    if kind == "rounded":
        return _fail("solve needs a family or bipartite file; use cover-rounded", EXIT_IO)
    if not (0.0 < args.epsilon <= 1e-6):
        return _fail("--epsilon must lie in (0, 1e-6]", EXIT_IO)
    start = time.perf_counter()
    try:
        if kind == "family":
            target = payload
            r = solve(payload, seed=args.seed, perturb=args.perturb, jobs=args.jobs, eps=args.epsilon)
            cylinders = payload
        else:
            target = (payload[0], payload[1])
            r = solve_bipartite(payload[0], payload[1], seed=args.seed, perturb=args.perturb,
                                jobs=args.jobs, eps=args.epsilon)
            cylinders = payload[0] + payload[1]
    except NotPairwiseIntersecting as exc:
        i, j = exc.witness
        print(f"not-intersecting witness=({i},{j})")
        return EXIT_NOT_INTERSECTING
    except (GuaranteeNotMet, PerturbationFailed) as exc:
        return _fail(str(exc), EXIT_GUARANTEE)
    elapsed = time.perf_counter() - start
    ok = verify_report(target, r)
    print(_summary(r))
    if not ok:
        return _fail("report failed verification", EXIT_MISMATCH)
    try:
        fileio.write_json(args.out, fileio.report_file(r, ok, elapsed if args.timing else None))
        if args.figure:
            _figure(args.figure, cylinders, r)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        kind, payload = fileio.read_instance(args.family)
        r = fileio.read_report(args.report)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_IO)
    if kind == "rounded":
        return _fail("verify needs a family or bipartite file", EXIT_IO)
    target = payload if kind == "family" else (payload[0], payload[1])
    cylinders = payload if kind == "family" else payload[0] + payload[1]
    recount = hits_of(r.line, cylinders)
    ok = verify_report(target, r)
    print(f"recomputed hits={len(recount)} claimed={len(r.hits)} verified={str(ok).lower()}")
    return EXIT_OK if ok else EXIT_MISMATCH


# -- pierce ---------------------------------------------------------------------------


def cmd_pierce(args) -> int:
    try:
        K = fileio.parse_polygon(fileio.read_json(args.polygon))
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_IO)
    if args.trials < 1:
        return _fail("--trials must be positive", EXIT_IO)
    T = piercing_points(K)
    failures = verify_piercing(K, T, args.trials, args.seed, args.margin)
    print(f"|T|={len(T)} failures={len(failures)}")
    if args.out:
        from .render import pierce_figure

        try:
            pierce_figure(K, T, failures, args.out)
        except OSError as exc:
            return _fail(str(exc), EXIT_IO)
    return EXIT_OK if not failures and len(T) <= 12 else EXIT_PIERCE


# -- cover-rounded ------------------------------------------------------------------


def cmd_cover(args) -> int:
    try:
        kind, payload = fileio.read_instance(args.input)
    except (OSError, ValueError) as exc:
        return _fail(str(exc), EXIT_IO)
    if kind != "rounded":
        return _fail("cover-rounded needs a rounded file", EXIT_IO)
    bodies, D = payload
    start = time.perf_counter()
    try:
        cover = cover_lines(bodies, D, strict=not args.lenient)
    except NotWellRounded as exc:
        print(f"not-well-rounded body={exc.index}")
        return EXIT_NOT_ROUNDED
    except NotPairwiseIntersectable as exc:
        print(f"not-intersecting body={exc.index}")
        return EXIT_NOT_INTERSECTING
    except InvalidParameter as exc:
        return _fail(str(exc), EXIT_IO)
    elapsed = time.perf_counter() - start
    problems = cover_failures(bodies, cover)
    print(f"lines={len(cover.directions)} bound={math.floor(32 * D * D)}")
    if problems:
        for p in problems[:10]:
            print(f"error: {p}", file=sys.stderr)
        return EXIT_MISMATCH
    try:
        fileio.write_json(args.out, fileio.cover_file(cover, True, elapsed if args.timing else None))
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cyltrans", description="Line transversals of cylinder families.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a seeded instance file")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True, help="family size (per side for hyperboloid)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--d", type=float, default=1.0, help="roundness parameter D (rounded only)")
    g.add_argument("--delta", type=float, default=None, help="thickness (coplanar-lines, hyperboloid)")
    g.add_argument("--shape", choices=("ellipse", "round", "segment"), default="ellipse",
                   help="section shape (common-point only)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="find a transversal line and write a report")
    s.add_argument("input")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--epsilon", type=float, default=EPS)
    s.add_argument("--perturb", type=float, default=DEFAULT_PERTURB)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--figure", default=None, help="also write an SVG of the pivot's plane")
    s.add_argument("--timing", action="store_true", help="record wall time in the report")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="recount a report's hits against its family")
    v.add_argument("family")
    v.add_argument("report")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("pierce", help="piercing set of a polygon with a sampling check")
    q.add_argument("polygon")
    q.add_argument("--out", default=None, help="SVG path")
    q.add_argument("--trials", type=int, default=10000)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--margin", type=float, default=1e-6)
    q.set_defaults(func=cmd_pierce)

    c = sub.add_parser("cover-rounded", help="line cover of a well-rounded family")
    c.add_argument("input")
    c.add_argument("--out", required=True)
    c.add_argument("--lenient", action="store_true", help="use the weaker distance precondition")
    c.add_argument("--timing", action="store_true")
    c.set_defaults(func=cmd_cover)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        return _fail("--jobs must be positive", EXIT_IO)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
