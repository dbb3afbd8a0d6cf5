"""
Command-line entry point: `python -m dualalpha <command> ...`.

Exit codes: 0 success, 1 verification mismatch, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .builder import CoincidentPointsError, build_alpha, check_witnesses
from .cech import build_cech_graph
from .complex import ComplexError, barycentric_embed, euler_characteristic, star_sizes
from .config import settings
from .dual_qp import DualCyclingError, DualFeasibilityError
from .homology import betti
from .io import (
    ComplexFormatError,
    PointsFormatError,
    format_complex,
    format_edges,
    parse_points,
    read_complex,
    write_complex,
    write_edges,
    write_off,
)
from .models.request import RunConfig
from .models.response import ComplexSummary
from .oracle import OracleSizeError, brute_alpha, compare
from .sparse import NonPrimeModulusError
from .utils.metrics import get_stats, labels

log = logging.getLogger(__name__)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

INPUT_ERRORS = (
    ValidationError,
    PointsFormatError,
    ComplexFormatError,
    ComplexError,
    CoincidentPointsError,
    NonPrimeModulusError,
    OracleSizeError,
    FileNotFoundError,
)


def _points_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--points", required=True, help="CSV point file (or .off/.ply/.obj mesh)")
    p.add_argument("--weights", default=None, help="One power per line; default p = 0")
    cut = p.add_mutually_exclusive_group()
    cut.add_argument("--alpha", type=float, default=None, help="Cutoff a1 in power units")
    cut.add_argument("--radius", type=float, default=None, help="Ball radius r (unweighted input; a1 = r^2)")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--eps-c", type=float, default=None, help="Relative acceptance tolerance on c*")
    p.add_argument("--eps-pivot", type=float, default=None, help="Relative Cholesky pivot threshold")
    p.add_argument("--progress", action="store_true", help="Show per-vertex progress bars")
    return p


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    pts = _points_options()
    ap = argparse.ArgumentParser(prog="dualalpha", description="Weighted alpha complexes via dual quadratic programs.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common, pts], help="Build the alpha complex and write it")
    b.add_argument("--dim", type=int, required=True)
    b.add_argument("--out", default=None, help="Output .alpha file (default: stdout)")
    b.add_argument("--witness", action="store_true", help="Append witness coordinates to every line")
    b.add_argument("--timings", action="store_true", help="Log stage timings")

    h = sub.add_parser("betti", parents=[common, pts], help="Betti numbers of the alpha complex")
    h.add_argument("--prime", type=int, default=settings.DEFAULT_PRIME)
    h.add_argument("--upto", type=int, default=1, help="Highest Betti number reported")
    h.add_argument("--dim", type=int, default=None, help="Build dimension (default: upto + 1)")

    g = sub.add_parser("graph", parents=[common, pts], help="Čech graph edge list")
    g.add_argument("--out", default=None)

    v = sub.add_parser("verify", parents=[common, pts], help="Compare against the brute-force oracle")
    v.add_argument("--dim", type=int, default=2)

    e = sub.add_parser("export-geom", parents=[common], help="OFF export of the witness-embedded subdivision")
    e.add_argument("--complex", required=True, help=".alpha file written with --witness")
    e.add_argument("--out", required=True)
    e.add_argument("--max-flag-dim", type=int, default=2)

    s = sub.add_parser("stats", parents=[common], help="JSON summary of a complex file")
    s.add_argument("--complex", required=True)
    s.add_argument("--vertex", type=int, default=None, help="Also report star sizes of this vertex")
    return ap


def _run_config(args, dim: Optional[int]) -> RunConfig:
    extra = {}
    if getattr(args, "prime", None) is not None:
        extra["prime"] = args.prime
    if getattr(args, "out", None):
        extra["out"] = Path(args.out)
    return RunConfig(
        points=Path(args.points),
        weights=Path(args.weights) if args.weights else None,
        alpha=args.alpha,
        radius=args.radius,
        dim=dim if dim is not None else 2,
        threads=args.threads or max(1, settings.THREADS),
        eps_c_rel=args.eps_c,
        eps_pivot_rel=args.eps_pivot,
        **extra,
    )


def _load(cfg: RunConfig):
    return parse_points(cfg.points, cfg.weights, cfg.a1)


def cmd_build(args) -> int:
    cfg = _run_config(args, args.dim)
    points = _load(cfg)
    params = cfg.build_params().model_copy(update={"progress": args.progress})
    cx, witness = build_alpha(points, params)
    kept = witness if args.witness else None
    if cfg.out is not None:
        write_complex(cx, kept, cfg.out, points.ambient_dim, cfg.a1)
        log.info("wrote %d simplices to %s", len(cx), cfg.out)
    else:
        sys.stdout.write(format_complex(cx, kept, points.ambient_dim, cfg.a1))
    if args.timings:
        for label in labels():
            st = get_stats(label)
            log.info("%s: total=%.4fs max=%.4fs count=%d", label, st["total"], st["max"], st["count"])
    return EXIT_OK


def cmd_betti(args) -> int:
    dim = args.dim if args.dim is not None else args.upto + 1
    cfg = _run_config(args, dim)
    points = _load(cfg)
    params = cfg.build_params().model_copy(update={"progress": args.progress})
    cx, _ = build_alpha(points, params)
    for b in betti(cx, cfg.prime, args.upto):
        print(b)
    return EXIT_OK


def cmd_graph(args) -> int:
    cfg = _run_config(args, None)
    points = _load(cfg)
    graph = build_cech_graph(points)
    if cfg.out is not None:
        write_edges(graph, cfg.out)
        log.info("wrote %d edges to %s", graph.n_edges, cfg.out)
    else:
        sys.stdout.write(format_edges(graph))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _run_config(args, args.dim)
    points = _load(cfg)
    params = cfg.build_params()
    if points.n_points > settings.ORACLE_MAX_POINTS:
        raise OracleSizeError(f"verify supports at most {settings.ORACLE_MAX_POINTS} points, got {points.n_points}")
    ours = build_alpha(points, params)
    reference = brute_alpha(points, params.d, params.tolerances)
    report = compare(ours, reference)
    problems = check_witnesses(points, *ours)
    for line in report.diff_lines():
        print(line)
    for line in problems[:10]:
        print(f"witness: {line}")
    if report.identical and not problems:
        print("OK: complexes identical")
        return EXIT_OK
    print(f"MISMATCH: {len(report.discrepancies)} discrepancies, {len(problems)} witness violations")
    return EXIT_MISMATCH


def cmd_export_geom(args) -> int:
    cf = read_complex(args.complex)
    if not cf.has_witnesses:
        raise ComplexFormatError(f"{args.complex}: geometry export needs witnesses (build with --witness)")
    embedding = barycentric_embed(cf.complex, cf.witness, args.max_flag_dim)
    try:
        write_off(embedding, args.out)
    except ValueError as e:
        raise ComplexError(str(e)) from e
    log.info("wrote %d flag vertices to %s", len(embedding.vertices), args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    cf = read_complex(args.complex)
    weights = list(cf.complex.weights().values())
    summary = ComplexSummary(
        sizes=list(cf.complex.sizes()),
        euler_characteristic=euler_characteristic(cf.complex),
        min_weight=min(weights) if weights else None,
        max_weight=max(weights) if weights else None,
        ambient_dim=cf.ambient,
        a1=cf.a1,
        star_sizes=list(star_sizes(cf.complex, args.vertex)) if args.vertex is not None else None,
    )
    print(summary.model_dump_json(indent=2))
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "betti": cmd_betti,
    "graph": cmd_graph,
    "verify": cmd_verify,
    "export-geom": cmd_export_geom,
    "stats": cmd_stats,
}


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DualCyclingError, DualFeasibilityError) as e:
        log.error("solver failed: %s", e)
        return EXIT_USAGE
