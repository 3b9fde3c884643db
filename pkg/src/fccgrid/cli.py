"""Command line front end.

All coordinates on the command line are doubled coordinates ``(x, y, z) =
(2i, 2j, k)`` with ``x = y = z (mod 2)``, unless ``--paper-coords`` is given,
in which case half-integer triples ``(i, j, k)`` are accepted and converted.

Exit codes: 0 success, 1 negative verdict (violations, failed facts, or a
verdict contradicting ``--expect``), 2 usage or format error, 3 budget
exhausted.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .balls import GRAPH_LAYERS, clique_lower_bound
from .cnf import export_dimacs
from .colorings import (
    CONSTRUCTIONS,
    colors_used,
    construction,
    verify_periodic,
    verify_window,
    window_sources,
)
from .facts import MalformedScript, run_fact_script
from .io import FormatError, read_coloring, read_region, write_coloring, write_region
from .lattice import (
    NotInRegion,
    ParityError,
    Region,
    Site,
    bfs_distances,
    ball_region,
    distance,
    make_site,
)
from .search import InvalidAnchor, SearchProblem, k_colorable

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _site(args, coords) -> Site:
    if args.paper_coords:
        return Site.from_paper(*(Fraction(c) for c in coords))
    try:
        ints = [int(c) for c in coords]
    except ValueError:
        raise UsageError(f"doubled coordinates must be integers: {coords}") from None
    return make_site(*ints)


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Run:
    """Collects the manifest of one invocation."""

    def __init__(self, args):
        self.args = args
        self.inputs: dict[str, str] = {}
        self.outcome: dict = {}
        self.t0 = time.perf_counter()

    def input(self, path) -> Path:
        p = Path(path)
        if not p.is_file():
            raise UsageError(f"no such file: {path}")
        self.inputs[str(path)] = _digest(p)
        return p

    def manifest(self, exit_code: int) -> dict:
        flags = {k: v for k, v in sorted(vars(self.args).items())
                 if k not in ("func", "manifest") and v is not None}
        return {
            "command": self.args.command,
            "flags": flags,
            "inputs": self.inputs,
            "version": __version__,
            "outcome": self.outcome,
            "exit_code": exit_code,
            "elapsed": round(time.perf_counter() - self.t0, 6),
        }


# -- subcommands -------------------------------------------------------------

def cmd_dist(run: Run) -> int:
    a = run.args
    u, v = _site(a, a.coords[:3]), _site(a, a.coords[3:])
    if a.graph == "F":
        dd = distance(u, v)
    else:
        from .balls import graph_distance
        dd = graph_distance(u, v, a.graph)
    print(dd)
    run.outcome = {"distance": dd}
    return EXIT_OK


def cmd_ball(run: Run) -> int:
    a = run.args
    center = _site(a, a.center)
    if a.graph == "F":
        region = ball_region(center, a.radius)
    else:
        region = Region(tuple(bfs_distances([center], a.radius, GRAPH_LAYERS[a.graph])),
                        ("ball", a.graph, tuple(center), a.radius))
    if a.out:
        write_region(region, a.out)
    print(len(region))
    run.outcome = {"size": len(region)}
    return EXIT_OK


def cmd_clique_bound(run: Run) -> int:
    a = run.args
    cb = clique_lower_bound(a.graph, a.d)
    if a.out:
        write_region(cb.witness, a.out)
    print(cb.size)
    run.outcome = {"size": cb.size, "formula": str(cb.formula),
                   "matches_formula": cb.matches_formula}
    return EXIT_OK


def _construction(a):
    if a.construction is None:
        raise UsageError("--construction is required")
    if a.construction in ("slab-general", "slab01", "slab02") and a.d is None:
        raise UsageError(f"--d is required for {a.construction}")
    return construction(a.construction, a.d)


def cmd_color(run: Run) -> int:
    a = run.args
    spec = _construction(a)
    region = read_region(run.input(a.region)) if a.region else Region(window_sources(spec))
    if a.out:
        write_coloring(spec, region, a.out)
    else:
        from .io import coloring_text
        sys.stdout.write(coloring_text(spec, region))
    used = len({spec(s) for s in region})
    if a.out:
        print(f"wrote {len(region)} sites, {used} colors")
    run.outcome = {"sites": len(region), "colors": used}
    return EXIT_OK


def cmd_verify(run: Run) -> int:
    a = run.args
    if a.d is None:
        raise UsageError("--d is required")
    if a.coloring:
        spec, region = read_coloring(run.input(a.coloring))
        result = verify_window(spec, region, a.d, a.metric, threads=a.threads)
        used = result.colors_used
    else:
        spec = _construction(a)
        result = verify_periodic(spec, a.d, threads=a.threads)
        used = colors_used(spec)
    if result.valid:
        print(f"VALID, {used} colors")
    else:
        first = result.violations[0]
        print(f"INVALID, {len(result.violations)} violations; first: "
              f"{tuple(first.u)} and {tuple(first.v)} share color {first.color} "
              f"at distance {first.dist}")
    run.outcome = {"valid": result.valid, "colors": used,
                   "violations": len(result.violations), "pairs_checked": result.pairs_checked}
    return EXIT_OK if result.valid else EXIT_FALSE


def _problem(run: Run) -> SearchProblem:
    a = run.args
    if a.region is None or a.d is None or a.k is None:
        raise UsageError("--region, --d and --k are required")
    region = read_region(run.input(a.region))
    if a.anchor in (None, "auto"):
        anchor = "auto"
    elif a.anchor == "none":
        anchor = None
    else:
        anchor = read_region(run.input(a.anchor))
    return SearchProblem(region, a.d, a.k, a.metric, anchor,
                         budget_nodes=a.budget_nodes, budget_secs=a.budget_secs)


def cmd_search(run: Run) -> int:
    a = run.args
    problem = _problem(run)
    cert = k_colorable(problem)
    s = cert.stats
    print(f"{cert.verdict.upper()} (nodes={s.nodes}, max_depth={s.max_depth}"
          + (f", {s.note}" if s.note else "") + ")")
    if cert.witness is not None and a.out:
        write_coloring(cert.witness, problem.region, a.out)
    run.outcome = {"verdict": cert.verdict, "nodes": s.nodes, "max_depth": s.max_depth,
                   "anchor_size": len(cert.anchor), "note": s.note}
    if cert.verdict == "inconclusive":
        return EXIT_INCONCLUSIVE
    if a.expect is not None and a.expect != cert.verdict:
        return EXIT_FALSE
    return EXIT_OK


def cmd_export_dimacs(run: Run) -> int:
    a = run.args
    if not a.out:
        raise UsageError("--out is required")
    problem = _problem(run)
    cnf = export_dimacs(problem, a.out)
    print(f"p cnf {cnf.nvars} {len(cnf.clauses)}")
    run.outcome = {"variables": cnf.nvars, "clauses": len(cnf.clauses),
                   "sha256": _digest(a.out)}
    return EXIT_OK


def cmd_facts(run: Run) -> int:
    a = run.args
    failed = 0
    total = 0
    per_file = {}
    for path in a.scripts:
        report = run_fact_script(run.input(path))
        total += len(report.results)
        failed += len(report.failures)
        shown = report.results if a.verbose else report.failures
        for r in shown:
            print(f"{path}: {r.line()}")
        per_file[str(path)] = report.summary()
    if failed:
        print(f"FAILED {failed} of {total} assertions")
    else:
        print(f"ALL PASS ({total} assertions)")
    run.outcome = {"assertions": total, "failed": failed, "files": per_file}
    return EXIT_FALSE if failed else EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="write the run manifest here instead of stderr")
    common.add_argument("--paper-coords", action="store_true",
                        help="read coordinates as half-integer (i, j, k) triples")
    common.add_argument("--threads", type=int, default=1,
                        help="worker processes for verification")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--graph", choices=sorted(GRAPH_LAYERS), default="F")

    build = argparse.ArgumentParser(add_help=False)
    build.add_argument("--construction", choices=CONSTRUCTIONS)
    build.add_argument("--d", type=int)

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--region", help="region file (JSON lines)")
    search.add_argument("--d", type=int)
    search.add_argument("--k", type=int)
    search.add_argument("--metric", choices=["ambient", "internal"], default="ambient")
    search.add_argument("--anchor", default="auto", help="auto, none, or a region file")
    search.add_argument("--budget-nodes", type=int, default=10**8)
    search.add_argument("--budget-secs", type=float, default=600.0)
    search.add_argument("--out")

    p = argparse.ArgumentParser(prog="fccgrid", description=__doc__.split("\n\n")[0],
                                epilog="Coordinates are doubled unless --paper-coords is given.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dist", parents=[common, graph], help="distance between two sites")
    s.add_argument("coords", nargs=6, metavar="C")
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("ball", parents=[common, graph], help="closed ball around a site")
    s.add_argument("center", nargs=3, metavar="C")
    s.add_argument("radius", type=int)
    s.add_argument("--out", help="write the ball as a region file")
    s.set_defaults(func=cmd_ball)

    s = sub.add_parser("clique-bound", parents=[common, graph],
                       help="clique lower bound for the d-th power")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--out", help="write the witness clique as a region file")
    s.set_defaults(func=cmd_clique_bound)

    s = sub.add_parser("color", parents=[common, build], help="write a coloring as CSV")
    s.add_argument("--region", help="sites to color (default: one period)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("verify", parents=[common, build],
                       help="verify a construction, or a coloring CSV on its own sites")
    s.add_argument("--coloring", help="coloring CSV to verify")
    s.add_argument("--metric", choices=["ambient", "internal"], default="ambient")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common, search], help="exact k-colorability")
    s.add_argument("--expect", choices=["colorable", "not-colorable"])
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("export-dimacs", parents=[common, search], help="write a DIMACS CNF")
    s.set_defaults(func=cmd_export_dimacs)

    s = sub.add_parser("facts", parents=[common], help="run fact scripts")
    s.add_argument("scripts", nargs="+")
    s.add_argument("-v", "--verbose", action="store_true", help="print every assertion")
    s.set_defaults(func=cmd_facts)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args)
    try:
        code = args.func(run)
    except (UsageError, ParityError, NotInRegion, FormatError, MalformedScript,
            InvalidAnchor) as exc:
        print(f"error: {exc}", file=sys.stderr)
        run.outcome = {"error": str(exc)}
        code = EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        run.outcome = {"error": str(exc)}
        code = EXIT_USAGE
    text = json.dumps(run.manifest(code), sort_keys=True)
    if args.manifest:
        Path(args.manifest).write_text(text + "\n")
    else:
        print(text, file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
