"""DIMACS CNF export of a coloring problem, and the way back.

Variable ``v(s, c) = index(s) * k + c + 1`` where ``index`` is the canonical
0-based site index.  Clause order is fixed so exports are byte-identical:

1. per site: its at-least-one clause, then its at-most-one pairs
   (colors lexicographic);
2. conflict clauses ``-v(u,c) -v(w,c)`` per d-power edge (canonical edge
   order), colors ascending;
3. anchor units (anchor site ``i`` gets color ``i``), then ``Equal`` pairs
   (two binary clauses per color) and ``Distinct`` pairs (one per color), in
   the order given.

Exports are not deduplicated: a ``Distinct`` pair that is also an edge gives
repeated clauses, which solvers accept.
"""
from __future__ import annotations

import re
import time
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .lattice import Region, Site
from .search import (
    Distinct,
    Equal,
    SearchProblem,
    SearchStats,
    _anchor_vertices,
    _Budget,
    color_bitgraph,
    conflict_graph,
)

__all__ = [
    "CNF",
    "DimacsFormatError",
    "encode",
    "export_dimacs",
    "read_dimacs",
    "decode_assignment",
    "brute_force_sat",
    "Replay",
    "replay_dimacs",
    "solve_external",
]


class DimacsFormatError(ValueError):
    pass


@dataclass
class CNF:
    nvars: int
    clauses: list[tuple[int, ...]]
    comments: tuple[str, ...] = ()

    def text(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.nvars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"

    def satisfied_by(self, model) -> bool:
        """``model`` lists the true literals; every other variable is false."""
        true = {lit for lit in model if lit > 0}
        return all(any((lit > 0) == (abs(lit) in true) for lit in cl) for cl in self.clauses)


def _var(idx: int, c: int, k: int) -> int:
    return idx * k + c + 1


def encode(problem: SearchProblem) -> CNF:
    """The clause list of a problem (see module docstring for the order)."""
    region, k = problem.region, problem.k
    n = len(region)
    g = conflict_graph(region, problem.d, problem.metric)
    clauses: list[tuple[int, ...]] = []
    for i in range(n):
        clauses.append(tuple(_var(i, c, k) for c in range(k)))
        for a, b in combinations(range(k), 2):
            clauses.append((-_var(i, a, k), -_var(i, b, k)))
    for u, w in g.site_edges:
        for c in range(k):
            clauses.append((-_var(u, c, k), -_var(w, c, k)))
    # the anchor is found on the unconstrained graph so it names sites, not classes
    anchor_problem = SearchProblem(region, problem.d, k, problem.metric, problem.anchor)
    for c, v in enumerate(_anchor_vertices(anchor_problem, g)):
        if c < k:
            clauses.append((_var(v, c, k),))
        else:
            clauses.append(())  # anchor larger than the palette: trivially UNSAT
    for con in problem.extra_constraints:
        a, b = region.index[Site(*con[0])], region.index[Site(*con[1])]
        if isinstance(con, Equal):
            for c in range(k):
                clauses.append((-_var(a, c, k), _var(b, c, k)))
                clauses.append((_var(a, c, k), -_var(b, c, k)))
        elif isinstance(con, Distinct):
            for c in range(k):
                clauses.append((-_var(a, c, k), -_var(b, c, k)))
        else:
            raise TypeError(f"unknown constraint {con!r}")
    comments = (f"fccgrid coloring: sites={n} d={problem.d} k={k} metric={problem.metric}",
                "variable v(s,c) = index(s)*k + c + 1, sites in (z,y,x) order")
    return CNF(n * k, clauses, comments)


def export_dimacs(problem: SearchProblem, path) -> CNF:
    cnf = encode(problem)
    Path(path).write_text(cnf.text())
    return cnf


_HEADER = re.compile(r"p\s+cnf\s+(\d+)\s+(\d+)\s*$")


def read_dimacs(path_or_text) -> CNF:
    """Parse a DIMACS file (or its text), checking the header counts."""
    text = path_or_text
    if isinstance(path_or_text, Path) or (isinstance(path_or_text, str)
                                          and "\n" not in path_or_text):
        text = Path(path_or_text).read_text()
    header = None
    comments: list[str] = []
    lits: list[int] = []
    clauses: list[tuple[int, ...]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            m = _HEADER.match(line)
            if m is None or header is not None:
                raise DimacsFormatError(f"line {lineno}: bad header {line!r}")
            header = (int(m.group(1)), int(m.group(2)))
            continue
        if header is None:
            raise DimacsFormatError(f"line {lineno}: clause before header")
        try:
            nums = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsFormatError(f"line {lineno}: not an integer clause") from None
        for lit in nums:
            if lit == 0:
                clauses.append(tuple(lits))
                lits = []
            elif abs(lit) > header[0]:
                raise DimacsFormatError(f"line {lineno}: variable {abs(lit)} > {header[0]}")
            else:
                lits.append(lit)
    if header is None:
        raise DimacsFormatError("missing header")
    if lits:
        raise DimacsFormatError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise DimacsFormatError(f"header says {header[1]} clauses, found {len(clauses)}")
    return CNF(header[0], clauses, tuple(comments))


def decode_assignment(model, region: Region, k: int) -> dict[Site, int]:
    """Site colors from a model (iterable of true literals, as solvers return)."""
    colors = {}
    for lit in model:
        if lit > 0:
            idx, c = divmod(lit - 1, k)
            if idx < len(region):
                colors[region.sites[idx]] = c
    return colors


def brute_force_sat(cnf: CNF, max_vars: int = 22) -> list[int] | None:
    """Exhaustive satisfiability by numpy over all assignments; small inputs only.

    Returns a model as a list of true variables, or None when unsatisfiable.
    """
    n = cnf.nvars
    if n > max_vars:
        raise ValueError(f"{n} variables is too many for exhaustive search")
    if any(len(cl) == 0 for cl in cnf.clauses):
        return None
    rows = np.arange(1 << n, dtype=np.int64)
    bits = ((rows[:, None] >> np.arange(n)) & 1).astype(bool)
    ok = np.ones(1 << n, dtype=bool)
    for cl in cnf.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for lit in cl:
            col = bits[:, abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        ok &= sat
        if not ok.any():
            return None
    row = int(np.argmax(ok))
    return [v + 1 for v in range(n) if row >> v & 1]


def solve_external(cnf: CNF, solver: str = "cadical153") -> list[int] | None:
    """Solve with python-sat (optional dependency); model or None if UNSAT."""
    try:
        from pysat.solvers import Solver
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise RuntimeError("python-sat is not installed (pip install 'artifact[sat]')") from exc
    with Solver(name=solver, bootstrap_with=[list(cl) for cl in cnf.clauses]) as s:
        if s.solve():
            return [lit for lit in s.get_model() if lit > 0]
        return None


@dataclass
class Replay:
    satisfiable: bool | None  # None: budget exhausted
    colors: list[int] | None  # per encoded site index
    stats: SearchStats

    @property
    def verdict(self) -> str:
        return {True: "SAT", False: "UNSAT", None: "UNKNOWN"}[self.satisfiable]


def replay_dimacs(cnf: CNF, k: int, budget_nodes: int = 10**8,
                  budget_secs: float = 600.0) -> Replay:
    """Decode a coloring CNF back into a graph and decide it with the search engine.

    Only clause shapes produced by :func:`encode` are understood; anything
    else raises :class:`DimacsFormatError`.  This is independent of the
    region: the graph is read off the clauses alone.
    """
    if k < 1 or cnf.nvars % k:
        raise DimacsFormatError(f"{cnf.nvars} variables do not split into {k} colors")
    n = cnf.nvars // k
    stats = SearchStats()
    site_of = lambda lit: divmod(abs(lit) - 1, k)  # noqa: E731
    neg_pairs: dict[tuple[int, int], set[int]] = defaultdict(set)
    mixed: dict[tuple[int, int], set[tuple[int, int]]] = defaultdict(set)
    alo = set()
    units = []
    for cl in cnf.clauses:
        if not cl:
            stats.note = "empty clause"
            return Replay(False, None, stats)
        if len(cl) == k and all(l > 0 for l in cl):
            sites = {site_of(l)[0] for l in cl}
            if len(sites) == 1 and sorted(site_of(l)[1] for l in cl) == list(range(k)):
                alo.add(sites.pop())
                continue
        if len(cl) == 1 and cl[0] > 0:
            units.append(site_of(cl[0]))
            continue
        if len(cl) == 2:
            (a, ca), (b, cb) = site_of(cl[0]), site_of(cl[1])
            if cl[0] < 0 and cl[1] < 0:
                if a == b:
                    continue  # at-most-one
                if ca == cb:
                    neg_pairs[min(a, b), max(a, b)].add(ca)
                    continue
            elif ca == cb and a != b:
                # record the sign carried by the lower-indexed site
                lower_positive = (cl[0] > 0) == (a < b)
                mixed[min(a, b), max(a, b)].add((ca, lower_positive))
                continue
        raise DimacsFormatError(f"clause {cl} is not part of a coloring encoding")
    if len(alo) != n:
        raise DimacsFormatError("some site lacks its at-least-one clause")

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (a, b), seen in mixed.items():
        if len(seen) != 2 * k:
            raise DimacsFormatError(f"partial equality between sites {a} and {b}")
        parent[find(b)] = find(a)
    roots = sorted({find(a) for a in range(n)})
    vid = {r: i for i, r in enumerate(roots)}
    owner = [vid[find(a)] for a in range(n)]
    adj = [0] * len(roots)
    for (a, b), cols in neg_pairs.items():
        if len(cols) != k:
            raise DimacsFormatError(f"partial conflict between sites {a} and {b}")
        ca, cb = owner[a], owner[b]
        if ca == cb:
            stats.note = "equal sites conflict"
            return Replay(False, None, stats)
        adj[ca] |= 1 << cb
        adj[cb] |= 1 << ca
    precolored = [(owner[a], c) for a, c in units]
    t0 = time.perf_counter()
    try:
        colors = color_bitgraph(adj, k, precolored, stats, budget_nodes, t0 + budget_secs)
    except _Budget:
        return Replay(None, None, stats)
    finally:
        stats.elapsed = time.perf_counter() - t0
    if colors is None:
        return Replay(False, None, stats)
    return Replay(True, [colors[owner[a]] for a in range(n)], stats)
