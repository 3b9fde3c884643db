"""Exact k-colorability of finite windows of a power of the grid.

The engine is a complete backtracking search: an anchor clique is
pre-colored ``0..|Q|-1``, then the most constrained vertex (fewest colors
left) is branched on, with forward checking and the usual "one fresh color"
symmetry cut.  Verdicts are ``colorable`` (with a witness),
``not-colorable`` (tree exhausted) or ``inconclusive`` (budget hit).
"""
from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .colorings import ColoringSpec, explicit
from .lattice import Region, Site, normalize_metric, pairwise_distances

__all__ = [
    "Equal",
    "Distinct",
    "InvalidAnchor",
    "SearchInconclusive",
    "SearchProblem",
    "SearchStats",
    "Certificate",
    "ConflictGraph",
    "conflict_graph",
    "greedy_clique",
    "k_colorable",
    "color_bitgraph",
    "ForcedResult",
    "forced_equalities",
]

DEFAULT_BUDGET_NODES = 10**8
DEFAULT_BUDGET_SECS = 600.0


class Equal(NamedTuple):
    u: Site
    v: Site


class Distinct(NamedTuple):
    u: Site
    v: Site


class InvalidAnchor(ValueError):
    pass


class SearchInconclusive(RuntimeError):
    def __init__(self, certificate: "Certificate"):
        self.certificate = certificate
        super().__init__(f"search budget exhausted: {certificate.stats}")


@dataclass(frozen=True)
class SearchProblem:
    region: Region
    d: int
    k: int
    metric: str = "ambient"
    anchor: Region | str | None = "auto"
    extra_constraints: Sequence[Equal | Distinct] = ()
    budget_nodes: int = DEFAULT_BUDGET_NODES
    budget_secs: float = DEFAULT_BUDGET_SECS


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    elapsed: float = 0.0
    note: str = ""


@dataclass
class Certificate:
    verdict: str  # "colorable" | "not-colorable" | "inconclusive"
    stats: SearchStats
    witness: ColoringSpec | None = None
    anchor: tuple[Site, ...] = ()

    @property
    def colorable(self) -> bool:
        return self.verdict == "colorable"


@dataclass
class ConflictGraph:
    """d-power conflicts of a region, after merging ``Equal`` pairs.

    ``classes[c]`` lists the region indices merged into vertex ``c``;
    ``adj[c]`` is a bitmask over vertices.  ``contradiction`` is set when an
    ``Equal`` pair is itself in conflict.
    """

    region: Region
    classes: list[list[int]]
    owner: list[int]
    adj: list[int]
    site_edges: list[tuple[int, int]] = field(repr=False)
    contradiction: str = ""

    @property
    def n(self) -> int:
        return len(self.classes)


def _site_index(region: Region, s) -> int:
    try:
        return region.index[Site(*s)]
    except KeyError:
        raise ValueError(f"{tuple(s)} is not in the region") from None


def conflict_graph(region: Region, d: int, metric: str = "ambient",
                   extra_constraints: Sequence = ()) -> ConflictGraph:
    n = len(region)
    dm = pairwise_distances(region, metric, cap=d)
    near = (dm >= 0) & (dm <= d)
    np.fill_diagonal(near, False)
    ii, jj = np.nonzero(np.triu(near))
    site_edges = list(zip(ii.tolist(), jj.tolist()))

    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    equal_pairs, distinct_pairs = [], []
    for c in extra_constraints:
        if not isinstance(c, (Equal, Distinct)):
            raise TypeError(f"unknown constraint {c!r}")
        a, b = _site_index(region, c[0]), _site_index(region, c[1])
        (equal_pairs if isinstance(c, Equal) else distinct_pairs).append((a, b))
    for a, b in equal_pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    roots = sorted({find(a) for a in range(n)})
    vid = {r: c for c, r in enumerate(roots)}
    owner = [vid[find(a)] for a in range(n)]
    classes = [[] for _ in roots]
    for a in range(n):
        classes[owner[a]].append(a)

    adj = [0] * len(roots)
    contradiction = ""
    for a, b in site_edges + distinct_pairs:
        ca, cb = owner[a], owner[b]
        if ca == cb:
            contradiction = (f"{region.sites[a]} and {region.sites[b]} must share a color "
                             "but conflict")
            continue
        adj[ca] |= 1 << cb
        adj[cb] |= 1 << ca
    return ConflictGraph(region, classes, owner, adj, site_edges, contradiction)


def greedy_clique(region: Region, d: int, metric: str = "ambient") -> Region:
    """Maximal clique of the ``d``-th power, grown in canonical site order."""
    g = conflict_graph(region, d, metric)
    chosen = []
    common = -1
    for v in range(g.n):
        if common >> v & 1:
            chosen.append(v)
            common &= g.adj[v]
    return Region(tuple(region.sites[v] for v in chosen), ("clique", "greedy", d))


def _best_clique(g: ConflictGraph) -> list[int]:
    """Largest of the greedy cliques started from each vertex (deterministic)."""
    deg = [bin(a).count("1") for a in g.adj]
    best: list[int] = []
    for start in range(g.n):
        clique, cand = [start], g.adj[start]
        while cand:
            # most connected candidate, lowest index on ties
            pick, pick_deg = -1, -1
            c = cand
            while c:
                low = c & -c
                v = low.bit_length() - 1
                c ^= low
                dv = bin(g.adj[v] & cand).count("1")
                if dv > pick_deg:
                    pick, pick_deg = v, dv
            clique.append(pick)
            cand &= g.adj[pick]
        if len(clique) > len(best):
            best = sorted(clique)
        if len(best) >= max(deg, default=0) + 1:
            break  # no clique is larger than max degree + 1
    return best


class _Budget(Exception):
    pass


def _anchor_vertices(problem: SearchProblem, g: ConflictGraph) -> list[int]:
    anchor = problem.anchor
    if anchor is None:
        return []
    if isinstance(anchor, str):
        if anchor != "auto":
            raise InvalidAnchor(f"unknown anchor mode {anchor!r}")
        return _best_clique(g)
    verts = []
    for s in anchor:
        if s not in problem.region:
            raise InvalidAnchor(f"anchor site {tuple(s)} is not in the region")
        verts.append(g.owner[problem.region.index[Site(*s)]])
    if len(set(verts)) != len(verts):
        raise InvalidAnchor("anchor sites are merged by equality constraints")
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if not g.adj[a] >> b & 1:
                raise InvalidAnchor(
                    f"anchor is not a clique: {problem.region.sites[g.classes[a][0]]} "
                    f"and {problem.region.sites[g.classes[b][0]]}")
    return verts


def k_colorable(problem: SearchProblem) -> Certificate:
    """Decide whether the region's ``d``-th power has a proper ``k``-coloring."""
    t0 = time.perf_counter()
    metric = normalize_metric(problem.metric)
    region, k = problem.region, problem.k
    g = conflict_graph(region, problem.d, metric, problem.extra_constraints)
    stats = SearchStats()

    def done(verdict, colors=None, note="", anchor=()):
        stats.elapsed = time.perf_counter() - t0
        stats.note = note
        witness = None
        if colors is not None:
            mapping = {region.sites[a]: colors[g.owner[a]] for a in range(len(region))}
            witness = explicit(mapping)
        return Certificate(verdict, stats, witness,
                           tuple(region.sites[g.classes[v][0]] for v in anchor))

    if g.contradiction:
        return done("not-colorable", note=g.contradiction)
    if g.n == 0:
        return done("colorable", colors=[], note="empty region")
    if k < 1:
        return done("not-colorable", note="no colors available")

    anchor = _anchor_vertices(problem, g)
    if len(anchor) > k:
        return done("not-colorable", note=f"anchor clique of size {len(anchor)} > k={k}",
                    anchor=anchor)

    try:
        colors = color_bitgraph(g.adj, k, [(v, c) for c, v in enumerate(anchor)], stats,
                                problem.budget_nodes, t0 + problem.budget_secs)
    except _Budget:
        return done("inconclusive", note="budget exhausted", anchor=anchor)
    if colors is None:
        return done("not-colorable", note=stats.note or "search tree exhausted", anchor=anchor)
    return done("colorable", colors=colors, anchor=anchor)


def color_bitgraph(adj: list[int], k: int, precolored, stats: SearchStats | None = None,
                   budget_nodes: int = DEFAULT_BUDGET_NODES,
                   deadline: float | None = None) -> list[int] | None:
    """Backtracking k-coloring of a graph given as adjacency bitmasks.

    ``precolored`` lists ``(vertex, color)`` pairs.  The fresh-color symmetry
    cut is applied only when the fixed colors are exactly ``0..m-1``.
    Returns a color list, or None when no coloring extends the precoloring;
    raises ``_Budget`` when a budget runs out.
    """
    stats = stats if stats is not None else SearchStats()
    if deadline is None:
        deadline = time.perf_counter() + DEFAULT_BUDGET_SECS
    n = len(adj)
    full = (1 << k) - 1
    colors = [-1] * n
    domain = [full] * n
    for v, c in precolored:
        if not 0 <= c < k or colors[v] not in (-1, c):
            stats.note = "precoloring is inconsistent"
            return None
        colors[v] = c
    for v, c in precolored:
        rest = adj[v]
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            if colors[w] == c:
                stats.note = "precoloring is not proper"
                return None
            domain[w] &= ~(1 << c)
            if colors[w] < 0 and domain[w] == 0:
                stats.note = "precoloring leaves a vertex without colors"
                return None
    fixed = sorted({c for _, c in precolored})
    used = len(fixed) if fixed == list(range(len(fixed))) else k
    uncolored = {v for v in range(n) if colors[v] < 0}
    deg = [bin(a).count("1") for a in adj]

    def pick_vertex() -> int:
        best, key = -1, None
        for v in uncolored:
            kv = (bin(domain[v]).count("1"), -deg[v], v)
            if key is None or kv < key:
                best, key = v, kv
        return best

    def solve(depth: int) -> bool:
        nonlocal used
        if not uncolored:
            return True
        if depth > stats.max_depth:
            stats.max_depth = depth
        v = pick_vertex()
        options = domain[v]
        # colors >= used are interchangeable: try only the first of them
        if used < k:
            options &= (1 << (used + 1)) - 1
        while options:
            low = options & -options
            c = low.bit_length() - 1
            options ^= low
            stats.nodes += 1
            if stats.nodes >= budget_nodes or (stats.nodes & 1023 == 0
                                               and time.perf_counter() > deadline):
                raise _Budget
            changed = []
            ok = True
            rest = adj[v] & ~(1 << v)
            while rest:
                lw = rest & -rest
                w = lw.bit_length() - 1
                rest ^= lw
                if colors[w] < 0 and domain[w] & low:
                    domain[w] ^= low
                    changed.append(w)
                    if domain[w] == 0:
                        ok = False
                        break
            if ok:
                colors[v] = c
                uncolored.discard(v)
                prev_used = used
                if c == used:
                    used += 1
                if solve(depth + 1):
                    return True
                used = prev_used
                colors[v] = -1
                uncolored.add(v)
            for w in changed:
                domain[w] |= low
        return False

    limit = sys.getrecursionlimit()
    if limit < n + 200:
        sys.setrecursionlimit(n + 200)
    try:
        found = solve(0)
    finally:
        sys.setrecursionlimit(limit)
    return colors if found else None


@dataclass
class ForcedResult:
    holds: bool
    certificate: Certificate

    @property
    def counterexample(self) -> ColoringSpec | None:
        return None if self.holds else self.certificate.witness


def forced_equalities(region: Region, d: int, k: int, u: Site, candidates,
                      metric: str = "ambient", **budget) -> ForcedResult:
    """Does every proper ``k``-coloring give ``u`` the color of some candidate?

    Decided by searching for a coloring in which ``u`` differs from all of
    them; ``holds`` iff there is none.  Raises :class:`SearchInconclusive`
    on budget exhaustion.
    """
    u = Site(*u)
    constraints = [Distinct(u, Site(*c)) for c in candidates]
    problem = SearchProblem(region, d, k, metric, "auto", constraints, **budget)
    cert = k_colorable(problem)
    if cert.verdict == "inconclusive":
        raise SearchInconclusive(cert)
    return ForcedResult(cert.verdict == "not-colorable", cert)
