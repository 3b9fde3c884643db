"""Machine-checkable fact scripts.

A fact script is a JSON document listing distance, size, diameter, clique
and membership assertions about named points and sets of a graph (``F``,
``F01`` or ``F02``).  Example::

    {
      "title": "tetra neighborhood",
      "graph": "F",
      "coords": "paper",
      "points": {"o": [0, 0, 0]},
      "sets": {"T": {"tetra": [[0, 0, 0], [1, 0, 0], [0.5, 0.5, 1], [0.5, -0.5, 1]]}},
      "assertions": [
        {"op": "size", "set": "T", "eq": 28},
        {"op": "diameter", "set": "T", "eq": 3},
        {"op": "within", "u": "o", "set": "T", "d": 1, "count": 13}
      ]
    }

Set expressions: a set name, ``{"sites": [...]}``, ``{"tetra": [4 points]}``,
``{"ball": {"center": p, "r": n}}``, ``{"near": {"points": [...], "d": n}}``,
``{"beyond": {"point": p, "set": S, "d": n}}`` (members of ``S`` farther
than ``n`` from ``p``), ``{"union": [...]}``, ``{"intersect": [...]}`` and
``{"minus": [S, T, ...]}``.  Points are names or coordinate triples.

Distances are graph distances: closed form in ``F``, breadth-first search
confined to the slab in ``F01``/``F02``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .balls import GRAPH_LAYERS, tetra_neighborhood
from .lattice import (
    ParityError,
    Region,
    Site,
    bfs_distances,
    distance,
    make_site,
    region_bfs,
)

__all__ = ["MalformedScript", "FactResult", "FactReport", "load_fact_script", "run_fact_script"]

_OPS = {"dist", "size", "diameter", "is_clique", "within", "member", "subset", "same_set"}
_COMPARATORS = {"eq": lambda a, b: a == b, "le": lambda a, b: a <= b, "ge": lambda a, b: a >= b}


class MalformedScript(ValueError):
    pass


@dataclass
class FactResult:
    index: int
    op: str
    claim: str
    expected: Any
    computed: Any
    passed: bool

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        text = f" {self.claim}" if self.claim else ""
        return (f"[{mark}] #{self.index} {self.op}:{text} "
                f"(expected {self.expected}, computed {self.computed})")


@dataclass
class FactReport:
    title: str
    graph: str
    results: list[FactResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[FactResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        n = len(self.results)
        if self.passed:
            return f"ALL PASS ({n} assertions)"
        return f"FAILED {len(self.failures)} of {n} assertions"


class _Evaluator:
    def __init__(self, script: dict):
        if not isinstance(script, dict):
            raise MalformedScript("a fact script is a JSON object")
        self.graph = script.get("graph", "F")
        if self.graph not in GRAPH_LAYERS:
            raise MalformedScript(f"unknown graph {self.graph!r}")
        self.layers = GRAPH_LAYERS[self.graph]
        self.coords = script.get("coords", "paper")
        if self.coords not in ("paper", "doubled"):
            raise MalformedScript(f"unknown coordinate convention {self.coords!r}")
        self._bfs_cache: dict[tuple[Site, int], dict] = {}
        self.points = {name: self.point(p) for name, p in script.get("points", {}).items()}
        self.sets: dict[str, Region] = {}
        self._set_defs = script.get("sets", {})
        for name in self._set_defs:
            self.named_set(name)

    # -- points and distances ---------------------------------------------
    def point(self, p) -> Site:
        if isinstance(p, str):
            try:
                return self.points[p]
            except (KeyError, AttributeError):
                raise MalformedScript(f"unknown point {p!r}") from None
        if not isinstance(p, (list, tuple)) or len(p) != 3:
            raise MalformedScript(f"bad point {p!r}")
        try:
            s = Site.from_paper(*p) if self.coords == "paper" else make_site(*p)
        except (ParityError, TypeError) as exc:
            raise MalformedScript(f"bad point {p!r}: {exc}") from None
        if self.layers is not None and not self.layers[0] <= s.z <= self.layers[1]:
            raise MalformedScript(f"point {p!r} is outside graph {self.graph}")
        return s

    def ball(self, center: Site, r: int) -> dict[Site, int]:
        key = (center, r)
        if key not in self._bfs_cache:
            if self.layers is None:
                from .lattice import ball_region
                self._bfs_cache[key] = {s: distance(center, s) for s in ball_region(center, r)}
            else:
                self._bfs_cache[key] = bfs_distances([center], r, self.layers)
        return self._bfs_cache[key]

    def dist(self, u: Site, v: Site) -> int:
        if self.layers is None:
            return distance(u, v)
        r = max(distance(u, v), 1)
        while True:
            found = self.ball(u, r).get(v)
            if found is not None:
                return found
            r *= 2

    # -- sets --------------------------------------------------------------
    def named_set(self, name: str) -> Region:
        if name in self.sets:
            return self.sets[name]
        if name not in self._set_defs:
            raise MalformedScript(f"unknown set {name!r}")
        self.sets[name] = None  # cycle guard
        region = self.set_expr(self._set_defs[name])
        self.sets[name] = region
        return region

    def set_expr(self, e) -> Region:
        if isinstance(e, str):
            region = self.named_set(e)
            if region is None:
                raise MalformedScript(f"set {e!r} is defined in terms of itself")
            return region
        if not isinstance(e, dict) or len(e) != 1:
            raise MalformedScript(f"bad set expression {e!r}")
        (kind, arg), = e.items()
        if kind == "sites":
            return Region(tuple(self.point(p) for p in arg))
        if kind == "tetra":
            if len(arg) != 4:
                raise MalformedScript("tetra takes four points")
            return tetra_neighborhood(*(self.point(p) for p in arg), layers=self.layers)
        if kind == "ball":
            return Region(tuple(self.ball(self.point(arg["center"]), int(arg["r"]))))
        if kind == "near":
            sites = set()
            for p in arg["points"]:
                sites.update(self.ball(self.point(p), int(arg["d"])))
            return Region(tuple(sites))
        if kind == "beyond":
            p, d = self.point(arg["point"]), int(arg["d"])
            return Region(tuple(s for s in self.set_expr(arg["set"]) if self.dist(p, s) > d))
        if kind in ("union", "intersect", "minus"):
            parts = [self.set_expr(x) for x in arg]
            if not parts:
                raise MalformedScript(f"{kind} needs operands")
            acc = set(parts[0])
            for part in parts[1:]:
                if kind == "union":
                    acc |= set(part)
                elif kind == "intersect":
                    acc &= set(part)
                else:
                    acc -= set(part)
            return Region(tuple(acc))
        raise MalformedScript(f"unknown set expression {kind!r}")

    # -- assertions --------------------------------------------------------
    def diameter(self, region: Region, metric: str) -> int:
        best = 0
        sites = region.sites
        if metric == "induced":
            for s in sites:
                reach = region_bfs(region, s)
                if len(reach) < len(region):
                    return -1
                best = max(best, max(reach.values()))
            return best
        for a, s in enumerate(sites):
            for t in sites[a + 1:]:
                best = max(best, self.dist(s, t))
        return best

    def check(self, index: int, a: dict) -> FactResult:
        if not isinstance(a, dict) or a.get("op") not in _OPS:
            raise MalformedScript(f"assertion #{index}: unknown op in {a!r}")
        op = a["op"]
        claim = a.get("claim", "")
        try:
            if op == "dist":
                (cmp, expected), = [(c, a[c]) for c in _COMPARATORS if c in a]
                computed = self.dist(self.point(a["u"]), self.point(a["v"]))
                passed = _COMPARATORS[cmp](computed, expected)
                expected = f"{cmp} {expected}"
            elif op == "size":
                expected = a["eq"]
                computed = len(self.set_expr(a["set"]))
                passed = computed == expected
            elif op == "diameter":
                metric = a.get("metric", "graph")
                if metric not in ("graph", "induced"):
                    raise MalformedScript(f"assertion #{index}: unknown metric {metric!r}")
                expected = a["eq"]
                computed = self.diameter(self.set_expr(a["set"]), metric)
                passed = computed == expected
            elif op == "is_clique":
                expected = a.get("expect", True)
                region, d = self.set_expr(a["set"]), int(a["d"])
                computed = self.diameter(region, "graph") <= d
                passed = computed == expected
            elif op == "within":
                u, d = self.point(a["u"]), int(a["d"])
                expected = a["count"]
                computed = sum(1 for s in self.set_expr(a["set"]) if self.dist(u, s) <= d)
                passed = computed == expected
            elif op == "member":
                expected = a.get("expect", True)
                computed = self.point(a["u"]) in self.set_expr(a["set"])
                passed = computed == expected
            elif op == "subset":
                extra = set(self.set_expr(a["set"])) - set(self.set_expr(a["of"]))
                expected, computed = "no outside members", _show(extra) or "none"
                passed = not extra
            else:  # same_set
                left, right = set(self.set_expr(a["set"])), set(self.set_expr(a["as"]))
                expected = "equal sets"
                computed = ("equal" if left == right else
                            f"only left {_show(left - right)}, only right {_show(right - left)}")
                passed = left == right
        except (KeyError, ValueError, TypeError) as exc:
            if isinstance(exc, MalformedScript):
                raise
            raise MalformedScript(f"assertion #{index}: {exc!r}") from None
        return FactResult(index, op, claim, expected, computed, bool(passed))


def _show(sites) -> str:
    return ", ".join(str(s.paper) for s in sorted(sites, key=lambda s: s.key))


def load_fact_script(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedScript(f"{path}: {exc}") from None


def run_fact_script(script) -> FactReport:
    """Evaluate every assertion of a script (a dict, or a path to a JSON file)."""
    if isinstance(script, (str, Path)):
        script = load_fact_script(script)
    ev = _Evaluator(script)
    assertions = script.get("assertions")
    if not isinstance(assertions, list):
        raise MalformedScript("script has no assertion list")
    report = FactReport(script.get("title", ""), ev.graph)
    for n, a in enumerate(assertions):
        report.results.append(ev.check(n, a))
    return report
