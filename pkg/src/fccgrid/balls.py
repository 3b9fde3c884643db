"""Extremal sets of the grid and the clique lower bounds they give.

Sets are always enumerated; the closed-form counts live next to them only
so that tests can compare the two.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .lattice import (
    NotInRegion,
    Region,
    Site,
    Unreachable,
    bfs_distances,
    distance,
    is_adjacent,
    make_site,
    neighbors,
    normalize_metric,
    pairwise_distances,
)

__all__ = [
    "SHELL_KINDS",
    "GRAPH_LAYERS",
    "NonCliqueWarning",
    "CliqueBound",
    "tetra_D0",
    "shell",
    "shell_union",
    "b_ball",
    "tetra_neighborhood",
    "diameter",
    "graph_distance",
    "is_clique",
    "clique_lower_bound",
    "ball_size",
    "shell_size",
    "b_ball_size",
    "even_bound",
    "odd_bound",
    "slab_clique_size",
    "published_slab02_lower",
]

ORIGIN = Site(0, 0, 0)
# doubled coordinates of (0,0,0), (1,0,0), (.5,.5,1), (.5,-.5,1)
D0_SITES = (Site(0, 0, 0), Site(2, 0, 0), Site(1, 1, 1), Site(1, -1, 1))
SLAB02_CENTER = Site(1, 1, 1)

# graph name -> layer restriction (None: the whole grid)
GRAPH_LAYERS: dict[str, tuple[int, int] | None] = {"F": None, "F01": (0, 1), "F02": (0, 2)}

# kind -> (sources, layers, description)
SHELL_KINDS = {
    "A_full": ((ORIGIN,), None, "sphere around a vertex"),
    "D_full": (D0_SITES, None, "shell around the unit tetrahedron"),
    "A_slab01": ((ORIGIN,), (0, 1), "sphere around a vertex of the two-layer slab"),
    "D_slab01": (D0_SITES, (0, 1), "shell around the tetrahedron in the two-layer slab"),
    "A_slab02": ((SLAB02_CENTER,), (0, 2), "sphere around a middle-layer vertex of the three-layer slab"),
    "B_slab02": (D0_SITES, (0, 2), "shell around the tetrahedron in the three-layer slab"),
}


class NonCliqueWarning(UserWarning):
    pass


def tetra_D0() -> Region:
    """The unit tetrahedron ``{(0,0,0), (1,0,0), (.5,.5,1), (.5,-.5,1)}``."""
    return Region(D0_SITES, ("tetra", "D0"))


def _min_distance_to(sources, r: int) -> dict[Site, int]:
    # closed-form filter over the bounding box of radius r around the sources
    xs = [s.x for s in sources]
    ys = [s.y for s in sources]
    zs = [s.z for s in sources]
    out = {}
    for z in range(min(zs) - r, max(zs) + r + 1):
        for y in range(min(ys) - 2 * r, max(ys) + 2 * r + 1):
            if (y - z) % 2:
                continue
            for x in range(min(xs) - 2 * r, max(xs) + 2 * r + 1):
                if (x - z) % 2:
                    continue
                s = Site(x, y, z)
                m = min(distance(s, c) for c in sources)
                if m <= r:
                    out[s] = m
    return out


def _shell_distances(kind: str, level: int) -> dict[Site, int]:
    try:
        sources, layers, _ = SHELL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown shell kind {kind!r}") from None
    if level < 0:
        raise ValueError("level must be nonnegative")
    if layers is None:
        return _min_distance_to(sources, level)
    # slab shells use distance inside the slab
    return bfs_distances(sources, level, layers)


def shell(kind: str, level: int) -> Region:
    """Sites whose distance to the kind's source set is exactly ``level``."""
    dist = _shell_distances(kind, level)
    return Region(tuple(s for s, dd in dist.items() if dd == level), ("shell", kind, level))


def shell_union(kind: str, level: int) -> Region:
    """Union of the shells ``0..level`` of a kind (a ball around its sources)."""
    dist = _shell_distances(kind, level)
    return Region(tuple(dist), ("ball", kind, level))


def b_ball(level: int) -> Region:
    """Union of the tetrahedral shells ``D_0 .. D_level``."""
    return Region(shell_union("D_full", level).sites, ("b_ball", level))


def tetra_neighborhood(u1: Site, u2: Site, u3: Site, u4: Site,
                       layers: tuple[int, int] | None = None) -> Region:
    """Union of the closed neighborhoods of four sites.

    For a 4-clique the result is a translate/rotation of ``b_ball(1)``.
    Non-clique input is accepted but flagged with :class:`NonCliqueWarning`
    and a ``"non-clique"`` provenance marker.  ``layers`` restricts the
    neighborhood to a slab.
    """
    quad = [make_site(*u) for u in (u1, u2, u3, u4)]
    clique = all(is_adjacent(a, b) for a, b in combinations(quad, 2))
    if not clique:
        warnings.warn(f"{quad} do not induce K4", NonCliqueWarning, stacklevel=2)
    sites = set(quad)
    for u in quad:
        sites.update(neighbors(u))
    if layers is not None:
        sites = {s for s in sites if layers[0] <= s.z <= layers[1]}
    return Region(tuple(sites), ("tetra-neighborhood", tuple(quad),
                                 "clique" if clique else "non-clique"))


def graph_distance(u: Site, v: Site, graph: str = "F") -> int:
    """Distance in ``F`` (closed form) or in a slab graph ``F01``/``F02`` (BFS)."""
    layers = GRAPH_LAYERS[graph]
    if layers is None:
        return distance(u, v)
    for s in (u, v):
        if not layers[0] <= s[2] <= layers[1]:
            raise NotInRegion(f"{s} lies outside layers {layers}")
    # the slab distance is at least the ambient one; grow the cap until found
    cap = max(distance(u, v), 1)
    while True:
        dist = bfs_distances([u], cap, layers)
        if tuple(v) in dist:
            return dist[Site(*v)]
        cap *= 2


def _graph_distance_matrix(region: Region, graph: str, cap: int) -> np.ndarray:
    layers = GRAPH_LAYERS[graph]
    if layers is None:
        return pairwise_distances(region, "ambient")
    n = len(region)
    out = np.full((n, n), cap + 1, dtype=np.int64)
    idx = region.index
    for a, s in enumerate(region.sites):
        for t, dd in bfs_distances([s], cap, layers).items():
            b = idx.get(t)
            if b is not None:
                out[a, b] = dd
    return out


def diameter(region: Region, metric: str = "ambient") -> int:
    """Largest pairwise distance; ``metric="internal"`` measures inside the region."""
    if len(region) == 0:
        raise ValueError("diameter of an empty region")
    metric = normalize_metric(metric)
    dm = pairwise_distances(region, metric)
    if metric == "internal" and (dm < 0).any():
        raise Unreachable(None, "region is disconnected")
    return int(dm.max())


def is_clique(region: Region, d: int, graph: str = "F") -> bool:
    """True when all pairwise distances (in ``graph``) are at most ``d``."""
    return bool((_graph_distance_matrix(region, graph, d) <= d).all())


# closed forms -------------------------------------------------------------

def ball_size(level: int) -> int:
    return (2 * level + 1) * (5 * level * level + 5 * level + 3) // 3


def shell_size(level: int) -> int:
    return 10 * level * level + 10 * level + 4


def b_ball_size(level: int) -> Fraction:
    n = Fraction(level)
    return Fraction(10, 3) * n**3 + 10 * n**2 + Fraction(32, 3) * n + 4


def even_bound(d: int) -> Fraction:
    n = Fraction(d)
    return Fraction(5, 12) * n**3 + Fraction(5, 4) * n**2 + Fraction(11, 6) * n + 1


def odd_bound(d: int) -> Fraction:
    n = Fraction(d)
    return Fraction(5, 12) * n**3 + Fraction(5, 4) * n**2 + Fraction(19, 12) * n + Fraction(3, 4)


def slab_clique_size(graph: str, d: int) -> int:
    """Closed-form size of the ball/tetra-ball witness in a slab graph."""
    if graph == "F01":
        return (d + 1) ** 2
    if graph == "F02":
        if d % 2 == 0:
            ell = d // 2
            return 6 * ell * ell + 6 * ell + 1
        ell = (d - 1) // 2
        return 6 * ell * ell + 12 * ell + 4
    raise ValueError(graph)


def published_slab02_lower(d: int) -> int:
    """The printed lower-bound expression ``3 * floor((d+1)^2 / 2) - 2``."""
    return 3 * ((d + 1) ** 2 // 2) - 2


@dataclass(frozen=True)
class CliqueBound:
    d: int
    graph: str
    size: int
    witness: Region
    formula: Fraction

    @property
    def matches_formula(self) -> bool:
        return self.size == self.formula


_WITNESS_KIND = {
    ("F", 0): "A_full", ("F", 1): "D_full",
    ("F01", 0): "A_slab01", ("F01", 1): "D_slab01",
    ("F02", 0): "A_slab02", ("F02", 1): "B_slab02",
}


def clique_lower_bound(graph: str, d: int) -> CliqueBound:
    """Clique of the ``d``-th power of ``graph`` built from balls or tetra-balls.

    Even ``d`` uses a ball of radius ``d/2`` around a vertex, odd ``d`` the
    union of tetrahedral shells up to ``(d-1)/2``.  The witness is checked
    to be a clique before returning.
    """
    if graph not in GRAPH_LAYERS:
        raise ValueError(f"unknown graph {graph!r}")
    if d < 1:
        raise ValueError("d must be positive")
    kind = _WITNESS_KIND[(graph, d % 2)]
    witness = shell_union(kind, d // 2)
    if not is_clique(witness, d, graph):
        raise AssertionError(f"{kind} witness is not a clique of the {d}-th power")
    if graph == "F":
        formula = even_bound(d) if d % 2 == 0 else odd_bound(d)
    else:
        formula = Fraction(slab_clique_size(graph, d))
    witness = Region(witness.sites, ("clique", graph, d, kind))
    return CliqueBound(d=d, graph=graph, size=len(witness), witness=witness, formula=formula)
