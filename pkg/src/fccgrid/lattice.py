"""Face-centered cubic grid in doubled integer coordinates.

A vertex ``(i, j, k)`` of the grid is stored as ``Site(x, y, z)`` with
``x = 2i``, ``y = 2j`` and ``z = k``.  Even layers hold integer ``(i, j)``,
odd layers hold half-integer ``(i, j)``, so every site satisfies
``x % 2 == y % 2 == z % 2``.

All values here are immutable; regions are finite, canonically ordered by
``(z, y, x)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

__all__ = [
    "ParityError",
    "Unreachable",
    "NotInRegion",
    "EmptyRegion",
    "Site",
    "Displacement",
    "Region",
    "NEIGHBOR_STEPS",
    "make_site",
    "p_plus",
    "displacement",
    "norm",
    "neighbors",
    "is_adjacent",
    "distance",
    "bfs_distances",
    "distance_bfs",
    "distance_in_region",
    "region_bfs",
    "displacements_within",
    "box_region",
    "slab_region",
    "ball_region",
    "pairwise_distances",
    "normalize_metric",
]


class ParityError(ValueError):
    """Coordinates do not describe a vertex of the grid."""


class Unreachable(Exception):
    """Target not reached by a breadth-first search.

    ``cap`` is the depth limit that was hit, or ``None`` when the search
    space (a finite region) was exhausted.
    """

    def __init__(self, cap: int | None, message: str | None = None):
        self.cap = cap
        if message is None:
            message = (f"distance exceeds cap={cap}" if cap is not None
                       else "target unreachable inside region")
        super().__init__(message)


class NotInRegion(LookupError):
    pass


class EmptyRegion(ValueError):
    pass


class Site(NamedTuple):
    x: int
    y: int
    z: int

    @classmethod
    def from_paper(cls, i: float, j: float, k: int) -> "Site":
        """Build a site from half-integer coordinates ``(i, j, k)``."""
        x, y = 2 * i, 2 * j
        if x != int(x) or y != int(y) or k != int(k):
            raise ParityError(f"({i}, {j}, {k}) is not on the half-integer grid")
        return make_site(int(x), int(y), int(k))

    @property
    def paper(self) -> tuple[float, float, int]:
        return (self.x / 2, self.y / 2, self.z)

    @property
    def key(self) -> tuple[int, int, int]:
        """Canonical sort key."""
        return (self.z, self.y, self.x)

    def shift(self, dx: int, dy: int, dz: int) -> "Site":
        return Site(self.x + dx, self.y + dy, self.z + dz)


class Displacement(NamedTuple):
    dx: int
    dy: int
    dz: int


def _check_parity(x: int, y: int, z: int) -> None:
    if (x - z) % 2 or (y - z) % 2:
        raise ParityError(
            f"({x}, {y}, {z}): x and y must have the parity of z in doubled coordinates")


def make_site(x: int, y: int, z: int) -> Site:
    """Validated constructor for :class:`Site`.

    >>> make_site(1, 1, 1)
    Site(x=1, y=1, z=1)
    """
    x, y, z = int(x), int(y), int(z)
    _check_parity(x, y, z)
    return Site(x, y, z)


def p_plus(t: int) -> int:
    return t if t >= 0 else 0


def displacement(u: Site, v: Site) -> Displacement:
    return Displacement(v[0] - u[0], v[1] - u[1], v[2] - u[2])


# in-layer steps (2,0,0), (0,2,0) and the eight diagonal steps between layers
NEIGHBOR_STEPS: tuple[Displacement, ...] = tuple(
    Displacement(*s) for s in [
        (-2, 0, 0), (2, 0, 0), (0, -2, 0), (0, 2, 0),
        (-1, -1, -1), (1, -1, -1), (-1, 1, -1), (1, 1, -1),
        (-1, -1, 1), (1, -1, 1), (-1, 1, 1), (1, 1, 1),
    ]
)


def neighbors(s: Site) -> list[Site]:
    x, y, z = s
    return [Site(x + a, y + b, z + c) for a, b, c in NEIGHBOR_STEPS]


def norm(dx: int, dy: int, dz: int) -> int:
    """Graph distance from the origin to the site at displacement ``(dx, dy, dz)``."""
    dx, dy, dz = abs(dx), abs(dy), abs(dz)
    # (dx - dz) and (dy - dz) are even by parity, so halving is exact
    return p_plus((dx - dz) // 2) + p_plus((dy - dz) // 2) + dz


def distance(u: Site, v: Site) -> int:
    """Closed-form graph distance between two sites."""
    return norm(v[0] - u[0], v[1] - u[1], v[2] - u[2])


def is_adjacent(u: Site, v: Site) -> bool:
    dx, dy, dz = abs(v[0] - u[0]), abs(v[1] - u[1]), abs(v[2] - u[2])
    if dz == 0:
        return (dx, dy) in ((2, 0), (0, 2))
    return dz == 1 and dx == 1 and dy == 1


def _in_layers(s: Site, layers: tuple[int, int] | None) -> bool:
    return layers is None or layers[0] <= s[2] <= layers[1]


def bfs_distances(sources: Iterable[Site], cap: int,
                  layers: tuple[int, int] | None = None) -> dict[Site, int]:
    """Multi-source BFS over the infinite grid, truncated at depth ``cap``.

    Neighbors are generated lazily.  With ``layers=(k1, k2)`` the search
    stays inside the slab of layers ``k1..k2``.
    """
    dist: dict[Site, int] = {}
    frontier = []
    for s in sources:
        s = Site(*s)
        if not _in_layers(s, layers):
            raise NotInRegion(f"{s} lies outside layers {layers}")
        if s not in dist:
            dist[s] = 0
            frontier.append(s)
    for depth in range(1, cap + 1):
        nxt = []
        for u in frontier:
            for v in neighbors(u):
                if v not in dist and _in_layers(v, layers):
                    dist[v] = depth
                    nxt.append(v)
        frontier = nxt
        if not frontier:
            break
    return dist


def distance_bfs(u: Site, v: Site, cap: int,
                 layers: tuple[int, int] | None = None) -> int:
    """Graph distance by breadth-first search; independent of :func:`distance`.

    Raises :class:`Unreachable` when the distance exceeds ``cap``.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    u, v = Site(*u), Site(*v)
    for s in (u, v):
        if not _in_layers(s, layers):
            raise NotInRegion(f"{s} lies outside layers {layers}")
    if u == v:
        return 0
    seen = {u}
    frontier = [u]
    for depth in range(1, cap + 1):
        nxt = []
        for a in frontier:
            for b in neighbors(a):
                if b == v:
                    return depth
                if b not in seen and _in_layers(b, layers):
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    raise Unreachable(cap)


def displacements_within(d: int, max_dz: int | None = None) -> list[Displacement]:
    """Nonzero displacements of norm at most ``d``, in canonical ``(dz, dy, dx)`` order."""
    zr = d if max_dz is None else min(d, max_dz)
    out = []
    for dz in range(-zr, zr + 1):
        for dy in range(-2 * d, 2 * d + 1):
            if (dy - dz) % 2:
                continue
            for dx in range(-2 * d, 2 * d + 1):
                if (dx - dz) % 2 or (dx == dy == dz == 0):
                    continue
                if norm(dx, dy, dz) <= d:
                    out.append(Displacement(dx, dy, dz))
    return out


@dataclass(frozen=True)
class Region:
    """A finite, duplicate-free, canonically ordered set of sites.

    ``provenance`` is a tuple whose first entry names how the region was
    built (``"box"``, ``"slab"``, ``"ball"``, ``"shell"``,
    ``"tetra-neighborhood"``, ``"explicit"``, ``"explicit-file"``, ...).
    """

    sites: tuple[Site, ...]
    provenance: tuple = field(default=("explicit",), compare=False)

    def __post_init__(self):
        cleaned = set()
        for s in self.sites:
            s = Site(*(int(c) for c in s))
            _check_parity(*s)
            cleaned.add(s)
        ordered = tuple(sorted(cleaned, key=lambda s: (s[2], s[1], s[0])))
        object.__setattr__(self, "sites", ordered)
        if self.provenance and self.provenance[0] == "slab":
            k1, k2 = self.provenance[1], self.provenance[2]
            bad = [s for s in ordered if not k1 <= s.z <= k2]
            if bad:
                raise ValueError(f"{bad[0]} is outside slab layers {k1}..{k2}")

    @classmethod
    def of(cls, sites: Iterable[Sequence[int]], *provenance) -> "Region":
        return cls(tuple(Site(*s) for s in sites), tuple(provenance) or ("explicit",))

    @property
    def tag(self) -> str:
        return self.provenance[0] if self.provenance else "explicit"

    @cached_property
    def index(self) -> dict[Site, int]:
        return {s: n for n, s in enumerate(self.sites)}

    @cached_property
    def coords(self) -> np.ndarray:
        return np.array(self.sites, dtype=np.int64).reshape(-1, 3)

    @cached_property
    def layers(self) -> tuple[int, int] | None:
        if not self.sites:
            return None
        return (self.sites[0].z, self.sites[-1].z)

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self) -> Iterator[Site]:
        return iter(self.sites)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.index

    def __or__(self, other: "Region") -> "Region":
        return Region(self.sites + tuple(other), ("explicit",))

    def __sub__(self, other) -> "Region":
        drop = set(Site(*s) for s in other)
        return Region(tuple(s for s in self.sites if s not in drop), ("explicit",))

    def translate(self, dx: int, dy: int, dz: int) -> "Region":
        return Region(tuple(s.shift(dx, dy, dz) for s in self.sites), self.provenance)


def region_bfs(region: Region, source: Site, cap: int | None = None) -> dict[Site, int]:
    """BFS distances from ``source`` inside the subgraph induced by ``region``."""
    source = Site(*source)
    if source not in region:
        raise NotInRegion(f"{source} is not in the region")
    members = region.index
    dist = {source: 0}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        da = dist[a]
        if cap is not None and da >= cap:
            continue
        for b in neighbors(a):
            if b in members and b not in dist:
                dist[b] = da + 1
                queue.append(b)
    return dist


def distance_in_region(u: Site, v: Site, region: Region) -> int:
    """Distance between ``u`` and ``v`` in the subgraph induced by ``region``."""
    u, v = Site(*u), Site(*v)
    for s in (u, v):
        if s not in region:
            raise NotInRegion(f"{s} is not in the region")
    dist = region_bfs(region, u)
    if v not in dist:
        raise Unreachable(None)
    return dist[v]


def normalize_metric(metric: str) -> str:
    m = metric.lower()
    if m in ("ambient", "f", "grid"):
        return "ambient"
    if m in ("internal", "region-internal", "region"):
        return "internal"
    raise ValueError(f"unknown metric {metric!r}")


def pairwise_distances(region: Region, metric: str = "ambient",
                       cap: int | None = None) -> np.ndarray:
    """Distance matrix of a region.

    Under the internal metric, pairs farther apart than ``cap`` (or
    disconnected pairs) get ``-1``.
    """
    metric = normalize_metric(metric)
    n = len(region)
    if metric == "ambient":
        c = region.coords
        dx = np.abs(c[:, None, 0] - c[None, :, 0])
        dy = np.abs(c[:, None, 1] - c[None, :, 1])
        dz = np.abs(c[:, None, 2] - c[None, :, 2])
        return (np.maximum((dx - dz) // 2, 0) + np.maximum((dy - dz) // 2, 0) + dz)
    out = np.full((n, n), -1, dtype=np.int64)
    idx = region.index
    for a, s in enumerate(region.sites):
        for t, dd in region_bfs(region, s, cap).items():
            out[a, idx[t]] = dd
    return out


def box_region(xlo: int, xhi: int, ylo: int, yhi: int, zlo: int, zhi: int) -> Region:
    """All sites with ``xlo <= x <= xhi`` etc. (inclusive, doubled coordinates)."""
    sites = [Site(x, y, z)
             for z in range(zlo, zhi + 1)
             for y in range(ylo, yhi + 1) if (y - z) % 2 == 0
             for x in range(xlo, xhi + 1) if (x - z) % 2 == 0]
    if not sites:
        raise EmptyRegion(f"box {(xlo, xhi, ylo, yhi, zlo, zhi)} contains no site")
    return Region(tuple(sites), ("box", (xlo, xhi, ylo, yhi, zlo, zhi)))


def slab_region(k1: int, k2: int, extent: int) -> Region:
    """Window of the slab of layers ``k1..k2`` with ``|x|, |y| <= extent``."""
    if k1 > k2 or extent < 0:
        raise EmptyRegion(f"void slab bounds k1={k1}, k2={k2}, extent={extent}")
    box = box_region(-extent, extent, -extent, extent, k1, k2)
    return Region(box.sites, ("slab", k1, k2, extent))


def ball_region(center: Site, r: int) -> Region:
    """Closed ball of radius ``r`` around ``center`` (closed-form membership)."""
    if r < 0:
        raise EmptyRegion("negative radius")
    cx, cy, cz = make_site(*center)
    sites = [Site(cx + dx, cy + dy, cz + dz) for dx, dy, dz in displacements_within(r)]
    sites.append(Site(cx, cy, cz))
    return Region(tuple(sites), ("ball", Site(cx, cy, cz), r))
