"""Distance colorings of the grid and their verification.

Every built-in construction is periodic.  Periodicity is expressed in
lattice coordinates ``n = ((x - z)/2, (y - z)/2, z)``, in which the sites are
exactly ``Z^3``.  Each construction carries a lower-triangular basis of
color-preserving translations, so one representative per orbit is a box
``[0, h1) x [0, h2) x [0, h3)`` in ``n``.  Checking every representative
against its whole ``d``-ball settles validity on the infinite grid.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Mapping

from .lattice import (
    Displacement,
    Region,
    Site,
    displacements_within,
    norm,
    normalize_metric,
    region_bfs,
)

__all__ = [
    "OutOfSlab",
    "NoMultiplier",
    "NotTranslationCovariant",
    "NonPeriodic",
    "LinearForm",
    "SquareMultiplier",
    "Violation",
    "VerifyResult",
    "ColoringSpec",
    "CONSTRUCTIONS",
    "POWER2_FORM",
    "POWER3_READINGS",
    "power2",
    "power3",
    "slab_general",
    "slab01",
    "slab02",
    "explicit",
    "construction",
    "color_power2",
    "color_power3",
    "resolve_power3_reading",
    "square_multiplier",
    "color_slab_general",
    "color_slab01",
    "color_slab02",
    "verify_displacement",
    "verify_window",
    "fundamental_window",
    "window_sources",
    "verify_periodic",
    "colors_used",
]


class OutOfSlab(ValueError):
    pass


class NoMultiplier(ArithmeticError):
    pass


class NotTranslationCovariant(TypeError):
    pass


class NonPeriodic(TypeError):
    pass


@dataclass(frozen=True)
class LinearForm:
    """``color(x, y, z) = ((cx*x + cy*y + cz*z) / denom) mod modulus``."""

    cx: int
    cy: int
    cz: int
    denom: int
    modulus: int

    def __call__(self, x: int, y: int, z: int) -> int:
        num = self.cx * x + self.cy * y + self.cz * z
        if num % self.denom:
            raise ValueError(f"form is not integral at {(x, y, z)}")
        return (num // self.denom) % self.modulus


POWER2_FORM = LinearForm(1, -2, 9, 2, 13)


def color_power2(s: Site) -> int:
    """``i - 2j + 9k/2 (mod 13)``; 13 colors, proper at distance 2."""
    return POWER2_FORM(*s)


# Three readings of the 30-coloring of the cube of the grid.  The printed
# formula fails at displacements (+-5, -1, 1) under either residue
# convention; the labels of the distance-3 neighborhood picture give the
# third reading, which is valid.
def _p3_printed(s: Site, positive: bool) -> int:
    x, y, z = s
    if z % 2 == 0:
        r = (x // 2) % 5
        if positive and r == 0:
            r = 5
        return (r + 5 * (y // 2) + 15 * (z // 2)) % 30
    r = ((x - 1) // 2) % 5
    if positive and r == 0:
        r = 5
    return (r + 5 * ((y - 1) // 2) + 8 + 15 * ((z - 1) // 2)) % 30


def _p3_figure(s: Site) -> int:
    x, y, z = s
    if z % 2 == 0:
        return ((x // 2) % 5 - 5 * (y // 2) + 15 * (z // 2)) % 30
    return (((x - 1) // 2 + 3) % 5 + 5 - 5 * ((y - 1) // 2) + 15 * ((z - 1) // 2)) % 30


POWER3_READINGS = {
    "printed": lambda s: _p3_printed(s, False),
    "printed-positive": lambda s: _p3_printed(s, True),
    "figure": _p3_figure,
}


@lru_cache(maxsize=None)
def resolve_power3_reading() -> str:
    """First reading, in the order of ``POWER3_READINGS``, that verifies at distance 3."""
    for name in POWER3_READINGS:
        if verify_periodic(power3(reading=name), 3).valid:
            return name
    raise NoMultiplier("no reading of the 30-coloring verifies at distance 3")


def color_power3(s: Site, reading: str | None = None) -> int:
    return POWER3_READINGS[reading or resolve_power3_reading()](s)


@dataclass(frozen=True)
class SquareMultiplier:
    d: int
    q: int
    m: int

    def holds(self) -> bool:
        return _multiplier_ok(self.d, self.q, self.m)


def _multiplier_ok(d: int, q: int, m: int) -> bool:
    for b in range(-d, d + 1):
        rest = d - abs(b)
        for a in range(-rest, rest + 1):
            if (a or b) and (a + m * b) % q == 0:
                return False
    return True


@lru_cache(maxsize=None)
def square_multiplier(d: int) -> SquareMultiplier:
    """Smallest ``m`` such that ``a + m*b (mod q)`` colors the ``d``-th power of the square grid.

    ``q = ceil((d+1)^2 / 2)``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    q = -(-(d + 1) ** 2 // 2)
    if q == 1:
        return SquareMultiplier(d, q, 1)
    for m in range(1, q):
        if _multiplier_ok(d, q, m):
            return SquareMultiplier(d, q, m)
    raise NoMultiplier(f"no linear {q}-coloring of the square grid's {d}-th power")


def color_slab_general(d: int, s: Site) -> int:
    """Layer ``z`` gets pattern ``z mod (d+1)``; each pattern is a square-grid coloring."""
    sm = square_multiplier(d)
    x, y, z = s
    par = z % 2
    a, b = (x - par) // 2, (y - par) // 2
    return (z % (d + 1)) * sm.q + (a + sm.m * b) % sm.q


def _check_layers(s: Site, lo: int, hi: int) -> None:
    if not lo <= s[2] <= hi:
        raise OutOfSlab(f"{tuple(s)} is outside layers {lo}..{hi}")


def color_slab01(d: int, s: Site) -> int:
    _check_layers(s, 0, 1)
    if d % 2 == 0:
        x, y, _ = s
        return ((x + (2 * d + 1) * y) // 2) % (d + 1) ** 2
    # palettes 0 and 1 of the layered coloring are already 0..(d+1)^2-1
    return color_slab_general(d, s)


def color_slab02(d: int, s: Site) -> int:
    _check_layers(s, 0, 2)
    # d=1: two palettes alternate (the 4-coloring); d>=2: three consecutive palettes
    return color_slab_general(d, s)


@dataclass(frozen=True)
class Violation:
    u: Site
    v: Site
    color: int
    dist: int


@dataclass
class VerifyResult:
    valid: bool
    violations: list[Violation]
    pairs_checked: int = 0
    colors_used: int | None = None

    def __bool__(self) -> bool:
        return self.valid


CONSTRUCTIONS = ("power2", "power3", "slab-general", "slab01", "slab02")


@dataclass(frozen=True)
class ColoringSpec:
    """A coloring construction, or an explicit site -> color map.

    ``layers`` restricts the domain to a slab; ``d`` parametrizes the
    layered constructions.
    """

    variant: str
    d: int | None = None
    layers: tuple[int, int] | None = None
    reading: str | None = None
    mapping: Mapping[Site, int] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.variant not in CONSTRUCTIONS + ("explicit",):
            raise ValueError(f"unknown construction {self.variant!r}")
        if self.variant in ("slab-general", "slab01", "slab02") and (self.d is None or self.d < 1):
            raise ValueError(f"{self.variant} needs a positive d")
        if self.variant == "explicit" and self.mapping is None:
            raise ValueError("explicit coloring needs a mapping")

    # -- evaluation --------------------------------------------------------
    def __call__(self, s: Site) -> int:
        if self.layers is not None:
            _check_layers(s, *self.layers)
        v = self.variant
        if v == "power2":
            return color_power2(s)
        if v == "power3":
            return color_power3(s, self.reading)
        if v == "slab-general":
            return color_slab_general(self.d, s)
        if v == "slab01":
            return color_slab01(self.d, s)
        if v == "slab02":
            return color_slab02(self.d, s)
        try:
            return self.mapping[Site(*s)]
        except KeyError:
            raise KeyError(f"explicit coloring has no color for {tuple(s)}") from None

    color = __call__

    def restrict(self, k1: int, k2: int) -> "ColoringSpec":
        return replace(self, layers=(k1, k2))

    @property
    def palette_size(self) -> int:
        v, d = self.variant, self.d
        if v == "power2":
            return 13
        if v == "power3":
            return 30
        if v == "slab-general":
            return (d + 1) * square_multiplier(d).q
        if v == "slab01":
            return (d + 1) ** 2
        if v == "slab02":
            return 4 if d == 1 else 3 * square_multiplier(d).q
        return max(self.mapping.values()) + 1 if self.mapping else 0

    @property
    def domain_layers(self) -> tuple[int, int] | None:
        if self.layers is not None:
            return self.layers
        return {"slab01": (0, 1), "slab02": (0, 2)}.get(self.variant)

    @property
    def linear_form(self) -> LinearForm | None:
        """The form when color differences depend on the displacement only."""
        if self.variant == "power2":
            return POWER2_FORM
        if self.variant == "slab01" and self.d % 2 == 0:
            return LinearForm(1, 2 * self.d + 1, 0, 2, (self.d + 1) ** 2)
        return None

    # -- periodicity -------------------------------------------------------
    def period_basis(self) -> tuple[tuple[int, int, int], ...]:
        """Lower-triangular basis (lattice coordinates) of color-preserving translations.

        Slab-restricted colorings only keep the two in-layer rows.
        """
        v, d = self.variant, self.d
        if v == "power2":
            rows = ((13, 0, 0), (2, 1, 0), (-4, 0, 1))
        elif v == "power3":
            rows = ((5, 0, 0), (0, 6, 0), (-2, -2, 4))
        elif v == "slab01" and d % 2 == 0:
            rows = (((d + 1) ** 2, 0, 0), (-(2 * d + 1), 1, 0))
        elif v in ("slab-general", "slab01", "slab02"):
            sm = square_multiplier(d)
            period_z = math.lcm(d + 1, 2)
            rows = ((sm.q, 0, 0), (-sm.m, 1, 0), (-period_z // 2, -period_z // 2, period_z))
        else:
            raise NonPeriodic("explicit colorings carry no period")
        if self.domain_layers is not None:
            rows = rows[:2]
        return rows


def power2() -> ColoringSpec:
    return ColoringSpec("power2")


def power3(reading: str | None = None) -> ColoringSpec:
    return ColoringSpec("power3", reading=reading)


def slab_general(d: int) -> ColoringSpec:
    return ColoringSpec("slab-general", d)


def slab01(d: int) -> ColoringSpec:
    return ColoringSpec("slab01", d)


def slab02(d: int) -> ColoringSpec:
    return ColoringSpec("slab02", d)


def explicit(mapping: Mapping) -> ColoringSpec:
    return ColoringSpec("explicit", mapping={Site(*s): int(c) for s, c in mapping.items()})


def construction(name: str, d: int | None = None) -> ColoringSpec:
    """Look up a named construction (``power2``, ``power3``, ``slab-general``, ...)."""
    if name == "power2":
        return power2()
    if name == "power3":
        return power3()
    return ColoringSpec(name, d)


def _lattice_to_site(n1: int, n2: int, n3: int) -> Site:
    return Site(2 * n1 + n3, 2 * n2 + n3, n3)


def window_sources(spec: ColoringSpec) -> tuple[Site, ...]:
    """One site per orbit of the spec's translation group, canonically ordered."""
    rows = spec.period_basis()
    h1, h2 = rows[0][0], rows[1][1]
    if spec.domain_layers is not None:
        zs = range(spec.domain_layers[0], spec.domain_layers[1] + 1)
    else:
        zs = range(rows[2][2])
    reps = [_lattice_to_site(n1, n2, n3) for n3 in zs for n2 in range(h2) for n1 in range(h1)]
    return tuple(sorted(reps, key=lambda s: (s.z, s.y, s.x)))


def fundamental_window(spec: ColoringSpec, d: int) -> Region:
    """The orbit representatives dilated by distance ``d`` (inside the domain).

    Checking every pair with one end among the representatives, on this
    window, covers every pair of the infinite domain up to translation.
    """
    reps = window_sources(spec)
    layers = spec.domain_layers
    sites = set(reps)
    disp = displacements_within(d)
    for r in reps:
        for dx, dy, dz in disp:
            s = Site(r.x + dx, r.y + dy, r.z + dz)
            if layers is None or layers[0] <= s.z <= layers[1]:
                sites.add(s)
    return Region(tuple(sites), ("fundamental-window", spec.variant, spec.d, d))


def colors_used(spec: ColoringSpec) -> int:
    return len({spec(s) for s in window_sources(spec)})


def verify_displacement(form, d: int, *, all_violations: bool = False,
                        max_dz: int | None = None) -> VerifyResult:
    """Check a translation-covariant coloring through displacements alone.

    ``form`` is a :class:`LinearForm` or a spec that has one.  Valid iff no
    nonzero displacement of norm ``<= d`` has form value 0.
    """
    if isinstance(form, ColoringSpec):
        if form.linear_form is None:
            raise NotTranslationCovariant(f"{form.variant} is piecewise; use verify_window")
        if max_dz is None and form.domain_layers is not None:
            max_dz = form.domain_layers[1] - form.domain_layers[0]
        form = form.linear_form
    origin = Site(0, 0, 0)
    violations = []
    disp = displacements_within(d, max_dz)
    for dx, dy, dz in disp:
        if form(dx, dy, dz) == 0:
            violations.append(Violation(origin, Site(dx, dy, dz), form(0, 0, 0), norm(dx, dy, dz)))
            if not all_violations:
                break
    return VerifyResult(not violations, violations, len(disp))


def _check_sources(spec, region, d, metric, sources, lower_only=False):
    # lower_only: each pair is counted from its canonically smaller endpoint
    members = region.index
    colors = {s: spec(s) for s in region.sites}
    disp = displacements_within(d) if metric == "ambient" else None
    restrict = sources is not None and not lower_only
    found = []
    checked = set() if restrict else None
    npairs = 0
    for u in (sources if sources is not None else region.sites):
        cu = colors[u]
        if metric == "ambient":
            near = []
            for dx, dy, dz in disp:
                v = Site(u.x + dx, u.y + dy, u.z + dz)
                if v in members:
                    near.append((v, norm(dx, dy, dz)))
        else:
            near = [(v, dd) for v, dd in region_bfs(region, u, d).items() if dd > 0]
        for v, dd in near:
            a, b = (u, v) if u.key < v.key else (v, u)
            if restrict:
                if (a, b) in checked:
                    continue
                checked.add((a, b))
            elif a != u:
                continue
            npairs += 1
            if colors[v] == cu:
                found.append(Violation(a, b, cu, dd))
    return found, npairs, checked


def verify_window(spec: ColoringSpec, region: Region, d: int, metric: str = "ambient",
                  sources=None, threads: int = 1) -> VerifyResult:
    """Check every pair of ``region`` at distance ``<= d`` for a color clash.

    With ``sources``, only pairs having an endpoint among ``sources`` are
    checked.  Violations come back in canonical order whatever ``threads`` is.
    """
    metric = normalize_metric(metric)
    if sources is not None:
        sources = tuple(Site(*s) for s in sources)
        missing = [s for s in sources if s not in region]
        if missing:
            raise ValueError(f"source {missing[0]} is not in the region")
    todo = sources if sources is not None else region.sites
    if threads > 1 and len(todo) > 1:
        chunks = [todo[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_check_sources, [spec] * threads, [region] * threads,
                                [d] * threads, [metric] * threads, chunks,
                                [sources is None] * threads))
        found, seen = [], set()
        npairs = 0
        for f, n, checked in parts:
            if sources is None:
                found.extend(f)
                npairs += n
            else:
                new = checked - seen
                seen |= checked
                npairs += len(new)
                found.extend(v for v in f if (v.u, v.v) in new)
    else:
        found, npairs, _ = _check_sources(spec, region, d, metric, sources)
    found.sort(key=lambda v: (v.u.key, v.v.key))
    used = len({spec(s) for s in (sources if sources is not None else region.sites)})
    return VerifyResult(not found, found, npairs, used)


def verify_periodic(spec: ColoringSpec, d: int, threads: int = 1) -> VerifyResult:
    """Validity of a periodic coloring on its whole (infinite) domain."""
    return verify_window(spec, fundamental_window(spec, d), d, "ambient",
                         sources=window_sources(spec), threads=threads)
