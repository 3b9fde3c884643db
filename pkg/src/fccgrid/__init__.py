"""The face-centered cubic grid, distance colorings of its powers, and exact checks.

Sites are integer triples in doubled coordinates ``(x, y, z) = (2i, 2j, k)``
with ``x = y = z (mod 2)``; :meth:`Site.from_paper` converts half-integer
``(i, j, k)`` triples.
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover - running from a source tree
    __version__ = "0.0.0"

from .lattice import (  # noqa: E402
    EmptyRegion,
    NotInRegion,
    ParityError,
    Region,
    Site,
    Unreachable,
    ball_region,
    box_region,
    distance,
    distance_bfs,
    distance_in_region,
    is_adjacent,
    make_site,
    neighbors,
    pairwise_distances,
    slab_region,
)
from .balls import (  # noqa: E402
    b_ball,
    clique_lower_bound,
    diameter,
    is_clique,
    shell,
    shell_union,
    tetra_D0,
    tetra_neighborhood,
)
from .colorings import (  # noqa: E402
    ColoringSpec,
    colors_used,
    construction,
    explicit,
    power2,
    power3,
    slab01,
    slab02,
    slab_general,
    verify_displacement,
    verify_periodic,
    verify_window,
    window_sources,
)
from .search import (  # noqa: E402
    Distinct,
    Equal,
    SearchProblem,
    forced_equalities,
    greedy_clique,
    k_colorable,
)
from .cnf import export_dimacs, read_dimacs, replay_dimacs  # noqa: E402
from .facts import run_fact_script  # noqa: E402
