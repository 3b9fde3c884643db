"""
Exact colorability of finite windows
====================================

The search engine decides whether a finite region has a k-coloring of
its d-th power.  A clique is precolored first, which both prunes and
breaks color symmetry.
"""

from fccgrid import (SearchProblem, Site, b_ball, box_region, forced_equalities,
                     k_colorable, tetra_D0, tetra_neighborhood)
from fccgrid.cnf import encode, replay_dimacs

# the tetrahedron needs four colors
for k in (3, 4):
    print(k, k_colorable(SearchProblem(tetra_D0(), 1, k)).verdict)

# the 28-site tetra ball is a clique of the cube: no search needed
cert = k_colorable(SearchProblem(b_ball(1), 3, 27))
print(cert.verdict, "after", cert.stats.nodes, "nodes")

###############################################################################
# Forced equalities: with 28 colors the origin must repeat one of three sites

P = Site.from_paper
t = tetra_neighborhood(P(1.5, -.5, 1), P(1.5, .5, 1), P(1, 0, 2), P(2, 0, 2))
u = Site(0, 0, 0)
region = type(t)(t.sites + (u,))
candidates = [P(3, 0, 2), P(2.5, .5, 3), P(2.5, -.5, 3)]
print("28 colors:", forced_equalities(region, 3, 28, u, candidates).holds)
print("29 colors:", forced_equalities(region, 3, 29, u, candidates).holds)

###############################################################################
# The same question as CNF, decided again by decoding the clauses

cnf = encode(SearchProblem(tetra_D0(), 1, 3))
print(cnf.text().splitlines()[2], replay_dimacs(cnf, 3).verdict)

###############################################################################
# Larger windows go to an external SAT solver through the exported CNF.
# This three-layer window has no 23-coloring (python-sat settles it in seconds).

window = box_region(-6, 6, -2, 6, 0, 2)
big = encode(SearchProblem(window, 3, 23))
print(len(window), "sites,", big.nvars, "variables,", len(big.clauses), "clauses")
try:
    from fccgrid.cnf import solve_external
    print("SAT" if solve_external(big) else "UNSAT")
except RuntimeError:
    print("install python-sat to solve it")
