"""
Periodic distance colorings
===========================

A coloring of the d-th power gives different colors to any two sites at
distance at most d.  Periodic colorings are checked on one period.
"""

from fccgrid import (clique_lower_bound, colors_used, power2, power3, slab02,
                     verify_periodic, Site)

for name, spec, d in (("power2", power2(), 2), ("power3", power3(), 3)):
    res = verify_periodic(spec, d)
    print(name, res.valid, colors_used(spec), "colors")

# the lower bound comes from a clique of the same power
print("clique at d=2:", clique_lower_bound("F", 2).size)
print("clique at d=3:", clique_lower_bound("F", 3).size)

###############################################################################
# One step too far: power2 breaks at distance 3

res = verify_periodic(power2(), 3)
v = res.violations[0]
print(len(res.violations), "violations, e.g.", tuple(v.u), tuple(v.v), "color", v.color)

###############################################################################
# The three-layer slab: constructions against cliques

for d in range(2, 6):
    spec = slab02(d)
    print(d, colors_used(spec), clique_lower_bound("F02", d).size)

print(slab02(3)(Site(1, 1, 1)))
