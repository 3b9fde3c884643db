"""
Distances and balls in the FCC grid
===================================

Sites live in doubled coordinates: ``(x, y, z)`` with all three of the
same parity.  Even layers hold the integer square grid, odd layers the
shifted one.
"""

import numpy as np
from fccgrid import Site, distance, neighbors, ball_region, box_region, pairwise_distances

origin = Site(0, 0, 0)
print(len(neighbors(origin)), "neighbours")

# one step along the layer, one step up, and a knight-like jump
for other in (Site(2, 0, 0), Site(1, 1, 1), Site(4, 2, 0)):
    print(tuple(other), distance(origin, other))

###############################################################################
# Ball sizes grow like a cubic; compare with (2l+1)(5l^2+5l+3)/3

sizes = np.array([len(ball_region(origin, l)) for l in range(6)])
l = np.arange(6)
print(sizes)
print((2 * l + 1) * (5 * l**2 + 5 * l + 3) // 3)

###############################################################################
# A distance matrix on a small window, and how often each distance occurs

window = box_region(-4, 4, -4, 4, -2, 2)
dm = pairwise_distances(window)
values, counts = np.unique(dm, return_counts=True)
print(dict(zip(values.tolist(), counts.tolist())))
