"""
GL(2,3) acting on pairs of vectors
==================================

A walk through the one small case where only three orbits qualify.
Run with ``python demos/gl23_pairs.py``.
"""

# %%
# The group and its module.  GL(2,3) has order 48 and acts on the nine
# vectors of GF(3)^2; vectors are stored as integers in base 3.
from hallorbits import GL, hall_subgroup, o_pi
from hallorbits.orbits import pair_exists, qualifying_orbits, regular_orbit_small_centralizer

G = GL(2, 3)
P = G.perm_group
print("order", P.order, "on", G.space.npoints, "points")

# %%
# The largest normal 2-subgroup is the quaternion group, and a Sylow
# 2-subgroup H (semidihedral of order 16) sits above it.
Q8 = o_pi(P, [2])
H = hall_subgroup(P, [2], name="GL23")
print("O_2 order", Q8.order, " Sylow 2 order", H.order)

# %%
# Count H-orbits on V + V whose points have a joint centralizer inside O_2.
# The characteristic is 3, so this needs the lenient mode.
rep = qualifying_orbits(G, H, [2], unit="H", mode="lenient")
print(f"{rep.total_orbits} H-orbits, {rep.qualifying} qualify (threshold {rep.threshold})")
for v1, v2 in rep.witnesses:
    print("   ", G.space.decode(v1), G.space.decode(v2))

# %%
# Counting G-orbits instead merges those three into one.
rep_g = qualifying_orbits(G, H, [2], unit="G", mode="lenient")
print(f"{rep_g.total_orbits} G-orbits, {rep_g.qualifying} qualify")

# %%
# Any basis works as a single witness pair, and a regular orbit on pairs
# forces a vector whose centralizer is at most sqrt(48).
print("first witness pair:", pair_exists(G, H, [2], mode="lenient").witness)
lem = regular_orbit_small_centralizer(G)
print("regular orbit:", lem.regular_orbit_exists, " |C(v)| =", lem.centralizer_order)
