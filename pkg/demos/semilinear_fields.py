"""
Semilinear groups and the counting function
===========================================

x -> a * x^(p^j) on GF(p^d), plus the table that says which d need a
direct check.  Run with ``python demos/semilinear_fields.py``.
"""

import numpy as np

from hallorbits import Gamma, make_field
from hallorbits.orbits import fd_scan, gamma_direct_check, points_outside_subfields

# %%
# GF(8) uses x^3 + x + 1.  Gamma(8) has order 3 * 7 = 21 and moves every
# nonzero element to every other one.
F = make_field(2, 3)
M = Gamma(2, 3)
print(F, " |Gamma(8)| =", M.order)

# %%
# Each nonzero vector is fixed by exactly d = 3 elements: count fixed points
# column by column over the whole element table.
els = np.asarray(M.perm_group.elements)
print("stabilizer sizes:", (els == np.arange(8)).sum(axis=0)[1:])

# %%
# The counting function changes sign at d = 5 for p = 2 and at d = 3 for
# p = 3.  Signs come from exact rational bounds, not from the float.
for p in (2, 3):
    for row in fd_scan(p, range(1, 8)):
        print(f"p={p} d={row.d}  f={row.value:9.3f}  {row.sign}")

# %%
# Where f is positive there are plenty of points outside every proper subfield.
print([(d, points_outside_subfields(2, d), 4 * d + 1) for d in range(5, 9)])

# %%
# The small values of d are settled by brute force over all subgroups.
chk = gamma_direct_check(2, 3, [2, 3])
for r in chk.eligible_reports:
    print(f"|H| = {r.h_order:2d}: {r.qualifying} qualifying orbits (need {r.threshold})")
print("all pass:", chk.all_pass)
