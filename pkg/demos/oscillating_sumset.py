"""
A set with density 3/7 whose sumset has no density
==================================================

Alternate two residue patterns mod 7 over blocks [7N_m, 7N_(m+1)]:
U = {0, 2, 3} and V = {0, 1, 2}. Both have density 3/7, but U + U hits
residues {0,...,6} while V + V only reaches {0,...,4}. Mixing neighbouring
blocks gives {0,...,5}, so the sumset ratio drifts between 6/7 and 1.
"""

from densitylab import Schedule, density_report, sumset
from densitylab.constructions import default_prop3_schedule, prop3_set, prop3_window_checks

L = 10**6
N = default_prop3_schedule(L)
A = prop3_set(N, L)
S = sumset(A, A, L)
print("schedule:", N)

edges = tuple(7 * v for v in N[1:] if 7 * v <= L)
rA = density_report(A, Schedule("explicit", points=edges))
rS = density_report(S, Schedule("explicit", points=edges), tail_fraction=1.0)
print(f"A   : ratios at block edges {[round(x, 4) for x in rA.ratios]}")
print(f"A+A : ratios at block edges {[round(x, 4) for x in rS.ratios]}")

# %%
# The finite statements behind those numbers are exact set equalities.
for w in prop3_window_checks(S, N):
    print(f"  {w.kind:5} window k={w.k} [{w.lo}, {w.hi}] ok={w.ok}")
