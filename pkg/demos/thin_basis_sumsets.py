"""
Sets of any density whose sumset is everything
==============================================

Start from the multiples-like set {floor(n/alpha)} and add the short
interval {0, 1, ..., floor(1/alpha)}. The interval is a thin additive basis:
it fills every gap, so A + A covers [0, N] while A keeps density alpha.
"""

from densitylab import Schedule, density_report, sumset
from densitylab.constructions import dyadic_block_edges, dyadic_block_set, prop1_set

N = 10**5

for alpha in (0.1, 0.25, 0.5, 0.9):
    A = prop1_set(alpha, N)
    S = sumset(A, A, N)
    r = density_report(A, tail_fraction=0.25)
    print(f"alpha={alpha:<5} |A|={len(A):>6}  tail density [{r.lower_est:.4f}, {r.upper_est:.4f}]"
          f"  A+A full: {bool(S.bits.all())}")

# %%
# A set without a density: dyadic blocks [4^n, 2*4^n] plus 0.
# Sampled at the block edges the ratio swings between 1/3 and 2/3,
# yet the sumset still covers everything.
L = 1 << 20
B = dyadic_block_set(L)
r = density_report(B, Schedule("explicit", points=tuple(dyadic_block_edges(L))))
print(f"\ndyadic blocks: lower ~ {r.lower_est:.4f}, upper ~ {r.upper_est:.4f}, "
      f"B+B full: {bool(sumset(B, B, L).bits.all())}")
