"""
Subset sums of a nearly doubling sequence
=========================================

Take a_n = s_(n-1) - theta(s_(n-1)) with theta(k) = floor(k / (ln k)^2).
The gap theta is small enough that the subset sums P(A) still have a
density. We track delta_n = |P(A) ∩ [1, s_n]| / s_n and watch it settle.
"""

from densitylab.constructions import delta_series, greedy_decompose, theta_sequence

seq = theta_sequence("k_over_log2", "minus", seed=(2, 3), count=30, cap=10**7)
print(f"{len(seq)} terms (stopped by {seq.stopped_by}), s_N = {seq.s(len(seq))}")

ds = delta_series(seq)
for n, s, d, row in zip(ds.n[1:], ds.s[1:], ds.delta[1:], ds.sandwich):
    print(f"n={n:2d}  s_n={s:>9}  delta={d:.6f}  sandwich ok={row[-1]}")
print(f"fitted step constant C = {ds.fitted_C:.3f}, last-five spread = {ds.spread(5):.2e}")

# %%
# Passing from the checkpoints s_n to an arbitrary x uses a greedy split
# of x into terms with large index plus a small remainder z.
doubling = theta_sequence("zero", seed=(1, 2), count=7)
d = greedy_decompose(17, doubling, k=1)
print("\n17 =", " + ".join(str(doubling.terms[i]) for i in d.indices), f"+ {d.remainder}")
print(f"remainder bound a_(k+2) + theta(s_(k+1)) = {d.weak_bound}: {d.within_weak_bound}")
