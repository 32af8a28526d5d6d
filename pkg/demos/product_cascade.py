"""
A thin set whose product set oscillates
=======================================

Start from Q, the integers supported on either of two interleaved halves of
the primes (minus a set P0 fixing the upper density). Then alternately carve
out long intervals while keeping |(A.A)(n)| >= alpha n, and wait until the
product-set ratio recovers towards beta. Everything is replayed afterwards
against freshly built sets.
"""

from densitylab import Schedule, build_arith_tables, density_report, product_set
from densitylab.constructions import prime_partition, theorem_cascade, verify_cascade

L = 10**5
tables = build_arith_tables(L)
part = prime_partition(0.5)
print("P0 =", part.P0, " beta achieved =", part.beta_achieved)

A, trace = theorem_cascade(0.1, part, L, max_stages=6, tables=tables)
print(f"n0 = {trace.n0}")
for m in trace.milestones:
    print(f"stage {m.j} (Case {m.case:2}): n {m.n_j} -> {m.n_next}, s = {m.s}, witness n = {m.witness_n}")
for note in trace.notices:
    print("notice:", note)
print("replay failures:", verify_cascade(A, trace, tables) or "none")

# %%
AA = product_set(A, A, L)
pts = tuple(sorted({n for n in trace.n_values if n >= 1} | {10**3, 10**4, L}))
print("A   ratios:", [round(r, 4) for r in density_report(A, Schedule("explicit", points=pts), min_checkpoints=1).ratios])
print("A.A ratios:", [round(r, 4) for r in density_report(AA, Schedule("explicit", points=pts), min_checkpoints=1).ratios])
