"""
Sieving by coprime multipliers, and splitting by Omega
======================================================

If A' is pairwise coprime, the numbers of the form a' * a (a' in A', a in A)
can be counted exactly by inclusion-exclusion. For A = [2, x] the uncovered
part is close to x * prod(1 - 1/a').

Separately: every n with at least two prime factors splits as n1 * n2 with
the factor counts divided roughly in half, which is the step used to show the
Omega-bounded set has a large product set.
"""

from densitylab import build_arith_tables, from_elements
from densitylab.constructions import first_primes, inclusion_exclusion_cover, split_by_omega

x = 10**5
A = from_elements(range(2, x + 1), x)
ps = first_primes(5)
res = inclusion_exclusion_cover(A, ps, x)
print(f"A' = {ps}: cover {res.cover_count}, inclusion-exclusion {res.ie_count}")
print(f"uncovered {res.uncovered} vs predicted {res.predicted_uncovered:.0f}")

# %%
tables = build_arith_tables(10**5)
for n in (12, 360, 2310, 65536, 99990):
    s = split_by_omega(n, tables)
    print(f"{n:>6} = {s.n1} * {s.n2}   Omega: {s.t} -> {s.omega1} + {s.omega2}   {s.diagnostics()}")
