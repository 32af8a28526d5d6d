"""
Product sets of classical multiplicative families
=================================================

Squarefree times squarefree is exactly the cubefree numbers. Integers
coprime to k form a multiplicative monoid. Multiples of the first r primes
(B_r) have a product set that is much thinner than B_r itself, which is
what lets us place a density strictly between dA^2 and dA.
"""

from densitylab import build_arith_tables, density_report, product_set
from densitylab.constructions import beta_gamma_closed_form, classical_set, closed_form_density, select_product_alpha

L = 10**6
tables = build_arith_tables(L)

for kind in ("squarefree", "coprime(30)", "nonsquarefree", "prime_union(3)"):
    A = classical_set(kind, L, tables)
    sq = product_set(A, A, L)
    print(f"{kind:15} dA ~ {len(A) / L:.5f} (closed form {float(closed_form_density(kind)):.5f})"
          f"   d(A.A) ~ {sq.count_prefix(L) / L:.5f}")

# %%
print("\n r   beta_r    gamma_r")
for r in range(1, 8):
    b, g = beta_gamma_closed_form(r)
    print(f"{r:2d}  {float(b):.5f}  {float(g):.5f}")

# %%
# For each alpha pick a set with dA^2 < alpha < dA.
for alpha in (0.05, 0.3, 0.6, 0.8):
    c = select_product_alpha(alpha, margin=0.01)
    A = classical_set(c.set_kind, L, tables)
    rA, rS = density_report(A), density_report(product_set(A, A, L))
    print(f"alpha={alpha}: {c.set_kind:16} dA^2 ~ {rS.final_ratio:.4f} < {alpha} < dA ~ {rA.final_ratio:.4f}")
