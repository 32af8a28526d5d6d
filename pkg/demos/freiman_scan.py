"""
Checking the sumset lower bound on a corpus
===========================================

For normalized sets (0 in A, gcd 1) the lower density of A + A is at least
alpha/2 + min(alpha, 1/2), where alpha is the lower density of A. We
estimate both densities on the prefix [0, 10^6] and print the gap.
"""

from densitylab import density_report, freiman_gap, sumset
from densitylab.harness import normalized_corpus

L = 10**6
for A in normalized_corpus(L):
    a = density_report(A).lower_est
    g = density_report(sumset(A, A, L)).lower_est
    print(f"{A.label:32} alpha ~ {a:.4f}  gamma ~ {g:.4f}  gap {freiman_gap(a, g):+.4f}")
