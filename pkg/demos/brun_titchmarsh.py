"""
Empirical Brun-Titchmarsh constants
===================================

pi(x; q, 1) phi(q) log(x/q) / x for a prime q near x^theta.  The classical
constant is 2; as theta grows the ratio drifts, and for theta close to 1
the count is tiny and noisy.
"""

from recipsum.harness import brun_titchmarsh_report, format_bt_table

for x in (10**6, 10**7):
    print(format_bt_table(brun_titchmarsh_report(x, [0.2, 0.35, 0.5, 0.65, 0.8])))
    print()
