"""
Largest incomplete Kloosterman sum over all frequencies
=======================================================

For a short interval I the sum S(a) = sum_{x in I} e_p(a/x) is usually
far below the trivial bound |I|.  One FFT of the indicator of I^-1 gives
|S(a)| for every a at once, so the worst case over a is exact.
"""

import numpy as np

from recipsum.expsums import complete_kloosterman, max_linear_over_a, max_multilinear_over_a
from recipsum.modmath import Interval

p = 100003
print(f"p = {p}")
for N in (10, 100, 1000, 10000):
    a, m = max_linear_over_a(Interval(0, N), p)
    print(f"  N={N:6d}  max_a |S| = {m:9.3f} at a={a:6d}   |S|/N = {m / N:.4f}   sqrt(p) log p = {np.sqrt(p) * np.log(p):.0f}")

# products of two and three inverses cancel much harder
p = 10007
for n in (1, 2, 3):
    a, m = max_multilinear_over_a([Interval(0, 20)] * n, p=p)
    print(f"n={n}: max_a |sum e_p(a/(x1...xn))| / 20^n = {m / 20**n:.4f}")

# complete sums sit inside the square-root bound
vals = [complete_kloosterman(a, 1, p).modulus / np.sqrt(p) for a in range(1, 200)]
print(f"\nmax |K(a,1;{p})| / sqrt(p) over a < 200: {max(vals):.4f} (bound 2)")
