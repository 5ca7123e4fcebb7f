"""
How fast does the symmetric energy of an inverse interval grow?
===============================================================

J_2k counts pairs of k-tuples from I = {1..N} whose inverse sums agree
mod p.  The diagonal alone gives about k! N^k solutions, while a random
set of the same size would give N^(2k)/p more.  We fit ln J / ln N and
compare it with the general exponent 2k^2/(k+1).
"""

from recipsum.counting import count_J2k, rational_J2k, symmetric_exponent
from recipsum.modmath import Interval, nearest_prime, next_prime

p = nearest_prime(10**6)
print(f"p = {p}")
for k in (2, 3):
    print(f"\nk = {k}, general exponent {symmetric_exponent(k)} = {float(symmetric_exponent(k)):.3f}")
    for N in (25, 50, 100, 200):
        if N ** k > 10**7:
            break
        r = count_J2k(Interval(0, N), k, p)
        print(f"  N={N:4d}  J={r.J:>12d}  ln J/ln N={r.measured_exponent:.3f}  ({r.wall_time:.2f} s, {r.extra['backend']})")

# For tiny N relative to p, no wrap-around happens and the count is the
# rational one: 1/x1 + 1/x2 + 1/x3 = 1/y1 + 1/y2 + 1/y3 over the rationals.
N = 10
p_big = next_prime(2 * 10**18)
print(f"\nN={N}, p={p_big}: modular J_6 = {count_J2k(Interval(0, N), 3, p_big).J}, rational J_6 = {rational_J2k(N, 3)}")
