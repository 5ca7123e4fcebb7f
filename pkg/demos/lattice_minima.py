"""
Successive minima of the lattice  lambda*u = v (mod p)
======================================================

If two k-tuples from {1..N} have inverse sums equal to lambda, the vector
(x1...xk, sum of products omitting one x) lies in the lattice
lambda*u = v (mod p) inside the box |u| <= N^k, |v| <= k N^(k-1).
The number of box points is controlled by the successive minima.
"""

import random

from recipsum.lattice import energy_lattice, minkowski_check, solution_vector
from recipsum.modmath import mod_inverse

p, N, k = 10007, 20, 2
x = (3, 17)
lam = sum(mod_inverse(t, p) for t in x) % p
setup = energy_lattice(lam, N, k, p)
v = solution_vector(x)
print(f"lambda = 1/3 + 1/17 = {lam} mod {p}; solution vector {v} in lattice: {setup.lattice.contains(v)}")
print(f"minima: {[str(m) for m in setup.minima]}, two short vectors: {setup.two_short_vectors}")

rep = minkowski_check(setup.lattice, setup.box)
print(f"box points {rep.count} <= {float(rep.count_bound):.2f};  prod min(lambda_i,1) = {rep.minima_product} <= {rep.minima_product_bound}")

# the box has area 4 N^k k N^(k-1) > 4p, so every lambda has one short
# vector; whether a second independent one exists splits the lambdas
rng = random.Random(1)
lams = [rng.randrange(1, p) for _ in range(300)]
both = sum(energy_lattice(l, N, k, p).two_short_vectors for l in lams)
print(f"random lambda: {both} of {len(lams)} have two independent short vectors")
