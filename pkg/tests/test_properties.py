import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from recipsum.counting import count_J2k, inverse_sum_distribution, mixed_inverse_sum_distribution, sumset_size
from recipsum.expsums import bilinear, linear_incomplete, multilinear
from recipsum.lattice import Box, LatticeSpec, minkowski_check, successive_minima
from recipsum.modmath import Interval, batch_inverse, rational_reconstruct
from recipsum.polyalg import IntPoly, build_solution_poly, identity_check, sylvester_resultant

PRIMES = [7, 11, 13, 31, 101, 1009, 10007]


@st.composite
def interval_mod_p(draw, max_len=12, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    N = draw(st.integers(1, min(max_len, p - 1)))
    a = draw(st.integers(0, p - 1 - N))
    return p, Interval(a, N)


@settings(max_examples=150, deadline=None)
@given(interval_mod_p(), st.integers(1, 3), st.sampled_from(["dense", "sparse"]))
def test_mass_and_diagonal(pI, k, backend):
    p, I = pI
    T = inverse_sum_distribution(I, k, p, backend)
    assert T.total_mass == I.length**k
    assert T.energy() >= I.length**k
    assert T.support_size() <= min(p, math.comb(I.length + k - 1, k))


@settings(max_examples=60, deadline=None)
@given(interval_mod_p(max_len=8), st.integers(1, 2))
def test_fast_energy_equals_naive(pI, k):
    p, I = pI
    assert count_J2k(I, k, p).J == oracles.naive_J2k(list(I.integers()), k, p)


@settings(max_examples=80, deadline=None)
@given(interval_mod_p(max_len=10), st.integers(1, 3))
def test_sumset_size_times_energy(pI, k):
    # Cauchy-Schwarz: N^(2k) <= |kI^-1| * J_2k
    p, I = pI
    assert I.length ** (2 * k) <= sumset_size(I, k, p) * count_J2k(I, k, p).J


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([31, 53, 101]), st.data())
def test_holder_mixed_energy(p, data):
    n = data.draw(st.integers(1, 2))
    intervals = []
    for _ in range(2 * n):
        N = data.draw(st.integers(1, 6))
        intervals.append(Interval(data.draw(st.integers(0, p - 1 - N)), N))
    T = mixed_inverse_sum_distribution(intervals[:n], p)
    U = mixed_inverse_sum_distribution(intervals[n:], p)
    # number of solutions of the mixed 2n-variable equation
    mixed = sum(c * U.count(lam) for lam, c in T.items())
    bound = math.prod(count_J2k(I, n, p).J for I in intervals)
    assert mixed ** (2 * n) <= bound * (1 + 1e-6)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES + [2000000000000000057]), st.data())
def test_reconstruction_properties(p, data):
    j = data.draw(st.integers(0, p - 1))
    r = rational_reconstruct(j, p)
    s = math.isqrt(p)
    assert (r.u - j * r.v) % p == 0 and abs(r.u) <= s and 1 <= r.v <= s


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.data())
def test_batch_inverse_property(p, data):
    xs = data.draw(st.lists(st.integers(1, p - 1), min_size=1, max_size=40))
    assert all(x * y % p == 1 for x, y in zip(xs, batch_inverse(xs, p)))


@settings(max_examples=100, deadline=None)
@given(interval_mod_p(max_len=40), st.data())
def test_sum_symmetries(pI, data):
    p, I = pI
    a = data.draw(st.integers(0, p - 1))
    s = linear_incomplete(a, I, p)
    assert s.modulus <= s.terms * (1 + 1e-6)
    c = linear_incomplete((p - a) % p, I, p)
    assert abs(c.value - s.value.conjugate()) < 1e-9
    b = bilinear(a, I, Interval(0, 1), p=p)
    assert abs(b.value - s.value) < 1e-9  # x2 = 1 drops out
    m = multilinear(a, [I, Interval(0, 1), Interval(0, 1)], p=p)
    assert abs(m.value - s.value) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([101, 1009, 10007]), st.data())
def test_minkowski_2d(p, data):
    L = LatticeSpec.gamma(data.draw(st.integers(1, p - 1)), p)
    D = Box((Fraction(data.draw(st.integers(1, 50))), Fraction(data.draw(st.integers(1, 50)))))
    rep = minkowski_check(L, D)
    assert rep.passed and rep.count % 2 == 1
    m = rep.minima
    assert 0 < m[0] <= m[1]
    t = Fraction(data.draw(st.integers(1, 5)), data.draw(st.integers(1, 5)))
    assert successive_minima(L, D.scaled(t)) == [x / t for x in m]


small_poly = st.lists(st.integers(-50, 50), min_size=2, max_size=5).filter(lambda c: c[-1] != 0)


@settings(max_examples=100, deadline=None)
@given(small_poly, small_poly)
def test_resultant_swap_sign(a, b):
    P, Q = IntPoly(a), IntPoly(b)
    assert sylvester_resultant(Q, P) == (-1) ** (P.degree * Q.degree) * sylvester_resultant(P, Q)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-40, 40), min_size=1, max_size=4), small_poly)
def test_resultant_vanishes_on_common_root(roots, b):
    P = IntPoly.from_roots(roots)
    Q = IntPoly(b) * IntPoly.from_roots(roots[:1])
    assert sylvester_resultant(P, Q) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.lists(st.integers(-30, 30), min_size=2 * k, max_size=2 * k)))
def test_solution_poly_degree_and_swap(xs):
    k = len(xs) // 2
    P = build_solution_poly(xs)
    assert P.degree <= 2 * k - 2
    # swapping the two halves negates the polynomial
    assert build_solution_poly(xs[k:] + xs[:k]) == IntPoly() - P


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, rationals, rationals)
def test_identity_holds(x, y, z, a1, a2):
    e1 = x + y + z
    assert identity_check(x, y, z, a1, a2, x * y * z - a1 * e1, x * y + y * z + z * x - a2 * e1)
