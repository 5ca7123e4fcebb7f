import cmath
import math
import random

import numpy as np
import pytest

import oracles
from recipsum.counting import count_J2k
from recipsum.errors import DomainError, ResourceError
from recipsum.expsums import (
    CoeffSeq,
    ComplexSum,
    archimedean_bilinear,
    archimedean_gamma,
    bilinear,
    choose_archimedean_k,
    complete_kloosterman,
    dyadic_range,
    linear_incomplete,
    linear_weighted,
    max_linear_over_a,
    max_multilinear_over_a,
    multilinear,
    prime_sum_power_r,
    sampled_max_linear,
    stratified_a,
)
from recipsum.modmath import Interval, primes_upto


def close(z, w, tol=1e-9):
    return abs(complex(z) - complex(w)) <= tol


def test_linear_examples():
    assert close(linear_incomplete(0, Interval(0, 9), 101), 9)
    assert close(linear_incomplete(1, Interval(0, 6), 7), -1)
    s = linear_incomplete(1, Interval(0, 3), 7)
    assert close(s, oracles.e(1, 7) + oracles.e(4, 7) + oracles.e(5, 7))
    # three unit vectors at angles 2pi/7, 8pi/7, 10pi/7
    assert s.modulus == pytest.approx(0.80194, abs=1e-4)
    assert s.terms == 3


def test_linear_rejects_zero():
    with pytest.raises(DomainError):
        linear_incomplete(1, Interval(3, 5), 7)


def test_linear_against_direct_sum():
    rng = random.Random(1)
    for _ in range(60):
        p = rng.choice([101, 1009, 2**31 - 1, 2000000000000000057])
        N = rng.randint(1, 40)
        a0 = rng.randrange(0, p - N)
        a = rng.randrange(p)
        got = linear_incomplete(a, Interval(a0, N), p)
        want = oracles.linear_sum(a, oracles.interval(a0, N), p)
        assert close(got, want, 1e-8)


def test_conjugate_symmetry():
    for p in (7, 101, 1009):
        for a in (1, 2, p // 3):
            I = Interval(0, min(p - 1, 30))
            assert close(linear_incomplete(p - a, I, p), linear_incomplete(a, I, p).conjugate())


def test_max_linear_examples():
    a, m = max_linear_over_a(Interval(0, 6), 7)
    assert a == 1 and m == pytest.approx(1.0, abs=1e-9)
    a, m = max_linear_over_a(Interval(0, 3), 7)
    assert a == 2 and m == pytest.approx(2.2470, abs=1e-4)
    a, m = max_linear_over_a(Interval(0, 1), 5)
    assert a == 1 and m == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("p", [5, 7, 11, 13, 31, 53, 101])
def test_dft_scan_matches_direct(p):
    for a0, N in ((0, p - 1), (0, 3), (2, p // 2), (p // 2, p // 3 or 1)):
        I = Interval(a0, N)
        mags = [linear_incomplete(a, I, p).modulus for a in range(1, p)]
        best = max(mags)
        a_star, m = max_linear_over_a(I, p)
        assert m == pytest.approx(best, abs=1e-9)
        assert a_star == 1 + min(i for i, v in enumerate(mags) if v > best - 1e-9)


def test_max_linear_resource_limit():
    with pytest.raises(ResourceError, match="sampl"):
        max_linear_over_a(Interval(0, 5), 2**31 - 1)


def test_stratified_sampling():
    xs = stratified_a(10007, 100, seed=3)
    assert len(xs) == 100 and xs == sorted(xs) and len(set(xs)) == 100
    assert all(1 <= x <= 10006 for x in xs)
    assert stratified_a(10007, 100, seed=3) == xs
    assert sorted(stratified_a(7, 50)) == [1, 2, 3, 4, 5, 6]
    a, m = sampled_max_linear(Interval(0, 10), 10007, 50, seed=1)
    assert m == pytest.approx(linear_incomplete(a, Interval(0, 10), 10007).modulus, abs=1e-12)
    with pytest.raises(DomainError):
        stratified_a(101, 0)


def test_bilinear_examples():
    assert close(bilinear(0, Interval(0, 4), Interval(2, 5), p=101), 20)
    assert close(bilinear(1, Interval(0, 2), Interval(0, 2), p=5), -1.0 - 1.1756j, 1e-4)
    assert close(bilinear(1, Interval(0, 1), Interval(0, 1), p=7), oracles.e(1, 7))


def test_bilinear_with_coefficients_direct():
    rng = random.Random(8)
    p = 101
    I1, I2 = Interval(3, 7), Interval(50, 9)
    a1 = CoeffSeq.random_unimodular(7, rng)
    a2 = CoeffSeq([0.5, -1, 1j, 0, 0.3, 0.2, 1, -0.5j, 0.9])
    want = 0j
    for i, x in enumerate(I1.integers()):
        for j, y in enumerate(I2.integers()):
            want += a1.values[i] * a2.values[j] * oracles.e(17 * oracles.inv(x * y, p) % p, p)
    assert close(bilinear(17, I1, I2, a1, a2, p), want, 1e-9)
    with pytest.raises(DomainError):
        bilinear(1, I1, I2, a1, CoeffSeq.ones(3), p)


def test_coeffseq_sup_norm():
    with pytest.raises(DomainError):
        CoeffSeq([1, 1.1])
    CoeffSeq([1 + 1e-13])


def test_multilinear_examples():
    I = Interval(0, 2)
    assert close(multilinear(0, [I, Interval(4, 3), Interval(1, 5)], p=101), 30)
    assert close(multilinear(1, [I, I, I], p=5), -2.000 - 3.078j, 1e-3)
    for a in (1, 5, 77):
        assert close(multilinear(a, [Interval(3, 20)], p=101), linear_incomplete(a, Interval(3, 20), 101))


def test_multilinear_direct():
    rng = random.Random(2)
    for _ in range(15):
        p = rng.choice([31, 101, 1009])
        n = rng.randint(1, 4)
        intervals = [Interval(rng.randrange(0, p - 5), rng.randint(1, 4)) for _ in range(n)]
        a = rng.randrange(1, p)
        want = oracles.multilinear_sum(a, [list(I.integers()) for I in intervals], p)
        assert close(multilinear(a, intervals, p=p), want, 1e-8)


def test_multilinear_budget_and_errors():
    with pytest.raises(ResourceError):
        multilinear(1, [Interval(0, 1000)] * 4, p=2**31 - 1)
    with pytest.raises(DomainError):
        multilinear(1, [], p=7)


def test_max_multilinear_scan():
    p = 53
    intervals = [Interval(0, 3), Interval(10, 4)]
    a, m = max_multilinear_over_a(intervals, p=p)
    mags = [multilinear(b, intervals, p=p).modulus for b in range(1, p)]
    assert m == pytest.approx(max(mags), abs=1e-9)
    assert mags[a - 1] == pytest.approx(m, abs=1e-9)


def test_prime_sum_examples():
    assert close(prime_sum_power_r(0, 10, 1, 101), 4)
    assert close(prime_sum_power_r(1, 6, 1, 7), -2.0243 - 0.9749j, 1e-3)
    with pytest.raises(DomainError):
        prime_sum_power_r(1, 200, 1, 101)


def test_prime_sum_consistency_and_powers():
    rng = random.Random(5)
    for _ in range(20):
        p = rng.choice([101, 1009, 10007])
        N = rng.randint(2, p - 1)
        a = rng.randrange(1, p)
        primes = primes_upto(N)
        assert close(prime_sum_power_r(a, N, 1, p), linear_weighted(a, [oracles.inv(q, p) for q in primes], np.ones(len(primes)), p), 1e-8)
        r = rng.randint(2, 4)
        want = sum(oracles.e(a * oracles.inv(pow(q, r, p), p) % p, p) for q in primes[:60] if q <= N)
        assert close(prime_sum_power_r(a, min(N, primes[min(59, len(primes) - 1)]), r, p), want, 1e-8)


def test_complete_kloosterman_examples():
    assert close(complete_kloosterman(0, 0, 101), 100)
    assert close(complete_kloosterman(0, 1, 101), -1)
    assert close(complete_kloosterman(1, 1, 5), 2 + 2 * math.cos(4 * math.pi / 5), 1e-9)
    assert close(complete_kloosterman(3, 7, 31), oracles.kloosterman(3, 7, 31), 1e-9)


def test_weil_bound():
    rng = random.Random(0)
    for _ in range(200):
        p = rng.choice(primes_upto(10007)[1:])
        a, b = rng.randrange(1, p), rng.randrange(1, p)
        s = complete_kloosterman(a, b, p)
        assert abs(s.im) < 1e-6 * p  # real valued
        assert s.modulus <= 2 * math.sqrt(p) + 1e-6


def test_bilinear_holder_consistency():
    rng = random.Random(12)
    for _ in range(20):
        p = rng.choice([53, 89, 101])
        N1, N2 = rng.randint(1, 6), rng.randint(1, 6)
        I1 = Interval(rng.randrange(0, p - N1), N1)
        I2 = Interval(rng.randrange(0, p - N2), N2)
        a = rng.randrange(1, p)
        S = bilinear(a, I1, I2, CoeffSeq.random_unimodular(N1, rng), CoeffSeq.random_unimodular(N2, rng), p)
        rhs = p * N1 ** 4 * N2 ** 4 * count_J2k(I1, 2, p).J * count_J2k(I2, 2, p).J
        assert S.modulus ** 8 <= rhs * (1 + 1e-9)


def test_triangle_inequality_everywhere():
    rng = random.Random(4)
    p = 1009
    for _ in range(30):
        I = Interval(rng.randrange(0, 900), rng.randint(1, 100))
        a = rng.randrange(p)
        for s in (linear_incomplete(a, I, p), bilinear(a, I, I, p=p), multilinear(a, [I, Interval(0, 3), I], p=p)):
            assert s.modulus <= s.terms * (1 + 1e-6)


def test_archimedean_examples():
    assert close(archimedean_bilinear(0.0, 5, 7), 35)
    assert close(archimedean_bilinear(1.0, 1, 1), cmath.exp(0.25j))
    for xi in (0.3, 17.0, -1e6):
        assert archimedean_bilinear(xi, 1, 1).modulus == pytest.approx(1.0, abs=1e-12)
    assert list(dyadic_range(3)) == [4, 5, 6]


def test_archimedean_direct_and_bound():
    xi, N1, N2 = 12345.6, 9, 13
    want = sum(cmath.exp(1j * xi / (a * b)) for a in range(N1 + 1, 2 * N1 + 1) for b in range(N2 + 1, 2 * N2 + 1))
    got = archimedean_bilinear(xi, N1, N2)
    assert close(got, want, 1e-9)
    assert got.modulus <= N1 * N2


def test_archimedean_gamma():
    assert archimedean_gamma(100.0, 10, 10, 1, 1) == pytest.approx((1.01 * 1.01) ** 0.25, rel=1e-12)
    with pytest.raises(DomainError):
        archimedean_gamma(0.0, 10, 10, 1, 1)
    for xi in (1e3, 1e5, 3e7):
        N1, N2 = 10, 12
        ratio = xi / (N1 * N2)
        k1, k2 = choose_archimedean_k(ratio, N1), choose_archimedean_k(ratio, N2)
        f1 = ratio * N1 ** (-2 * k1) + N1 ** (2 * (k1 - 1)) / ratio
        f2 = ratio * N2 ** (-2 * k2) + N2 ** (2 * (k2 - 1)) / ratio
        assert f1 <= N1**2 + 1 and f2 <= N2**2 + 1
        g = archimedean_gamma(xi, N1, N2, k1, k2)
        assert math.isfinite(archimedean_bilinear(xi, N1, N2).modulus / (N1 * N2 * g))


@pytest.mark.parametrize("ratio,N,k", [(1.5, 10, 1), (100, 10, 2), (10**6, 10, 4), (1, 2, 1), (3.999, 2, 1), (4, 2, 2)])
def test_choose_archimedean_k(ratio, N, k):
    assert choose_archimedean_k(ratio, N) == k


def test_choose_archimedean_k_errors():
    for ratio in (0, -1, 0.5):
        with pytest.raises(DomainError):
            choose_archimedean_k(ratio, 10)


def test_complex_sum_fields():
    s = ComplexSum(3 - 4j, 10)
    assert (s.re, s.im, s.modulus, s.normalized) == (3, -4, 5, 0.5)
