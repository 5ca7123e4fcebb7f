import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from recipsum import counting
from recipsum.counting import (
    ResidueDistribution,
    count_J2k,
    count_J2k_prime,
    dioph_3I_count,
    hyperbola_count,
    inverse_pair_count,
    inverse_sum_distribution,
    max_admissible_ternary,
    mixed_inverse_sum_distribution,
    mult_energy,
    prime_energy_bound,
    rational_J2k,
    rational_shifted_count,
    sumset_size,
    symmetric_exponent,
    ternary_count,
    triple_product_count,
    weighted_solution_count,
)
from recipsum.errors import DomainError, HypothesisError, ResourceError
from recipsum.modmath import Interval, RationalPair, next_prime


def test_distribution_examples():
    assert inverse_sum_distribution(Interval(0, 3), 1, 7).as_dict() == {1: 1, 4: 1, 5: 1}
    assert inverse_sum_distribution(Interval(0, 3), 2, 7).as_dict() == {2: 3, 5: 2, 6: 2, 1: 1, 3: 1}
    T = inverse_sum_distribution(Interval(0, 20), 1, 101)
    assert T.support_size() == 20 and T.max_count() == 1


def test_distribution_rejects_zero():
    with pytest.raises(DomainError):
        inverse_sum_distribution(Interval(5, 3), 2, 7)
    with pytest.raises(DomainError):
        inverse_sum_distribution(Interval(0, 3), 0, 7)


@pytest.mark.parametrize("backend", ["dense", "sparse"])
@pytest.mark.parametrize("p,a,N,k", [(7, 0, 3, 2), (13, 4, 5, 3), (101, 30, 9, 2), (1009, 500, 12, 3)])
def test_distribution_matches_counter(backend, p, a, N, k):
    T = inverse_sum_distribution(Interval(a, N), k, p, backend)
    assert T.backend == backend
    assert T.as_dict() == dict(oracles.inverse_sum_counter(oracles.interval(a, N), k, p))
    assert T.total_mass == N**k


def test_backends_agree_randomised():
    rng = random.Random(11)
    primes = [101, 1009, 10007, 65537, 1048573]
    for _ in range(40):
        p = rng.choice(primes)
        N = rng.randint(1, 25)
        a = rng.randrange(0, p - N)
        k = rng.randint(1, 3)
        d = inverse_sum_distribution(Interval(a, N), k, p, "dense")
        s = inverse_sum_distribution(Interval(a, N), k, p, "sparse")
        assert d == s
        assert d.total_mass == s.total_mass == N**k
        assert d.energy() == s.energy()


def test_sparse_handles_huge_modulus():
    p = next_prime(2 * 10**18)
    T = inverse_sum_distribution(Interval(0, 10), 3, p, "sparse")
    assert T.total_mass == 1000
    with pytest.raises(ResourceError):
        inverse_sum_distribution(Interval(0, 10), 3, p, "dense")


def test_sparse_budget():
    with pytest.raises(ResourceError):
        inverse_sum_distribution(Interval(0, 3000), 3, next_prime(10**15), "sparse")


def test_count_J2k_examples():
    r = count_J2k(Interval(0, 3), 2, 7)
    assert r.J == 19
    for N in (1, 5, 17):
        assert count_J2k(Interval(0, N), 1, 101).J == N
    assert symmetric_exponent(2) == Fraction(8, 3)
    assert symmetric_exponent(3) == Fraction(9, 2)
    assert r.predicted_exponent == Fraction(8, 3)
    assert r.measured_exponent == pytest.approx(math.log(19) / math.log(3), abs=1e-12)


def test_measured_exponent_undefined_for_N1():
    assert math.isnan(count_J2k(Interval(0, 1), 2, 7).measured_exponent)


@pytest.mark.parametrize("p", [7, 11, 13])
def test_count_J2k_naive_small_grid(p):
    for N in range(1, p):
        for a in range(0, p - N):
            vals = oracles.interval(a, N)
            for k in (1, 2):
                assert count_J2k(Interval(a, N), k, p).J == oracles.naive_J2k(vals, k, p)


def test_diagonal_lower_bound():
    for p in (101, 1009):
        for N in (3, 8, 15):
            for k in (1, 2, 3):
                J = count_J2k(Interval(7, N), k, p).J
                assert J >= N**k
                assert J >= counting.diagonal_lower_bound(N, k)


def test_diagonal_lower_bound_is_permutation_count():
    # number of ordered pairs of k-tuples that are permutations of each other
    for N in range(1, 6):
        for k in (1, 2, 3):
            tuples = list(itertools.product(range(N), repeat=k))
            want = sum(1 for s in tuples for t in tuples if sorted(s) == sorted(t))
            assert counting.diagonal_lower_bound(N, k) == want


@pytest.mark.parametrize("N,k,p,expected", [(10, 1, 101, 4), (6, 2, 101, 15), (1, 2, 7, 0)])
def test_count_J2k_prime_examples(N, k, p, expected):
    assert count_J2k_prime(N, k, p).J == expected


def test_prime_energy_bound_holds_small():
    for p in (101, 1009, 10007):
        for N in (10, 30, 60):
            for k in (1, 2, 3):
                if N >= p:
                    continue
                J = count_J2k_prime(N, k, p).J
                primes = oracles.primes_upto(N)
                assert J == oracles.naive_J2k(primes, k, p) if len(primes) ** k <= 4000 else True
                assert J <= prime_energy_bound(N, k, p)


@pytest.mark.parametrize("lam,expected", [(86, (6, False)), (3, (1, False)), (0, (0, True))])
def test_ternary_examples(lam, expected):
    assert ternary_count(Interval(0, 3), lam, 101) == expected


def test_ternary_matches_brute_force_and_flag():
    p = 31
    I = Interval(2, 6)
    vals = oracles.interval(2, 6)
    invs = {oracles.inv(x, p) for x in vals}
    for lam in range(p):
        cnt, flag = ternary_count(I, lam, p)
        assert cnt == oracles.ternary(vals, lam, p)
        assert flag == (lam == 0 or lam in invs)


def test_max_admissible_ternary():
    p, I = 101, Interval(0, 6)
    best, lam = max_admissible_ternary(I, p)
    vals = oracles.interval(0, 6)
    excluded = {0} | {oracles.inv(x, p) for x in vals}
    brute = max(oracles.ternary(vals, l, p) for l in range(p) if l not in excluded)
    assert best == brute
    assert lam not in excluded and oracles.ternary(vals, lam, p) == best


@pytest.mark.parametrize("I,k,p,expected", [(Interval(0, 3), 1, 7, 3), (Interval(0, 3), 2, 7, 5), (Interval(0, 6), 2, 7, 7)])
def test_sumset_size_examples(I, k, p, expected):
    assert sumset_size(I, k, p) == expected


@pytest.mark.parametrize("N,lam,expected", [(3, 2, 3), (3, 6, 2), (1, 1, 1)])
def test_hyperbola_examples(N, lam, expected):
    assert hyperbola_count(Interval(0, N), lam, 7) == expected


def test_hyperbola_and_inverse_pairs_brute():
    for p, shapes in ((13, ((0, 10), (1, 11), (5, 7))), (101, ((0, 10), (40, 12), (93, 7)))):
        for a, N in shapes:
            vals = oracles.interval(a, N)
            I = Interval(a, N)
            for lam in range(1, p):
                assert hyperbola_count(I, lam, p) == oracles.pairs_with(vals, p, lambda x, y: (x * y - lam) % p == 0)
                assert inverse_pair_count(I, lam, p) == oracles.pairs_with(
                    vals, p, lambda x, y: (oracles.inv(x, p) + oracles.inv(y, p) - lam) % p == 0
                )


@pytest.mark.parametrize("N,lam,expected", [(3, 2, 3), (1, 2, 1), (2, 1, 1)])
def test_inverse_pair_examples(N, lam, expected):
    assert inverse_pair_count(Interval(0, N), lam, 7) == expected


def test_zero_lambda_rejected():
    for f in (hyperbola_count, inverse_pair_count, triple_product_count):
        with pytest.raises(DomainError):
            f(Interval(0, 3), 0, 7)


def test_triple_product_examples():
    # (1,1,1) and (2,2,2): 8 = 1 mod 7
    assert triple_product_count(Interval(0, 2), 1, 7) == 2
    assert triple_product_count(Interval(0, 1), 1, 5) == 1
    assert triple_product_count(Interval(0, 2), 2, 7) == 3


def test_triple_product_brute():
    p = 37
    for a, N in ((0, 6), (10, 5)):
        vals = oracles.interval(a, N)
        for lam in range(1, p):
            want = sum(1 for t in itertools.product(vals, repeat=3) if (t[0] * t[1] * t[2] - lam) % p == 0)
            assert triple_product_count(Interval(a, N), lam, p) == want


def test_mult_energy():
    assert mult_energy(Interval(0, 2), Interval(0, 2), 7) == 6
    for N in (1, 4, 9):
        assert mult_energy(Interval(0, 1), Interval(0, N), 101) == N
    rng = random.Random(5)
    for _ in range(10):
        p = rng.choice([31, 101])
        I1 = Interval(rng.randrange(0, p - 6), rng.randint(1, 5))
        I2 = Interval(rng.randrange(0, p - 6), rng.randint(1, 5))
        m = mult_energy(I1, I2, p)
        assert m == oracles.mult_energy(list(I1.integers()), list(I2.integers()), p)
        assert m >= I1.length * I2.length


@pytest.mark.parametrize("N,k,expected", [(1, 2, 1), (2, 2, 6), (3, 1, 3)])
def test_rational_J2k_examples(N, k, expected):
    assert rational_J2k(N, k) == expected


def test_rational_J2k_matches_fraction_hash():
    for N in range(1, 9):
        for k in (1, 2, 3):
            assert rational_J2k(N, k) == oracles.rational_J2k(N, k)


def test_rational_transfer_small():
    for N in (4, 6, 8):
        p = next_prime(6 * N**6 + 1)
        for k in (2, 3):
            assert count_J2k(Interval(0, N), k, p).J == rational_J2k(N, k)


def test_rational_shifted_count():
    assert rational_shifted_count(RationalPair(0, 1), 3, 1) == 3
    assert rational_shifted_count(RationalPair(0, 1), 2, 2) == 6
    assert rational_shifted_count(RationalPair(1, 2), 2, 1) == 2
    with pytest.raises(DomainError):
        rational_shifted_count(RationalPair(-2, 1), 5, 1)
    sigma = Fraction(-1, 3)
    vals = [1 / (sigma + x) for x in range(1, 6)]
    c = {}
    for t in itertools.product(vals, repeat=2):
        s = sum(t)
        c[s] = c.get(s, 0) + 1
    assert rational_shifted_count(RationalPair(-1, 3), 5, 2) == sum(v * v for v in c.values())


def test_weighted_solution_count():
    assert weighted_solution_count([1, -1], 0, {1, 2, 3}) == 3
    assert weighted_solution_count([1, 1], 2, {1, 2}) == 1
    assert weighted_solution_count([2, -1], 0, {1, 2, 4}) == 2
    with pytest.raises(DomainError):
        weighted_solution_count([], 0, {1})
    rng = random.Random(2)
    S = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(7)]
    for _ in range(20):
        cs = [Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 2)) for _ in range(rng.randint(1, 4))]
        rhs = Fraction(rng.randint(-5, 5))
        want = sum(1 for t in itertools.product(set(S), repeat=len(cs)) if sum(c * x for c, x in zip(cs, t)) == rhs)
        assert weighted_solution_count(cs, rhs, S) == want


def test_weighted_count_bounded_by_symmetric_energy():
    # T_2k <= J_2k for the equation c_1 x_1 + ... + c_2k x_2k = c over the set S
    rng = random.Random(9)
    p = 101
    for _ in range(50):
        N = rng.randint(2, 8)
        S = [Fraction(oracles.inv(x, p)) for x in range(1, N + 1)]
        k = rng.choice([1, 2])
        cs = [rng.choice([1, -1, 2, 3]) for _ in range(2 * k)]
        T = weighted_solution_count(cs, rng.randint(-3, 3), S)
        J = counting._integer_sum_energy([int(s) for s in S], k)
        assert T <= J


def test_dioph_3I_count():
    assert dioph_3I_count(0, 1, 3, 1, 3) == 1
    assert dioph_3I_count(0, 1, 5, 1, 10) == 0
    with pytest.raises(HypothesisError, match="x=1"):
        dioph_3I_count(0, 1, 1, 1, 6)
    # brute force on a shifted family
    a0, b0, u0, v0, N = 2, 3, 7, 2, 9
    want = 0
    for xs in itertools.product(range(1, N + 1), repeat=3):
        L = [a0 + b0 * x for x in xs]
        if any(l == 0 for l in L):
            continue
        if u0 * L[0] * L[1] * L[2] == v0 * b0 * (L[0] * L[1] + L[1] * L[2] + L[0] * L[2]):
            want += 1
    assert dioph_3I_count(a0, b0, u0, v0, N) == want


def test_holder_and_sumset_inequalities_mixed_intervals():
    rng = random.Random(4)
    for _ in range(30):
        p = rng.choice([31, 53, 101])
        n = rng.choice([1, 2])
        intervals = []
        for _ in range(2 * n):
            N = rng.randint(1, 8)
            intervals.append(Interval(rng.randrange(0, p - N), N))
        T = mixed_inverse_sum_distribution(intervals[:n], p)
        T2n = mixed_inverse_sum_distribution(intervals, p)
        Js = [count_J2k(I, n, p).J for I in intervals]
        # T_2n(lambda)^(2n) <= prod J_i, exact integers
        assert T2n.max_count() ** (2 * n) <= math.prod(Js)
        assert T.total_mass == math.prod(I.length for I in intervals[:n])


def test_residue_distribution_api():
    d = ResidueDistribution(7, dense=np.array([0, 2, 0, 1, 0, 0, 3]))
    assert d.total_mass == 6 and d.support_size() == 3 and d.energy() == 14
    assert d[6] == 3 and d.count(2) == 0
    assert d.max_count(exclude={6}) == 2
    s = ResidueDistribution(7, keys=np.array([1, 3, 6], dtype=np.uint64), counts=np.array([2, 1, 3]))
    assert s == d and list(s.items()) == [(1, 2), (3, 1), (6, 3)]
    assert np.array_equal(s.to_dense(), d.to_dense())
