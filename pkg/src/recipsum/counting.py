"""Exact solution counts for reciprocal congruences and related equations.

The central object is the value distribution T(lambda) of k-fold sums of
inverses over an interval.  Two backends produce it:

* ``dense``  - a length-p count vector built by k-1 exact cyclic
  convolutions with the inverse indicator (one shifted add per element).
* ``sparse`` - sorted (residue, count) arrays built by enumerating the two
  halves of the sum and meeting in the middle; works for any p < 2**63.

All counts are exact integers; nothing on the counting path touches floats.
"""
from __future__ import annotations

import itertools
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError, HypothesisError, ResourceError
from .modmath import (
    Interval,
    RationalPair,
    as_modulus,
    inverse_array,
    mod_inverse,
    mulmod_array,
    primes_upto,
)

DENSE_P_MAX = 2**24
# Largest number of k-tuples the sparse backend will enumerate.
SPARSE_TUPLE_BUDGET = 60_000_000
# Largest N * p * (k-1) shifted-add work for the dense backend.
DENSE_WORK_BUDGET = 4_000_000_000
_CHUNK = 1 << 22


class ResidueDistribution:
    """Counts T(lambda) over residues modulo p.

    Either ``dense`` (a length-p integer vector) or sparse (``keys`` sorted
    ascending, ``counts`` positive) is supplied.
    """

    def __init__(self, p: int, *, dense=None, keys=None, counts=None):
        self.p = int(p)
        if dense is not None:
            self._dense = np.asarray(dense)
            self._keys = self._counts = None
        else:
            self._dense = None
            keys = np.asarray(keys, dtype=np.uint64)
            counts = np.asarray(counts)
            mask = counts != 0
            self._keys, self._counts = keys[mask], counts[mask]

    @property
    def backend(self) -> str:
        return "dense" if self._dense is not None else "sparse"

    @property
    def total_mass(self) -> int:
        c = self._dense if self._dense is not None else self._counts
        return _exact_sum(c)

    def count(self, lam: int) -> int:
        lam %= self.p
        if self._dense is not None:
            return int(self._dense[lam])
        i = int(np.searchsorted(self._keys, np.uint64(lam)))
        if i < len(self._keys) and int(self._keys[i]) == lam:
            return int(self._counts[i])
        return 0

    __getitem__ = count

    def support(self) -> np.ndarray:
        if self._dense is not None:
            return np.flatnonzero(self._dense).astype(np.uint64)
        return self._keys

    def nonzero_counts(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense[self._dense != 0]
        return self._counts

    def items(self) -> Iterator[tuple[int, int]]:
        for k, c in zip(self.support(), self.nonzero_counts()):
            yield int(k), int(c)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items())

    def support_size(self) -> int:
        return int(len(self.support()))

    def energy(self) -> int:
        """Sum of squared counts."""
        return _exact_sum_squares(self.nonzero_counts())

    def max_count(self, exclude: Iterable[int] = ()) -> int:
        keys = self.support()
        counts = self.nonzero_counts()
        excl = np.array(sorted({int(x) % self.p for x in exclude}), dtype=np.uint64)
        if len(excl):
            counts = counts[~np.isin(keys, excl)]
        return int(counts.max()) if len(counts) else 0

    def to_dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        if self.p > DENSE_P_MAX:
            raise ResourceError(f"p={self.p} too large for a dense vector")
        out = np.zeros(self.p, dtype=self._counts.dtype)
        out[self._keys.astype(np.int64)] = self._counts
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ResidueDistribution) or other.p != self.p:
            return NotImplemented
        a, b = self.support(), other.support()
        return bool(
            np.array_equal(a, b)
            and np.array_equal(
                self.nonzero_counts().astype(object), other.nonzero_counts().astype(object)
            )
        )

    def __repr__(self) -> str:
        return (
            f"ResidueDistribution(p={self.p}, backend={self.backend}, "
            f"support={self.support_size()}, mass={self.total_mass})"
        )


def _exact_sum(c: np.ndarray) -> int:
    # int64 arrays are only used when the total mass is below 2**62
    return int(sum(c)) if c.dtype == object else int(c.sum())


def _exact_sum_squares(c: np.ndarray) -> int:
    if len(c) == 0:
        return 0
    if c.dtype != object:
        m = int(c.max())
        if m < 2**31 and m * int(c.sum(dtype=np.uint64)) < 2**63:
            c64 = c.astype(np.int64)
            return int(np.dot(c64, c64))
    return sum(int(x) * int(x) for x in c)


@dataclass
class CountReport:
    """A solution count together with the exponent comparison it feeds."""

    J: int
    N: int
    k: int
    p: int | None
    predicted_exponent: Fraction | None
    wall_time: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def measured_exponent(self) -> float:
        """ln J / ln N, or nan when undefined."""
        if self.J < 1 or self.N < 2:
            return math.nan
        return math.log(self.J) / math.log(self.N)


# ---------------------------------------------------------------------------
# distributions


def _aggregate(values: np.ndarray, weights: np.ndarray):
    """Merge equal values, summing integer weights exactly."""
    if len(values) == 0:
        return values.astype(np.uint64), weights
    order = np.argsort(values, kind="stable")
    v = values[order]
    w = weights[order]
    starts = np.flatnonzero(np.concatenate(([True], v[1:] != v[:-1])))
    return v[starts], np.add.reduceat(w, starts)


def _combine(ka, ca, kb, cb, p: int):
    """Distribution of a + b (mod p) given the distributions of a and b."""
    pu = np.uint64(p)
    rows = max(1, _CHUNK // max(1, len(kb)))
    parts_k, parts_c = [], []
    for s in range(0, len(ka), rows):
        sums = ka[s : s + rows, None] + kb[None, :]
        sums = np.where(sums >= pu, sums - pu, sums)
        wts = ca[s : s + rows, None] * cb[None, :]
        k, c = _aggregate(sums.ravel(), wts.ravel())
        parts_k.append(k)
        parts_c.append(c)
    if len(parts_k) == 1:
        return parts_k[0], parts_c[0]
    return _aggregate(np.concatenate(parts_k), np.concatenate(parts_c))


def _count_dtype(total: int):
    return np.int64 if total < 2**62 else object


def _sparse_sum_distribution(sets: list[np.ndarray], p: int):
    total = math.prod(len(s) for s in sets)
    dt = _count_dtype(total)
    agg = [_aggregate(s.astype(np.uint64), np.ones(len(s), dtype=dt)) for s in sets]
    if len(agg) == 1:
        return agg[0]

    def fold(parts):
        k, c = parts[0]
        for kb, cb in parts[1:]:
            k, c = _combine(k, c, kb, cb, p)
        return k, c

    h = (len(agg) + 1) // 2
    left = fold(agg[:h])
    same = all(np.array_equal(sets[i], sets[0]) for i in range(len(sets)))
    right = left if same and len(agg) == 2 * h else fold(agg[h:])
    return _combine(left[0], left[1], right[0], right[1], p)


def _dense_sum_distribution(sets: list[np.ndarray], p: int):
    total = math.prod(len(s) for s in sets)
    dt = _count_dtype(total)
    T = np.zeros(p, dtype=dt)
    np.add.at(T, sets[0].astype(np.int64), 1)
    for s in sets[1:]:
        vals, mult = np.unique(s.astype(np.int64), return_counts=True)
        acc = np.zeros(p, dtype=dt)
        for v, m in zip(vals, mult):
            acc += np.roll(T, int(v)) * int(m)
        T = acc
    return T


def _choose_backend(backend: str, sizes: Sequence[int], p: int) -> str:
    if backend not in ("dense", "sparse", "auto"):
        raise DomainError(f"unknown backend {backend!r}")
    tuples = math.prod(sizes)
    dense_work = p * sum(sizes[1:])
    if backend == "auto":
        if p <= DENSE_P_MAX and (tuples > p or tuples > SPARSE_TUPLE_BUDGET):
            backend = "dense"
        else:
            backend = "sparse"
    if backend == "dense":
        if p > DENSE_P_MAX:
            raise ResourceError(f"p={p} exceeds the dense limit 2^24; use the sparse backend")
        if dense_work > DENSE_WORK_BUDGET:
            raise ResourceError(
                f"dense convolution needs {dense_work} shifted adds; use the sparse backend"
            )
    else:
        if tuples > SPARSE_TUPLE_BUDGET:
            raise ResourceError(
                f"sparse enumeration of {tuples} tuples exceeds the budget; "
                f"use the dense backend (p <= 2^24) or a smaller N or k"
            )
    return backend


def sum_distribution(sets: Sequence, p, backend: str = "auto") -> ResidueDistribution:
    """Distribution of s_1 + ... + s_m (mod p) with s_i drawn from sets[i].

    Each set is a sequence of residues (repeats count with multiplicity).
    """
    p = as_modulus(p).p
    arrays = [np.asarray([int(x) % p for x in s], dtype=np.uint64) for s in sets]
    if not arrays:
        raise DomainError("need at least one summand")
    if any(len(a) == 0 for a in arrays):
        return ResidueDistribution(p, keys=[], counts=np.zeros(0, dtype=np.int64))
    backend = _choose_backend(backend, [len(a) for a in arrays], p)
    if backend == "dense":
        return ResidueDistribution(p, dense=_dense_sum_distribution(arrays, p))
    k, c = _sparse_sum_distribution(arrays, p)
    return ResidueDistribution(p, keys=k, counts=c)


def interval_inverses(I: Interval, p) -> np.ndarray:
    """Inverses of the elements of I as a uint64 array."""
    pm = as_modulus(p)
    I.check_invertible(pm.p)
    return inverse_array(I.residues(pm.p), pm)


def mixed_inverse_sum_distribution(
    intervals: Sequence[Interval], p, backend: str = "auto"
) -> ResidueDistribution:
    """T(lambda) = #{(x_1..x_m) in I_1 x ... x I_m : sum x_i^-1 = lambda}."""
    sets = [interval_inverses(I, p) for I in intervals]
    return sum_distribution(sets, p, backend)


def inverse_sum_distribution(I: Interval, k: int, p, backend: str = "auto") -> ResidueDistribution:
    """Distribution of x_1^-1 + ... + x_k^-1 over I^k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return mixed_inverse_sum_distribution([I] * k, p, backend)


def symmetric_exponent(k: int) -> Fraction:
    """The exponent 2k^2/(k+1) of the general reciprocal energy bound."""
    return Fraction(2 * k * k, k + 1)


def count_J2k(I: Interval, k: int, p, backend: str = "auto") -> CountReport:
    """Number of 2k-tuples from I with equal k-fold inverse sums."""
    t0 = time.perf_counter()
    T = inverse_sum_distribution(I, k, p, backend)
    J = T.energy()
    return CountReport(
        J=J,
        N=I.length,
        k=k,
        p=int(p),
        predicted_exponent=symmetric_exponent(k),
        wall_time=time.perf_counter() - t0,
        extra={"backend": T.backend},
    )


def count_J2k_prime(N: int, k: int, p, backend: str = "auto") -> CountReport:
    """The symmetric inverse-sum energy with every variable a prime <= N."""
    t0 = time.perf_counter()
    pm = as_modulus(p)
    if N >= pm.p:
        raise DomainError("need N < p")
    primes = primes_upto(N)
    if not primes:
        J = 0
    else:
        inv = inverse_array(primes, pm)
        J = sum_distribution([inv] * k, pm, backend).energy()
    return CountReport(
        J=J,
        N=N,
        k=k,
        p=pm.p,
        predicted_exponent=Fraction(k),
        wall_time=time.perf_counter() - t0,
    )


def prime_energy_bound(N: int, k: int, p: int) -> Fraction:
    """The explicit bound (2k)^k (N^(2k-1)/p + 1) N^k for prime variables."""
    return Fraction((2 * k) ** k) * (Fraction(N ** (2 * k - 1), p) + 1) * N**k


def sumset_size(I: Interval, k: int, p, backend: str = "auto") -> int:
    """|k(I^-1)|, the number of residues that are k-fold inverse sums."""
    return inverse_sum_distribution(I, k, p, backend).support_size()


def _in_interval(vals: np.ndarray, I: Interval, p: int) -> np.ndarray:
    shift = (-(I.offset + 1)) % p
    if p <= 2**62:
        v = np.asarray(vals, dtype=np.uint64)
        return (v + np.uint64(shift)) % np.uint64(p) < np.uint64(I.length)
    return np.array([(int(v) + shift) % p < I.length for v in np.ravel(vals)], dtype=bool)


def inverse_set_flag(I: Interval, lam: int, p) -> bool:
    """True iff lambda is 0 or the inverse of an element of I."""
    p = as_modulus(p).p
    lam %= p
    return lam == 0 or I.contains(mod_inverse(lam, p), p)


def ternary_count(I: Interval, lam: int, p) -> tuple[int, bool]:
    """Ordered (x, y, z) in I^3 with x^-1 + y^-1 + z^-1 = lambda.

    The flag is True when lambda is 0 or lies in I^-1, the case excluded
    from the small-interval bound.
    """
    pm = as_modulus(p)
    p = pm.p
    inv = interval_inverses(I, p)
    pair = sum_distribution([inv, inv], p, "sparse")
    target = np.asarray([(lam - int(s)) % p for s in pair.support()], dtype=np.uint64)
    singles = np.sort(inv)
    hit = np.isin(target, singles)
    count = _exact_sum(pair.nonzero_counts()[hit]) if hit.any() else 0
    return count, inverse_set_flag(I, lam, p)


def max_admissible_ternary(I: Interval, p, backend: str = "auto") -> tuple[int, int | None]:
    """max over lambda outside I^-1 and 0 of the ternary count, with its argmax."""
    p = as_modulus(p).p
    T = inverse_sum_distribution(I, 3, p, backend)
    excluded = {0} | {int(v) for v in interval_inverses(I, p)}
    best, arg = 0, None
    for lam, c in T.items():
        if lam not in excluded and c > best:
            best, arg = c, lam
    return best, arg


def hyperbola_count(I: Interval, lam: int, p) -> int:
    """Ordered pairs (x, y) in I^2 with x*y = lambda (mod p)."""
    pm = as_modulus(p)
    p = pm.p
    lam %= p
    if lam == 0:
        raise DomainError("lambda must be nonzero mod p")
    xs = [x for x in I.residue_list(p) if x != 0]
    if not xs:
        return 0
    ys = mulmod_array(lam, inverse_array(xs, pm), p)
    return int(np.count_nonzero(_in_interval(ys, I, p)))


def inverse_pair_count(I: Interval, lam: int, p) -> int:
    """Ordered (x, y) in I^2 with 1/x + 1/y = lambda, via (x-mu)(y-mu) = mu^2, mu = 1/lambda."""
    pm = as_modulus(p)
    p = pm.p
    lam %= p
    if lam == 0:
        raise DomainError("lambda must be nonzero mod p")
    I.check_invertible(p)
    mu = mod_inverse(lam, p)
    shifted = [(x - mu) % p for x in I.residue_list(p)]
    # x = mu makes the left side 0 != mu^2
    shifted = [s for s in shifted if s]
    if not shifted:
        return 0
    ys = (mulmod_array(mu * mu % p, inverse_array(shifted, pm), p) + mu) % p
    return int(np.count_nonzero(_in_interval(ys, I, p)))


def triple_product_count(I: Interval, lam: int, p) -> int:
    """Ordered (x, y, z) in I^3 with x*y*z = lambda (mod p)."""
    pm = as_modulus(p)
    p = pm.p
    lam %= p
    if lam == 0:
        raise DomainError("lambda must be nonzero mod p")
    xs = [x for x in I.residue_list(p) if x]
    if not xs:
        return 0
    inv = inverse_array(xs, pm)
    scaled = mulmod_array(lam, inv, p)
    total = 0
    for a in inv:
        zs = mulmod_array(int(a), scaled, p)
        total += int(np.count_nonzero(_in_interval(zs, I, p)))
    return total


def mult_energy(I1: Interval, I2: Interval, p) -> int:
    """#{(x, y, z, t): x*y = z*t mod p, x, z in I1, y, t in I2}."""
    pm = as_modulus(p)
    p = pm.p
    I1.check_invertible(p)
    I2.check_invertible(p)
    a = np.asarray(I1.residue_list(p), dtype=object)
    b = I2.residue_list(p)
    if pm.int64_safe:
        prods = (a.astype(np.int64)[:, None] * np.asarray(b, dtype=np.int64)[None, :]) % p
    else:
        prods = np.array([[int(x) * y % p for y in b] for x in a], dtype=object)
    vals, counts = np.unique(prods.ravel().astype(np.uint64), return_counts=True)
    return _exact_sum_squares(counts.astype(np.int64))


# ---------------------------------------------------------------------------
# counts over the rationals


def _integer_sum_energy(values: Sequence[int], k: int) -> int:
    """Energy of k-fold sums of integers (sum of squared representation counts)."""
    vals = list(values)
    bound = k * max(abs(v) for v in vals)
    if bound < 2**62 and len(vals) ** k <= SPARSE_TUPLE_BUDGET:
        arr = np.asarray(vals, dtype=np.int64)
        # offset to non-negative, then reuse the modular combiner with a modulus
        # larger than any reachable sum so no reduction happens
        shift = -min(0, int(arr.min()))
        big = 2**63 - 1
        k_, c_ = _aggregate((arr + shift).astype(np.uint64), np.ones(len(arr), dtype=np.int64))
        acc_k, acc_c = k_, c_
        for _ in range(k - 1):
            acc_k, acc_c = _combine(acc_k, acc_c, k_, c_, big)
        return _exact_sum_squares(acc_c)
    dist = Counter({0: 1})
    for _ in range(k):
        nxt = Counter()
        for s, c in dist.items():
            for v in vals:
                nxt[s + v] += c
        dist = nxt
    return sum(c * c for c in dist.values())


def rational_J2k(N: int, k: int) -> int:
    """Solutions of 1/x_1+..+1/x_k = 1/x_{k+1}+..+1/x_{2k} over [1, N] in Q.

    Every 1/x is scaled by lcm(1..N), so the fractions become exact integers.
    """
    if N < 1 or k < 1:
        raise DomainError("need N >= 1 and k >= 1")
    L = math.lcm(*range(1, N + 1))
    return _integer_sum_energy([L // x for x in range(1, N + 1)], k)


def rational_shifted_count(sigma: RationalPair, N: int, r: int) -> int:
    """Solutions of sum_{i<=r} 1/(sigma+x_i) = sum_{i>r} 1/(sigma+x_i) with 1 <= x_i <= N."""
    if r < 1 or N < 1:
        raise DomainError("need r >= 1 and N >= 1")
    if not isinstance(sigma, RationalPair):
        sigma = RationalPair(Fraction(sigma).numerator, Fraction(sigma).denominator)
    u, v = sigma.u, sigma.v
    dens = [u + v * x for x in range(1, N + 1)]
    for x, d in enumerate(dens, start=1):
        if d == 0:
            raise DomainError(f"sigma = -{x} makes 1/(sigma+x) undefined")
    # 1/(sigma+x) = v/(u+vx); scale by the lcm of the denominators
    L = math.lcm(*(abs(d) for d in dens))
    return _integer_sum_energy([v * L // d for d in dens], r)


def weighted_solution_count(coeffs: Sequence, c, S: Iterable) -> int:
    """Tuples (x_1..x_r) in S^r with c_1 x_1 + ... + c_r x_r = c, exactly over Q."""
    coeffs = [Fraction(a) for a in coeffs]
    if not coeffs:
        raise DomainError("need at least one coefficient")
    if any(a == 0 for a in coeffs):
        raise DomainError("coefficients must be nonzero")
    S = [Fraction(s) for s in S]
    c = Fraction(c)

    def side(cs):
        dist = Counter({Fraction(0): 1})
        for a in cs:
            nxt = Counter()
            for s, m in dist.items():
                for x in S:
                    nxt[s + a * x] += m
            dist = nxt
        return dist

    h = len(coeffs) // 2
    left, right = side(coeffs[:h]), side(coeffs[h:])
    return sum(m * right.get(c - s, 0) for s, m in left.items())


def dioph_3I_count(a0: int, b0: int, u0: int, v0: int, N: int) -> int:
    """Ordered (x1, x2, x3) in [1, N]^3 with X_i = a0 + b0 x_i != 0 and
    u0 X1 X2 X3 = v0 b0 (X1 X2 + X2 X3 + X3 X1).

    Fixing x1, x2 leaves an equation linear in X3, so the count is O(N^2).
    """
    if b0 * u0 * v0 == 0:
        raise DomainError("need b0*u0*v0 != 0")
    for x in range(1, N + 1):
        X = a0 + b0 * x
        if X != 0 and u0 * X == v0 * b0:
            raise HypothesisError(f"u0/v0 equals b0/(a0+b0*x) at x={x}")
    w = v0 * b0
    Xs = [a0 + b0 * x for x in range(1, N + 1)]
    count = 0
    for X1 in Xs:
        if X1 == 0:
            continue
        for X2 in Xs:
            if X2 == 0:
                continue
            coef = u0 * X1 * X2 - w * (X1 + X2)
            rhs = w * X1 * X2
            if coef == 0 or rhs % coef:
                continue
            X3 = rhs // coef
            if X3 == 0 or (X3 - a0) % b0:
                continue
            if 1 <= (X3 - a0) // b0 <= N:
                count += 1
    return count


def diagonal_lower_bound(N: int, k: int) -> int:
    """Number of 2k-tuples whose second half is a permutation of the first.

    Every such tuple solves the symmetric equation, so this is a lower
    bound for J_2k: sum over multisets of (k! / prod m_i!)^2.
    """
    total = 0
    for combo in itertools.combinations_with_replacement(range(N), k):
        arrangements = math.factorial(k)
        for m in Counter(combo).values():
            arrangements //= math.factorial(m)
        total += arrangements * arrangements
    return total
