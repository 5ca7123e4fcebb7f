"""Prime-field and elementary number-theory primitives.

Everything here is exact integer arithmetic.  Python integers are unbounded,
so products of two residues below 2**63 never overflow; the numpy helpers
switch to object arrays whenever a product could leave the int64 range.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError

P_MAX = 2**63

# Deterministic for every n < 3.3e24, which covers the whole supported range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Largest p for which p*p still fits in a signed 64-bit integer.
_INT64_SAFE_P = 3037000499


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test, exact for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    if n == 2:
        return 2
    if n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 2
    return n


def prev_prime(n: int) -> int:
    """Largest prime <= n."""
    if n < 2:
        raise DomainError("no prime below 2")
    while not is_prime(n):
        n -= 1
    return n


def nearest_prime(x: float) -> int:
    """Prime closest to x; ties go to the smaller prime."""
    lo_start = max(2, math.floor(x))
    below = prev_prime(lo_start)
    above = next_prime(math.ceil(x))
    return below if x - below <= above - x else above


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime 3 <= p < 2**63, validated at construction."""

    p: int

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise DomainError(f"modulus must be an integer, got {p!r}")
        p = int(p)
        object.__setattr__(self, "p", p)
        if not 3 <= p < P_MAX:
            raise DomainError(f"modulus {p} outside [3, 2^63)")
        if not is_prime(p):
            raise DomainError(f"modulus {p} is not prime")

    def __int__(self) -> int:
        return self.p

    def __index__(self) -> int:
        return self.p

    def mul(self, x: int, y: int) -> int:
        return x * y % self.p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def inv(self, x: int) -> int:
        return mod_inverse(x, self)

    @property
    def int64_safe(self) -> bool:
        """True when products of two residues fit in int64."""
        return self.p <= _INT64_SAFE_P


@lru_cache(maxsize=256)
def _cached_modulus(p: int) -> PrimeModulus:
    return PrimeModulus(p)


def as_modulus(p) -> PrimeModulus:
    """Coerce an int (or a PrimeModulus) to a validated PrimeModulus."""
    if isinstance(p, PrimeModulus):
        return p
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise DomainError(f"modulus must be an integer, got {p!r}")
    return _cached_modulus(int(p))


@dataclass(frozen=True)
class Interval:
    """The residues {a+1, ..., a+N}, reduced modulo p on use.

    ``offset`` is a and ``length`` is N.
    """

    offset: int
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise DomainError(f"interval length must be >= 1, got {self.length}")
        if self.offset < 0:
            raise DomainError(f"interval offset must be >= 0, got {self.offset}")

    @classmethod
    def initial(cls, N: int) -> "Interval":
        """The interval [1, N]."""
        return cls(0, N)

    @property
    def start(self) -> int:
        return self.offset + 1

    def __len__(self) -> int:
        return self.length

    def integers(self) -> range:
        return range(self.offset + 1, self.offset + self.length + 1)

    def residues(self, p) -> np.ndarray:
        p = int(p)
        return (np.arange(self.offset + 1, self.offset + self.length + 1, dtype=object) % p).astype(
            np.uint64
        )

    def residue_list(self, p) -> list[int]:
        p = int(p)
        return [x % p for x in self.integers()]

    def contains(self, x: int, p) -> bool:
        p = int(p)
        return (x - self.offset - 1) % p < self.length

    def contains_zero(self, p) -> bool:
        return self.contains(0, p)

    def check_invertible(self, p) -> None:
        """Raise DomainError unless every element is a unit mod p."""
        p = int(p)
        if self.length > p - 1 or self.contains_zero(p):
            raise DomainError(
                f"interval [{self.start}, {self.offset + self.length}] contains 0 mod {p}"
            )


@dataclass(frozen=True)
class RationalPair:
    """u/v in lowest terms with v > 0."""

    u: int
    v: int

    def __post_init__(self):
        u, v = int(self.u), int(self.v)
        if v == 0:
            raise DomainError("denominator must be nonzero")
        if v < 0:
            u, v = -u, -v
        g = math.gcd(u, v)
        object.__setattr__(self, "u", u // g)
        object.__setattr__(self, "v", v // g)

    def as_fraction(self) -> Fraction:
        return Fraction(self.u, self.v)

    def residue(self, p) -> int:
        p = int(p)
        return self.u * mod_inverse(self.v % p, p) % p


def mod_inverse(x: int, p) -> int:
    """Inverse of x modulo the prime p, in [1, p-1]."""
    p = int(as_modulus(p))
    x %= p
    if x == 0:
        raise DomainError("zero has no inverse")
    return pow(x, -1, p)


def batch_inverse(xs: Sequence[int], p) -> list[int]:
    """Invert many residues with a single modular inversion.

    Montgomery's trick: prefix products, one inversion of the total, then a
    backward sweep.  Uses 3(n-1) multiplications in total.
    """
    p = int(as_modulus(p))
    xs = [int(x) % p for x in xs]
    if not xs:
        return []
    for i, x in enumerate(xs):
        if x == 0:
            raise DomainError(f"entry at index {i} is zero mod {p}; zero has no inverse")
    n = len(xs)
    prefix = [0] * n
    acc = 1
    for i, x in enumerate(xs):
        acc = acc * x % p
        prefix[i] = acc
    inv = pow(acc, -1, p)
    out = [0] * n
    for i in range(n - 1, 0, -1):
        out[i] = inv * prefix[i - 1] % p
        inv = inv * xs[i] % p
    out[0] = inv
    return out


def inverse_array(xs, p) -> np.ndarray:
    """Vectorised inverses as a uint64 array.

    Fermat exponentiation on int64 lanes when p*p fits, Montgomery batch
    inversion otherwise.
    """
    pm = as_modulus(p)
    p = pm.p
    arr = np.asarray(xs, dtype=object) % p if not isinstance(xs, np.ndarray) else xs
    if pm.int64_safe:
        base = np.asarray(arr, dtype=np.int64) % p
        if np.any(base == 0):
            idx = int(np.flatnonzero(base == 0)[0])
            raise DomainError(f"entry at index {idx} is zero mod {p}; zero has no inverse")
        result = np.ones_like(base)
        e = p - 2
        while e:
            if e & 1:
                result = result * base % p
            base = base * base % p
            e >>= 1
        return result.astype(np.uint64)
    return np.array(batch_inverse([int(x) for x in np.asarray(arr).ravel()], p), dtype=np.uint64)


def mulmod_array(a: int, xs: np.ndarray, p: int) -> np.ndarray:
    """(a * xs) mod p elementwise, exact for any p < 2**63."""
    a %= p
    if p <= _INT64_SAFE_P:
        return (np.asarray(xs, dtype=np.int64) * a) % p
    return np.array([a * int(x) % p for x in np.asarray(xs).ravel()], dtype=object).reshape(
        np.shape(xs)
    )


def rational_reconstruct(j: int, p) -> RationalPair:
    """Write j = u/v (mod p) with |u| <= floor(sqrt p) and 1 <= v <= floor(sqrt p).

    The extended Euclidean remainder sequence of (p, j) is run until the first
    remainder at most floor(sqrt p); that pair together with its predecessor
    spans the lattice {(u, v): u = j v mod p}.  The pair returned is the
    canonical one: least v, then least |u|, then u >= 0.
    """
    p = int(as_modulus(p))
    j %= p
    s = math.isqrt(p)
    r0, t0, r1, t1 = p, 0, j, 1
    while r1 > s:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    b1, b2 = _lagrange_reduce((r1, t1), (r0, t0))
    return _canonical_small_pair(b1, b2, s, p)


def _lagrange_reduce(b1, b2):
    """Lagrange-Gauss reduction of an integer basis in the Euclidean norm."""

    def dot(x, y):
        return x[0] * y[0] + x[1] * y[1]

    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        n1 = dot(b1, b1)
        m = _round_div(dot(b1, b2), n1)
        b2 = (b2[0] - m * b1[0], b2[1] - m * b1[1])
        if dot(b2, b2) >= n1:
            return b1, b2
        b1, b2 = b2, b1


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0."""
    return (2 * a + b) // (2 * b)


def _canonical_small_pair(b1, b2, s: int, p: int) -> RationalPair:
    # Points x = c1*b1 + c2*b2 with |u| <= s, 1 <= v <= s.  Since det = +-p and
    # the basis is reduced, |c2| <= |b1| * |x| / p is tiny; scan c2 and solve the
    # linear constraints on c1 exactly.
    det = abs(b1[0] * b2[1] - b1[1] * b2[0])
    norm_b1 = math.isqrt(b1[0] ** 2 + b1[1] ** 2) + 1
    c2_max = (norm_b1 * 2 * (s + 1)) // det + 1
    best = None
    for c2 in range(-c2_max, c2_max + 1):
        base_u, base_v = c2 * b2[0], c2 * b2[1]
        lo, hi = -(10**40), 10**40
        for coef, base, low, high in ((b1[0], base_u, -s, s), (b1[1], base_v, 1, s)):
            # low <= base + coef*c1 <= high
            if coef == 0:
                if not low <= base <= high:
                    lo, hi = 1, 0
                continue
            a1, a2 = low - base, high - base
            if coef < 0:
                a1, a2, coef = -a2, -a1, -coef
            lo = max(lo, -((-a1) // coef))
            hi = min(hi, a2 // coef)
        if lo > hi:
            continue
        for c1 in _candidate_c1(lo, hi, b1, base_u, base_v):
            u, v = base_u + c1 * b1[0], base_v + c1 * b1[1]
            key = (v, abs(u), u < 0)
            if best is None or key < best[0]:
                best = (key, u, v)
    if best is None:  # pragma: no cover - existence is guaranteed by pigeonhole
        raise AssertionError("no reconstruction found")
    return RationalPair(best[1], best[2])


def _candidate_c1(lo, hi, b1, base_u, base_v):
    # v is linear in c1, so the least v sits at an endpoint; when b1 has no v
    # component every c1 gives the same v and |u| is minimised near -base_u/b1_u.
    if b1[1] != 0:
        return {lo, hi}
    c = -base_u / b1[0] if b1[0] else lo
    cands = {lo, hi}
    for x in (math.floor(c), math.ceil(c)):
        if lo <= x <= hi:
            cands.add(x)
    return cands


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of a positive integer."""
    if n < 1:
        raise DomainError("factorize needs a positive integer")
    from sympy import factorint

    return {int(q): int(e) for q, e in factorint(n).items()}


def divisor_count(n: int) -> int:
    """Number of positive divisors of n."""
    if n < 1:
        raise DomainError(f"divisor_count needs n >= 1, got {n}")
    return math.prod(e + 1 for e in factorize(n).values())


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n."""
    out = [1]
    for q, e in factorize(abs(n)).items():
        out = [d * q**i for d in out for i in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    result = n
    for q in factorize(n):
        result -= result // q
    return result


def prime_sieve(N: int) -> np.ndarray:
    """Boolean array is_prime[0..N]."""
    if N < 0:
        raise DomainError("N must be >= 0")
    flags = np.ones(N + 1, dtype=bool)
    flags[: min(2, N + 1)] = False
    for q in range(2, math.isqrt(N) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return flags


def primes_upto(N: int) -> list[int]:
    """Ascending list of the primes <= N."""
    return [int(q) for q in np.flatnonzero(prime_sieve(N))]


def smooth_count(x: int, y: int) -> int:
    """Exact Psi(x, y): the number of n <= x with no prime factor above y.

    Every n > 1 counted by Psi(m, p_i) is p_j * n' with p_j its largest prime
    factor, so Psi(m, p_i) = 1 + sum_{j <= i} Psi(m // p_j, p_j).  The
    recursion depth is at most log2(x); once every prime <= m is allowed the
    answer is m itself.
    """
    if x < 1 or y < 1:
        raise DomainError("smooth_count needs x >= 1 and y >= 1")
    x = int(x)
    primes = primes_upto(min(int(y), x))
    if not primes:
        return 1
    after_last = next_prime(primes[-1] + 1)

    @lru_cache(maxsize=None)
    def psi(m: int, i: int) -> int:
        if m < 2:
            return m
        i = min(i, bisect.bisect_right(primes, m) - 1)
        if i < 0:
            return 1
        nxt = primes[i + 1] if i + 1 < len(primes) else after_last
        if nxt > m:
            return m
        return 1 + sum(psi(m // primes[j], j) for j in range(i + 1))

    return psi(x, len(primes) - 1)


def prime_count_ap(x: int, q: int, a: int) -> int:
    """pi(x; q, a): the number of primes <= x congruent to a mod q."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) != 1")
    if x < 2:
        return 0
    primes = np.flatnonzero(prime_sieve(int(x)))
    return int(np.count_nonzero(primes % q == a % q))


def inverse_set(values: Iterable[int], p) -> list[int]:
    """Inverses of the given residues, preserving order."""
    return batch_inverse(list(values), p)
