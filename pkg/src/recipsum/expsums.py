"""Direct evaluation of incomplete Kloosterman-type exponential sums.

Phases are reduced exactly in integer arithmetic before conversion to an
angle, so the only rounding is in cos/sin and in the final summation, which
uses ``math.fsum`` on the real and imaginary parts separately.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .counting import DENSE_P_MAX, interval_inverses
from .errors import DomainError, ResourceError
from .modmath import Interval, as_modulus, inverse_array, mulmod_array, primes_upto

MULTILINEAR_TERM_BUDGET = 10**9
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ComplexSum:
    """Value of an exponential sum together with its number of terms."""

    value: complex
    terms: int

    @property
    def re(self) -> float:
        return self.value.real

    @property
    def im(self) -> float:
        return self.value.imag

    @property
    def modulus(self) -> float:
        return abs(self.value)

    @property
    def normalized(self) -> float:
        """|S| / terms, the saving over the trivial bound."""
        return self.modulus / self.terms if self.terms else 0.0

    def __complex__(self) -> complex:
        return self.value

    def conjugate(self) -> "ComplexSum":
        return ComplexSum(self.value.conjugate(), self.terms)


class CoeffSeq:
    """Coefficients alpha(x) of modulus at most 1, aligned with an interval."""

    def __init__(self, values):
        self.values = np.asarray(values, dtype=complex)
        if self.values.ndim != 1:
            raise DomainError("coefficients must be one-dimensional")
        if np.any(np.abs(self.values) > 1 + 1e-12):
            raise DomainError("coefficients must satisfy |alpha| <= 1")

    @classmethod
    def ones(cls, n: int) -> "CoeffSeq":
        return cls(np.ones(n))

    @classmethod
    def random_unimodular(cls, n: int, rng: random.Random) -> "CoeffSeq":
        return cls(np.exp(1j * np.array([rng.uniform(0, TWO_PI) for _ in range(n)])))

    def __len__(self) -> int:
        return len(self.values)


def csum(z: np.ndarray) -> complex:
    """Correctly rounded sum of a complex array."""
    z = np.asarray(z, dtype=complex).ravel()
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def e_p(r, p: int) -> np.ndarray:
    """e^(2 pi i r / p) for residues r already reduced mod p."""
    r = np.asarray(r)
    if r.dtype == object:
        r = np.array([int(x) / p for x in r.ravel()]).reshape(r.shape)
        return np.exp(TWO_PI * 1j * r)
    return np.exp(TWO_PI * 1j * (r.astype(np.float64) / p))


def _coeffs(alpha, n: int) -> np.ndarray:
    if alpha is None:
        return np.ones(n, dtype=complex)
    if not isinstance(alpha, CoeffSeq):
        alpha = CoeffSeq(alpha)
    if len(alpha) != n:
        raise DomainError(f"coefficient length {len(alpha)} does not match interval length {n}")
    return alpha.values


def linear_incomplete(a: int, I: Interval, p) -> ComplexSum:
    """sum_{x in I} e_p(a x^-1)."""
    pm = as_modulus(p)
    inv = interval_inverses(I, pm)
    return ComplexSum(csum(e_p(mulmod_array(a, inv, pm.p), pm.p)), I.length)


def linear_weighted(a: int, values: Sequence[int], weights, p) -> ComplexSum:
    """sum_j w_j e_p(a v_j) for residues v_j (already inverted if needed)."""
    pm = as_modulus(p)
    v = np.asarray([int(x) % pm.p for x in values], dtype=np.uint64)
    w = np.asarray(weights, dtype=complex)
    return ComplexSum(csum(w * e_p(mulmod_array(a, v, pm.p), pm.p)), len(v))


def dft_magnitudes(weights: np.ndarray) -> np.ndarray:
    """|sum_y w(y) e_p(a y)| for every a in [0, p-1] (length-p FFT)."""
    w = np.asarray(weights)
    # the inverse transform carries the e^{+2 pi i a y / p} sign convention
    return np.abs(np.fft.ifft(w)) * len(w)


def _argmax_smallest(mags: np.ndarray, lo: int = 1) -> tuple[int, float]:
    body = mags[lo:]
    m = float(body.max())
    # conjugate frequencies agree only up to rounding
    a = int(np.flatnonzero(body >= m - 1e-9 * max(1.0, m))[0]) + lo
    return a, float(mags[a])


def max_linear_over_a(I: Interval, p) -> tuple[int, float]:
    """max over a != 0 of |sum_{x in I} e_p(a x^-1)| and the smallest maximiser.

    All p-1 frequencies at once: the sum for a is the DFT of the indicator of
    the inverse set.
    """
    pm = as_modulus(p)
    if pm.p > DENSE_P_MAX:
        raise ResourceError(
            f"p={pm.p} too large for a full scan; use sampled_max_linear with an explicit sample size"
        )
    inv = interval_inverses(I, pm).astype(np.int64)
    ind = np.zeros(pm.p)
    ind[inv] = 1.0
    return _argmax_smallest(dft_magnitudes(ind))


def sampled_max_linear(I: Interval, p, samples: int, seed: int = 0) -> tuple[int, float]:
    """Stratified random scan: one a from each of ``samples`` equal blocks of [1, p-1]."""
    pm = as_modulus(p)
    a_values = stratified_a(pm.p, samples, seed)
    best = (0, -1.0)
    for a in a_values:
        m = linear_incomplete(a, I, pm).modulus
        if m > best[1]:
            best = (a, m)
    return best


def stratified_a(p: int, samples: int, seed: int = 0) -> list[int]:
    """``samples`` values of a in [1, p-1], one per equal-width stratum."""
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = random.Random(seed)
    samples = min(samples, p - 1)
    edges = [1 + (p - 1) * i // samples for i in range(samples + 1)]
    return [rng.randrange(edges[i], edges[i + 1]) for i in range(samples)]


def bilinear(a: int, I1: Interval, I2: Interval, alpha1=None, alpha2=None, p=None) -> ComplexSum:
    """sum_{x1 in I1, x2 in I2} alpha1(x1) alpha2(x2) e_p(a x1^-1 x2^-1)."""
    pm = as_modulus(p)
    p = pm.p
    w1 = _coeffs(alpha1, I1.length)
    w2 = _coeffs(alpha2, I2.length)
    inv1 = mulmod_array(a, interval_inverses(I1, pm), p)
    inv2 = interval_inverses(I2, pm)
    if pm.int64_safe:
        ph = (np.asarray(inv1, dtype=np.int64)[:, None] * inv2.astype(np.int64)[None, :]) % p
    else:
        ph = np.array([[int(x) * int(y) % p for y in inv2] for x in inv1], dtype=object)
    return ComplexSum(csum(w1[:, None] * w2[None, :] * e_p(ph, p)), I1.length * I2.length)


def _product_distribution(intervals, coeffs, pm):
    """Weighted distribution of x_1^-1 ... x_m^-1 (mod p): (residues, complex weights)."""
    p = pm.p
    keys = np.array([1], dtype=object)
    wts = np.array([1.0 + 0j])
    for I, w in zip(intervals, coeffs):
        inv = interval_inverses(I, pm)
        if pm.int64_safe:
            prod = (keys.astype(np.int64)[:, None] * inv.astype(np.int64)[None, :]) % p
        else:
            prod = np.array([[int(k) * int(y) % p for y in inv] for k in keys], dtype=object)
        ww = (wts[:, None] * w[None, :]).ravel()
        flat = prod.ravel().astype(np.uint64) if pm.int64_safe else prod.ravel()
        uniq, idx = np.unique(flat, return_inverse=True)
        agg = np.zeros(len(uniq), dtype=complex)
        np.add.at(agg, idx.ravel(), ww)
        keys, wts = np.asarray(uniq, dtype=object), agg
    return keys, wts


def multilinear(a: int, intervals: Sequence[Interval], coeffs=None, p=None) -> ComplexSum:
    """sum over x_i in I_i of prod alpha_i(x_i) e_p(a x_1^-1 ... x_n^-1).

    For n > 2 the first n-1 variables are folded into a weighted distribution
    of partial inverse products, so the work is (support size) * N_n rather
    than the product of all lengths.
    """
    pm = as_modulus(p)
    n = len(intervals)
    if n < 1:
        raise DomainError("need at least one interval")
    if coeffs is None:
        coeffs = [None] * n
    if len(coeffs) != n:
        raise DomainError("one coefficient sequence per interval")
    ws = [_coeffs(c, I.length) for c, I in zip(coeffs, intervals)]
    terms = math.prod(I.length for I in intervals)
    if terms > MULTILINEAR_TERM_BUDGET:
        raise ResourceError(f"{terms} terms exceed the budget {MULTILINEAR_TERM_BUDGET}")
    if n == 1:
        inv = interval_inverses(intervals[0], pm)
        return ComplexSum(
            csum(ws[0] * e_p(mulmod_array(a, inv, pm.p), pm.p)), intervals[0].length
        )
    keys, wts = _product_distribution(intervals[:-1], ws[:-1], pm)
    p = pm.p
    last = interval_inverses(intervals[-1], pm)
    scaled = [a * int(k) % p for k in keys]
    if pm.int64_safe:
        ph = (np.asarray(scaled, dtype=np.int64)[:, None] * last.astype(np.int64)[None, :]) % p
    else:
        ph = np.array([[s * int(y) % p for y in last] for s in scaled], dtype=object)
    return ComplexSum(csum(wts[:, None] * ws[-1][None, :] * e_p(ph, p)), terms)


def max_multilinear_over_a(intervals: Sequence[Interval], coeffs=None, p=None) -> tuple[int, float]:
    """max over a != 0 of |multilinear(a, ...)| by one length-p FFT of the product distribution."""
    pm = as_modulus(p)
    if pm.p > DENSE_P_MAX:
        raise ResourceError(f"p={pm.p} too large for a full scan; sample a instead")
    n = len(intervals)
    coeffs = coeffs if coeffs is not None else [None] * n
    ws = [_coeffs(c, I.length) for c, I in zip(coeffs, intervals)]
    keys, wts = _product_distribution(intervals, ws, pm)
    dense = np.zeros(pm.p, dtype=complex)
    dense[np.asarray(keys, dtype=np.int64)] = wts
    return _argmax_smallest(dft_magnitudes(dense))


def prime_sum_power_r(a: int, N: int, r: int, p) -> ComplexSum:
    """sum over primes x <= N of e_p(a (x^r)^-1)."""
    pm = as_modulus(p)
    if r < 1:
        raise DomainError("r must be >= 1")
    if N >= pm.p:
        raise DomainError("need N < p")
    primes = primes_upto(N)
    if not primes:
        return ComplexSum(0j, 0)
    inv = inverse_array([pow(q, r, pm.p) for q in primes], pm)
    return ComplexSum(csum(e_p(mulmod_array(a, inv, pm.p), pm.p)), len(primes))


def complete_kloosterman(a: int, b: int, p) -> ComplexSum:
    """sum_{x=1}^{p-1} e_p(a x^-1 + b x)."""
    pm = as_modulus(p)
    p = pm.p
    xs = np.arange(1, p, dtype=np.int64) if pm.int64_safe else list(range(1, p))
    inv = inverse_array(xs, pm)
    ph = (mulmod_array(a, inv, p) + mulmod_array(b, np.asarray(xs), p)) % p
    return ComplexSum(csum(e_p(ph, p)), p - 1)


def dyadic_range(N: int) -> np.ndarray:
    """The integers n with N < n <= 2N (the meaning of n ~ N here)."""
    return np.arange(N + 1, 2 * N + 1, dtype=np.float64)


def archimedean_bilinear(xi: float, N1: int, N2: int) -> ComplexSum:
    """sum over n1 in (N1, 2N1], n2 in (N2, 2N2] of exp(i xi / (n1 n2))."""
    if N1 < 1 or N2 < 1:
        raise DomainError("need N1, N2 >= 1")
    n1 = dyadic_range(N1)
    n2 = dyadic_range(N2)
    ph = xi / (n1[:, None] * n2[None, :])
    return ComplexSum(csum(np.exp(1j * ph)), N1 * N2)


def archimedean_gamma(xi: float, N1: int, N2: int, k1: int, k2: int) -> float:
    """The saving factor gamma attached to the Archimedean bilinear sum."""
    if xi == 0:
        raise DomainError("xi must be nonzero")
    if k1 < 1 or k2 < 1:
        raise DomainError("k1, k2 must be >= 1")
    r = abs(xi) / (N1 * N2)
    f1 = r * float(N1) ** (-2 * k1) + float(N1) ** (2 * (k1 - 1)) / r
    f2 = r * float(N2) ** (-2 * k2) + float(N2) ** (2 * (k2 - 1)) / r
    return (f1 * f2) ** (1.0 / (4 * k1 * k2))


def choose_archimedean_k(ratio: float, N: int) -> int:
    """The unique k >= 1 with N^(2(k-1)) <= ratio < N^(2k), compared exactly."""
    if ratio <= 0:
        raise DomainError("ratio must be positive")
    if N < 2:
        raise DomainError("N must be >= 2")
    r = Fraction(ratio)
    if r < 1:
        raise DomainError("ratio must be >= 1 for some k >= 1 to exist")
    # start from the float estimate and correct by exact comparison
    k = max(1, int(math.log(float(r)) / (2 * math.log(N))))
    while N ** (2 * (k - 1)) > r:
        k -= 1
    while r >= N ** (2 * k):
        k += 1
    return k
