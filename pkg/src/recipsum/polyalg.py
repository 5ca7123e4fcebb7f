"""Integer polynomials, Sylvester resultants and the exact identities built on them.

No floating point anywhere: coefficients are Python integers (or Fractions
where an identity is evaluated over Q).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, HypothesisError
from .modmath import divisors


class IntPoly:
    """Polynomial with integer coefficients, ``coeffs[i]`` multiplying Z**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable[int], lead: int = 1) -> "IntPoly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @classmethod
    def descending(cls, coeffs: Sequence[int]) -> "IntPoly":
        """Build from a_0 Z^(m-1) + a_1 Z^(m-2) + ... + a_(m-1)."""
        return cls(reversed(list(coeffs)))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def descending_coeffs(self) -> list[int]:
        return list(reversed(self.coeffs))

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if not self.coeffs or not other.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def mod(self, p: int) -> "IntPoly":
        return IntPoly(c % p for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPoly(0)"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c:
                terms.append(f"{c}" + ("" if i == 0 else "Z" if i == 1 else f"Z^{i}"))
        return "IntPoly(" + " + ".join(terms) + ")"


def sylvester_matrix(P: IntPoly, Q: IntPoly) -> list[list[int]]:
    """The (m+n) x (m+n) Sylvester matrix, n rows of P then m rows of Q (m = deg P, n = deg Q)."""
    m, n = P.degree, Q.degree
    size = m + n
    pd, qd = P.descending_coeffs(), Q.descending_coeffs()
    rows = []
    for i in range(n):
        rows.append([0] * i + pd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qd + [0] * (size - n - 1 - i))
    return rows


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; every division is exact."""
    M = [list(map(int, row)) for row in matrix]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def sylvester_resultant(P: IntPoly, Q: IntPoly) -> int:
    """Res(P, Q) = lc(P)^deg Q * prod Q(rho) over the roots rho of P."""
    if P.degree < 1 or Q.degree < 1:
        raise DomainError("resultant needs two non-constant polynomials")
    return bareiss_determinant(sylvester_matrix(P, Q))


def build_solution_poly(xs: Sequence[int]) -> IntPoly:
    """sum_{j<k} prod_{i!=j} (Z+x_i) - sum_{j>=k} prod_{i!=j} (Z+x_i) for a 2k-tuple.

    If sum_{j<k} 1/(s+x_j) = sum_{j>=k} 1/(s+x_j) then s is a root.  The
    Z^(2k-1) terms cancel, so the degree is at most 2k-2.
    """
    xs = [int(x) for x in xs]
    if len(xs) < 2 or len(xs) % 2:
        raise DomainError("need a tuple of even length 2k >= 2")
    k = len(xs) // 2
    linear = [IntPoly([x, 1]) for x in xs]
    # prefix/suffix products avoid recomputing each omitted-factor product
    pre = [IntPoly([1])]
    for f in linear:
        pre.append(pre[-1] * f)
    suf = [IntPoly([1])]
    for f in reversed(linear):
        suf.append(suf[-1] * f)
    suf.reverse()
    total = IntPoly()
    for j in range(2 * k):
        term = pre[j] * suf[j + 1]
        total = total + term if j < k else total - term
    return total


@dataclass
class ResultantBoundReport:
    resultant: int
    exponent: Fraction
    bound: float
    ratio: float
    condition: str


def _below_power(x: int, A, N: int, e: Fraction) -> bool:
    """Exact test of x < A * N^e for x >= 0, A > 0, rational e."""
    A = Fraction(A)
    if x == 0:
        return A > 0
    d = e.denominator
    t = e.numerator  # N^(t/d)
    lhs = Fraction(x) ** d
    rhs = A**d
    if t >= 0:
        return lhs < rhs * N**t
    return lhs * N ** (-t) < rhs


def resultant_bound_check(P: IntPoly, Q: IntPoly, N: int, sigma, theta, A) -> ResultantBoundReport:
    """Compare |Res(P, Q)| with N^((m-1+sigma)(n-1+theta) - sigma*theta).

    m and n are the coefficient counts (degree + 1).  The hypotheses
    |a_i| < A N^(i+sigma), |b_i| < A N^(i+theta) (descending coefficients) and
    one of sigma >= 0, theta >= 0, sigma + theta >= -1 are verified exactly.
    Nothing is asserted about the implied constant.
    """
    sigma, theta = Fraction(sigma), Fraction(theta)
    if N < 1:
        raise DomainError("N must be >= 1")
    if sigma >= 0:
        cond = "(i)"
    elif theta >= 0:
        cond = "(ii)"
    elif sigma + theta >= -1:
        cond = "(iii)"
    else:
        raise HypothesisError(f"sigma={sigma}, theta={theta}: none of the three conditions holds")
    for name, poly, shift in (("P", P, sigma), ("Q", Q, theta)):
        if poly.degree < 1:
            raise DomainError(f"{name} must be non-constant")
        for i, a in enumerate(poly.descending_coeffs()):
            if not _below_power(abs(a), A, N, i + shift):
                raise HypothesisError(f"coefficient a_{i}={a} of {name} is not below A*N^({i}+{shift})")
    m, n = P.degree + 1, Q.degree + 1
    exponent = (m - 1 + sigma) * (n - 1 + theta) - sigma * theta
    res = sylvester_resultant(P, Q)
    bound = float(N) ** float(exponent)
    return ResultantBoundReport(res, exponent, bound, abs(res) / bound, cond)


def _symmetric_rhs(a1, a2, b1, b2):
    # (b1 - b2 t1 - t1^3)(b1 - b2 t2 - t2^3) with t1 + t2 = a2, t1 t2 = a1
    s, q = a2, a1
    return b1 * b1 - b1 * b2 * s - b1 * (s**3 - 3 * q * s) + b2 * b2 * q + b2 * q * (s * s - 2 * q) + q**3


def identity_sides(x, y, z, a1, a2, b1, b2) -> tuple[Fraction, Fraction]:
    """Both sides of the cubic identity, without the hypothesis check."""
    x, y, z, a1, a2, b1, b2 = map(Fraction, (x, y, z, a1, a2, b1, b2))
    lhs = math.prod(t * t - a2 * t + a1 for t in (x, y, z))
    return lhs, _symmetric_rhs(a1, a2, b1, b2)


def identity_check(x, y, z, a1, a2, b1, b2) -> bool:
    """Given xyz = a1(x+y+z) + b1 and xy+yz+zx = a2(x+y+z) + b2, test
    prod (t^2 - a2 t + a1) = (b1 - r1 b2 - r1^3)(b1 - r2 b2 - r2^3) where
    r1, r2 are the roots of t^2 - a2 t + a1.  The right side is expanded in
    r1 + r2 and r1 r2 so no square root is taken.
    """
    x, y, z, a1, a2, b1, b2 = map(Fraction, (x, y, z, a1, a2, b1, b2))
    e1, e2, e3 = x + y + z, x * y + y * z + z * x, x * y * z
    if e3 != a1 * e1 + b1:
        raise HypothesisError("xyz != a1(x+y+z) + b1")
    if e2 != a2 * e1 + b2:
        raise HypothesisError("xy+yz+zx != a2(x+y+z) + b2")
    lhs, rhs = identity_sides(x, y, z, a1, a2, b1, b2)
    return lhs == rhs


def hyperbola_divisor_solutions(A: int, B: int, bound: int) -> list[tuple[int, int]]:
    """Integer (x, y) with A x y + B x + B y = 0 and |x|, |y| <= bound.

    Uses (A x + B)(A y + B) = B^2: each signed divisor d of B^2 fixes A x + B = d.
    """
    if A * B == 0:
        raise DomainError("need A*B != 0")
    B2 = B * B
    out = []
    for d0 in divisors(B2):
        for d in (d0, -d0):
            if (d - B) % A:
                continue
            e = B2 // d
            if (e - B) % A:
                continue
            x, y = (d - B) // A, (e - B) // A
            if abs(x) <= bound and abs(y) <= bound:
                out.append((x, y))
    return sorted(out)
