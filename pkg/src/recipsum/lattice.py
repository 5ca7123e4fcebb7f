"""Congruence lattices in dimensions 2 and 3, box enumeration, successive minima.

A lattice here is {x in Z^n : c . x = 0 (mod p)} for a coefficient vector c.
Bodies are boxes |x_j| <= B_j, so the gauge of x is max_j |x_j| / B_j.
All minima are exact ``Fraction`` values (``math.inf`` when fewer than i
independent lattice vectors fit in any dilate, which only happens for boxes
with a zero side).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ResourceError
from .modmath import as_modulus, mod_inverse

BOX_POINT_BUDGET = 10_000_000


@dataclass(frozen=True)
class LatticeSpec:
    """{x in Z^n : sum_j coeffs[j] * x[j] = 0 (mod p)}."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        p = as_modulus(self.p).p
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", tuple(int(c) % p for c in self.coeffs))
        if not 1 <= len(self.coeffs) <= 3:
            raise DomainError("only dimensions 1 to 3 are supported")

    @classmethod
    def gamma(cls, lam: int, p) -> "LatticeSpec":
        """Gamma_lambda = {(u, v) : lambda u = v (mod p)}."""
        return cls((lam, -1), int(p))

    @classmethod
    def plane(cls, c1: int, c2: int, p) -> "LatticeSpec":
        """{(u, v, w) : c1 u + c2 v + w = 0 (mod p)}."""
        return cls((c1, c2, 1), int(p))

    @property
    def dimension(self) -> int:
        return len(self.coeffs)

    def contains(self, x: Sequence[int]) -> bool:
        return sum(c * int(xi) for c, xi in zip(self.coeffs, x)) % self.p == 0

    def basis(self) -> list[tuple[int, ...]]:
        """Triangular integer basis (rows)."""
        n, p, c = self.dimension, self.p, self.coeffs
        nz = [j for j in range(n) if c[j]]
        if not nz:
            return [tuple(int(i == j) for j in range(n)) for i in range(n)]
        j = nz[-1]
        cj_inv = mod_inverse(c[j], p)
        rows = []
        for i in range(n):
            if i == j:
                continue
            row = [0] * n
            row[i] = 1
            row[j] = -c[i] * cj_inv % p
            rows.append(tuple(row))
        row = [0] * n
        row[j] = p
        rows.append(tuple(row))
        return rows

    def determinant(self) -> int:
        return abs(_det([list(map(Fraction, r)) for r in self.basis()]))

    def restrict(self, keep: Sequence[int]) -> "LatticeSpec":
        """The sublattice with every coordinate outside ``keep`` set to zero."""
        return LatticeSpec(tuple(self.coeffs[j] for j in keep), self.p)


@dataclass(frozen=True)
class Box:
    """|x_j| <= bounds[j]; symmetric, convex and compact."""

    bounds: tuple[Fraction, ...]

    def __post_init__(self):
        b = tuple(Fraction(x) for x in self.bounds)
        if any(x < 0 for x in b):
            raise DomainError("box bounds must be non-negative")
        object.__setattr__(self, "bounds", b)

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def gauge(self, x: Sequence[int]):
        """Smallest t with x in t * box (Fraction, or inf)."""
        g = Fraction(0)
        for xi, b in zip(x, self.bounds):
            if xi == 0:
                continue
            if b == 0:
                return math.inf
            g = max(g, Fraction(abs(xi)) / b)
        return g

    def contains(self, x: Sequence[int]) -> bool:
        return all(abs(xi) <= b for xi, b in zip(x, self.bounds))

    def scaled(self, t) -> "Box":
        t = Fraction(t)
        return Box(tuple(b * t for b in self.bounds))


# ---------------------------------------------------------------------------
# small exact linear algebra


def _det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum(
        (-1) ** j * m[0][j] * _det([row[:j] + row[j + 1 :] for row in m[1:]]) for j in range(n)
    )


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    d = _det(m)
    if n == 1:
        return [[1 / d]]
    cof = [
        [
            (-1) ** (i + j) * _det([r[:j] + r[j + 1 :] for k, r in enumerate(m) if k != i])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return [[cof[j][i] / d for j in range(n)] for i in range(n)]


def _rank(vectors: list[tuple[int, ...]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _weighted_dot(x, y, w) -> Fraction:
    return sum(Fraction(a * b) * wi for a, b, wi in zip(x, y, w))


def gauss_reduce(b1, b2, weights) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Lagrange-Gauss reduction for the inner product sum w_j x_j y_j."""
    if _weighted_dot(b1, b1, weights) > _weighted_dot(b2, b2, weights):
        b1, b2 = b2, b1
    while True:
        n1 = _weighted_dot(b1, b1, weights)
        m = round(_weighted_dot(b1, b2, weights) / n1)
        b2 = tuple(y - m * x for x, y in zip(b1, b2))
        if _weighted_dot(b2, b2, weights) >= n1:
            return b1, b2
        b1, b2 = b2, b1


def lll_reduce(basis, weights, delta=Fraction(3, 4)) -> list[tuple[int, ...]]:
    """Textbook LLL with exact rationals; intended for n <= 3."""
    b = [tuple(v) for v in basis]
    n = len(b)

    def gso(b):
        bs, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = _weighted_dot(b[i], bs[j], weights) / _weighted_dot(bs[j], bs[j], weights)
                v = [a - mu[i][j] * c for a, c in zip(v, bs[j])]
            bs.append(v)
        return bs, mu

    k = 1
    bs, mu = gso(b)
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = tuple(x - q * y for x, y in zip(b[k], b[j]))
                bs, mu = gso(b)
        lhs = _weighted_dot(bs[k], bs[k], weights)
        rhs = (delta - mu[k][k - 1] ** 2) * _weighted_dot(bs[k - 1], bs[k - 1], weights)
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            bs, mu = gso(b)
            k = max(k - 1, 1)
    return b


def _reduced_basis(L: LatticeSpec, bounds: Sequence[Fraction]):
    weights = [1 / (b * b) for b in bounds]
    basis = L.basis()
    if L.dimension == 1:
        return basis
    if L.dimension == 2:
        return list(gauss_reduce(basis[0], basis[1], weights))
    return lll_reduce(basis, weights)


def _points_in_scaled_box(basis, bounds, R: Fraction):
    """Every lattice point x = c . basis with |x_j| <= R * bounds[j] (bounds > 0)."""
    n = len(basis)
    M = [[Fraction(v) for v in row] for row in basis]
    Minv = _inverse(M)
    lim = [R * b for b in bounds]
    # c = x . Minv, so |c_i| <= sum_j lim_j |Minv[j][i]|
    cmax = [math.floor(sum(lim[j] * abs(Minv[j][i]) for j in range(n))) for i in range(n)]
    out = []
    last = basis[-1]
    for head in itertools.product(*(range(-m, m + 1) for m in cmax[:-1])):
        partial = [sum(c * basis[i][j] for i, c in enumerate(head)) for j in range(n)]
        lo, hi = -cmax[-1], cmax[-1]
        for j in range(n):
            # -lim_j <= partial_j + t * last_j <= lim_j
            if last[j] == 0:
                if abs(partial[j]) > lim[j]:
                    lo, hi = 1, 0
                    break
                continue
            a = (-lim[j] - partial[j]) / last[j]
            b = (lim[j] - partial[j]) / last[j]
            if a > b:
                a, b = b, a
            lo = max(lo, math.ceil(a))
            hi = min(hi, math.floor(b))
        for t in range(lo, hi + 1):
            out.append(tuple(partial[j] + t * last[j] for j in range(n)))
    return out


def _split(L: LatticeSpec, D: Box):
    if L.dimension != D.dimension:
        raise DomainError("lattice and box dimensions differ")
    keep = [j for j, b in enumerate(D.bounds) if b > 0]
    return keep


def _embed(y, keep, n):
    x = [0] * n
    for j, v in zip(keep, y):
        x[j] = v
    return tuple(x)


def box_points(L: LatticeSpec, D: Box, budget: int = BOX_POINT_BUDGET) -> tuple[int, list]:
    """All points of L inside D (origin included), sorted."""
    n = L.dimension
    keep = _split(L, D)
    expected = math.prod(2 * D.bounds[j] + 1 for j in keep) / L.p
    if expected > budget:
        raise ResourceError(f"about {float(expected):.3g} expected points exceed the budget {budget}")
    if not keep:
        return 1, [tuple([0] * n)]
    sub = L.restrict(keep)
    bounds = [D.bounds[j] for j in keep]
    basis = _reduced_basis(sub, bounds)
    pts = sorted(_embed(y, keep, n) for y in _points_in_scaled_box(basis, bounds, Fraction(1)))
    return len(pts), pts


def successive_minima(L: LatticeSpec, D: Box) -> list:
    """[lambda_1, ..., lambda_n] of the box D with respect to L, exactly.

    A reduced basis (Lagrange-Gauss in 2D, LLL in 3D, both for the
    box-weighted inner product) gives n independent vectors, so its largest
    gauge R bounds lambda_n.  All lattice points in R * D are enumerated and
    sorted by gauge; a greedy pass keeping each vector that raises the rank
    yields the minima.
    """
    n = L.dimension
    keep = _split(L, D)
    if not keep:
        return [math.inf] * n
    sub = L.restrict(keep)
    bounds = [D.bounds[j] for j in keep]
    basis = _reduced_basis(sub, bounds)
    sub_box = Box(tuple(bounds))
    R = max(sub_box.gauge(b) for b in basis)
    pts = [y for y in _points_in_scaled_box(basis, bounds, R) if any(y)]
    pts.sort(key=lambda y: (sub_box.gauge(y), y))
    minima, chosen = [], []
    for y in pts:
        if _rank(chosen + [y]) > len(chosen):
            chosen.append(y)
            minima.append(sub_box.gauge(y))
            if len(chosen) == len(keep):
                break
    return minima + [math.inf] * (n - len(minima))


def successive_minima_vectors(L: LatticeSpec, D: Box) -> list[tuple[int, ...]]:
    """Independent vectors realising the minima (same order), full-rank boxes only."""
    keep = _split(L, D)
    if len(keep) != L.dimension:
        raise DomainError("box must have positive sides")
    basis = _reduced_basis(L, D.bounds)
    R = max(D.gauge(b) for b in basis)
    pts = sorted((y for y in _points_in_scaled_box(basis, D.bounds, R) if any(y)), key=lambda y: (D.gauge(y), y))
    chosen = []
    for y in pts:
        if _rank(chosen + [y]) > len(chosen):
            chosen.append(y)
            if len(chosen) == L.dimension:
                break
    return chosen


def double_factorial_odd(n: int) -> int:
    """(2n+1)!! = 1 * 3 * ... * (2n+1)."""
    return math.prod(range(1, 2 * n + 2, 2))


@dataclass
class MinkowskiReport:
    count: int
    minima: list
    count_bound: Fraction
    minima_product: Fraction
    minima_product_bound: Fraction

    @property
    def count_pass(self) -> bool:
        return self.count <= self.count_bound

    @property
    def product_pass(self) -> bool:
        return self.minima_product <= self.minima_product_bound

    @property
    def passed(self) -> bool:
        return self.count_pass and self.product_pass

    # the field names mirror the inequality |D cap Gamma| <= rhs
    @property
    def lhs(self) -> int:
        return self.count

    @property
    def rhs(self) -> Fraction:
        return self.count_bound


def minkowski_check(L: LatticeSpec, D: Box) -> MinkowskiReport:
    """Evaluate |D cap L| <= prod (2i/lambda_i + 1) and
    prod min(lambda_i, 1) <= (2n+1)!! / |D cap L| in exact arithmetic."""
    count, _ = box_points(L, D)
    minima = successive_minima(L, D)
    n = L.dimension
    rhs = Fraction(1)
    cor = Fraction(1)
    for i, lam in enumerate(minima, start=1):
        if lam != math.inf:
            rhs *= Fraction(2 * i) / lam + 1
            cor *= min(lam, Fraction(1))
    return MinkowskiReport(count, minima, rhs, cor, Fraction(double_factorial_odd(n), count))


@dataclass
class EnergyLatticeSetup:
    lattice: LatticeSpec
    box: Box
    minima: list

    @property
    def first_minimum_small(self) -> bool:
        return self.minima[0] <= 1

    @property
    def two_short_vectors(self) -> bool:
        """mu_2 <= 1: two independent short vectors."""
        return self.minima[1] <= 1


def energy_lattice(lam: int, N: int, k: int, p) -> EnergyLatticeSetup:
    """Gamma_lambda with the box |u| <= N^k, |v| <= k N^(k-1), and its minima."""
    p = as_modulus(p).p
    if lam % p == 0:
        raise DomainError("lambda must be nonzero mod p")
    L = LatticeSpec.gamma(lam, p)
    D = Box((N**k, k * N ** (k - 1)))
    return EnergyLatticeSetup(L, D, successive_minima(L, D))


def solution_vector(xs: Sequence[int]) -> tuple[int, int]:
    """(x_1 ... x_k, sum_i prod_{j != i} x_j); lies in Gamma_lambda when sum 1/x_i = lambda."""
    prod = math.prod(xs)
    e = sum(math.prod(x for j, x in enumerate(xs) if j != i) for i in range(len(xs)))
    return prod, e


def quadratic_plane_lattice(a: int, lam: int, N: int, p) -> tuple[LatticeSpec, Box]:
    """The plane lattice with (c1, c2) = (a^2 - 2a/lambda, a - 1/lambda) and box (3N, 3N^2, N^3)."""
    p = as_modulus(p).p
    li = mod_inverse(lam, p)
    L = LatticeSpec.plane((a * a - 2 * a * li) % p, (a - li) % p, p)
    return L, Box((3 * N, 3 * N * N, N**3))


# name used by the public operation list
theorem5_lattice = energy_lattice
