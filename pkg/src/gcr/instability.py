"""Numerical function, normalized instability, and optimal cocharacters.

The numerical function of a weight support is mu(lam) = min_i <lam, chi_i>.
The normalized value mu(lam)/|lam| is never materialized as a real number:
comparisons go through (sign, mu^2, |lam|^2) with cross multiplication, and
its exact maximizer comes from the minimum-norm point p of the convex hull
of the support (the maximum equals |p|, attained on the ray through p when
p != 0; when p = 0 the support is semistable and mu <= 0 everywhere).

The norm is the standard Euclidean form on Z^r, which is invariant under
coordinate permutations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .cochar import Cocharacter
from .linalg import (QQ, BudgetExceeded, DEFAULT_BUDGET, Matrix, MatrixTuple,
                     solve_affine, rref)


@dataclass(frozen=True)
class WeightSet:
    """Finite set of distinct integer weight vectors, sorted for canonicity."""

    rank: int
    weights: tuple

    def __post_init__(self):
        ws = sorted({tuple(int(x) for x in w) for w in self.weights})
        if not ws:
            raise ValueError("empty weight set")
        for w in ws:
            if len(w) != self.rank:
                raise ValueError("weight length mismatch")
        object.__setattr__(self, "weights", tuple(ws))

    @staticmethod
    def of(weights) -> "WeightSet":
        weights = [tuple(int(x) for x in w) for w in weights]
        if not weights:
            raise ValueError("empty weight set")
        return WeightSet(len(weights[0]), tuple(weights))


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def norm_sq(v) -> int:
    return sum(int(x) * int(x) for x in v)


def support_of_tuple(h: MatrixTuple, g: Optional[Matrix] = None) -> WeightSet:
    """Weight support of a tuple for the conjugation action, in basis g.

    After rewriting each component in the basis given by the columns of g,
    the weight e_i - e_j lies in the support iff some component has a
    nonzero (i, j) entry; 0 is in the support iff a diagonal entry survives.
    """
    comps = list(h.components)
    n = h.dim
    if g is not None:
        if not g.is_square or g.rows != n or g.field != h.field:
            raise ValueError("dimension mismatch")
        gi = g.inverse()
        comps = [gi * c * g for c in comps]
    seen = set()
    for c in comps:
        for i in range(n):
            for j in range(n):
                if c.entries[i][j] != 0:
                    w = [0] * n
                    w[i] += 1
                    w[j] -= 1
                    seen.add(tuple(w))
    return WeightSet(n, tuple(seen))


def mu(w: WeightSet, lam: Sequence[int]) -> int:
    """min over the support of <lam, chi>."""
    lam = tuple(int(x) for x in lam)
    if len(lam) != w.rank:
        raise ValueError("length mismatch")
    return min(_dot(lam, chi) for chi in w.weights)


def mu_conjugated(h: MatrixTuple, lam: Cocharacter) -> int:
    """mu for a cocharacter of the conjugated torus g T g^-1."""
    if lam.n != h.dim:
        raise ValueError("dimension mismatch")
    return mu(support_of_tuple(h, lam.conjugator), lam.exponents)


def f_compare(w: WeightSet, lam1: Sequence[int], lam2: Sequence[int]) -> int:
    """Exact comparison of mu/|lam| at lam1 vs lam2: -1, 0 or +1.

    Signs first; equal signs compare mu^2 cross-multiplied by the squared
    norms, oriented so the ordering matches the real-valued quotient.
    """
    lam1 = tuple(int(x) for x in lam1)
    lam2 = tuple(int(x) for x in lam2)
    q1, q2 = norm_sq(lam1), norm_sq(lam2)
    if q1 == 0 or q2 == 0:
        raise ValueError("zero cocharacter")
    m1, m2 = mu(w, lam1), mu(w, lam2)
    s1 = (m1 > 0) - (m1 < 0)
    s2 = (m2 > 0) - (m2 < 0)
    if s1 != s2:
        return 1 if s1 > s2 else -1
    if s1 == 0:
        return 0
    diff = m1 * m1 * q2 - m2 * m2 * q1
    if diff == 0:
        return 0
    return s1 if diff > 0 else -s1


def _affinely_independent(points) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    rows = tuple(tuple(Fraction(x - y) for x, y in zip(p, base)) for p in points[1:])
    m = Matrix(QQ, len(rows), len(base), rows)
    return rref(m)[2] == len(points) - 1


def _project_origin_affine(points):
    """Coefficients c (sum 1) minimizing |sum c_i x_i| over the affine hull.

    Requires affinely independent points; the bordered Gram system is then
    nonsingular and the coefficients are unique.
    """
    k = len(points)
    rows = []
    for a in range(k):
        row = [Fraction(_dot(points[a], points[b])) for b in range(k)]
        row.append(Fraction(1))
        rows.append(tuple(row))
    rows.append(tuple([Fraction(1)] * k + [Fraction(0)]))
    m = Matrix(QQ, k + 1, k + 1, tuple(rows))
    rhs = [Fraction(0)] * k + [Fraction(1)]
    sol = solve_affine(m, rhs)
    assert sol is not None and not sol[1], "degenerate projection system"
    return sol[0][:k]


def min_norm_point(w: WeightSet, budget: int = DEFAULT_BUDGET):
    """Exact minimum-norm point of conv(weights) with a hull certificate.

    Enumerates affinely independent subsets of size at most rank+1, projects
    the origin onto each affine hull, keeps projections lying inside the
    corresponding simplex, and returns the global minimizer.  Every candidate
    lies in the hull and some subset realizes the true minimum, so the least
    candidate is it; uniqueness of the minimizer is asserted internally.

    Returns (point, coefficients over the full weight list).
    """
    pts = w.weights
    t = len(pts)
    kmax = min(t, w.rank + 1)
    total = sum(math.comb(t, k) for k in range(1, kmax + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} candidate subsets exceed budget {budget}")

    best = None  # (norm_sq, point, coeffs)
    ties = []
    for k in range(1, kmax + 1):
        for subset in itertools.combinations(range(t), k):
            chosen = [pts[i] for i in subset]
            if not _affinely_independent(chosen):
                continue
            coeffs = _project_origin_affine(chosen)
            if any(c < 0 for c in coeffs):
                continue
            point = tuple(sum(c * Fraction(x[d]) for c, x in zip(coeffs, chosen))
                          for d in range(w.rank))
            q = _dot(point, point)
            if best is None or q < best[0]:
                full = [Fraction(0)] * t
                for i, c in zip(subset, coeffs):
                    full[i] = c
                best = (q, point, tuple(full))
                ties = [point]
            elif q == best[0]:
                ties.append(point)
    assert best is not None
    # Strict convexity makes the true minimizer unique.
    assert all(p == best[1] for p in ties), "minimum-norm point not unique"
    point, coeffs = best[1], best[2]
    qq = best[0]
    assert sum(coeffs) == 1
    assert all(_dot(point, chi) - qq >= 0 for chi in pts), "optimality margin violated"
    return point, coeffs


@dataclass(frozen=True)
class InstabilityReport:
    """Verdict of the exact optimizer over one torus.

    When semistable, the hull contains the origin, mu <= 0 for every
    cocharacter, and lam_opt is absent.  Otherwise lam_opt is the primitive
    integer vector on the ray through the minimum-norm point p, and
    mu_opt^2 == value_sq * lam_norm_sq exactly.
    """

    semistable: bool
    min_point: tuple            # rational vector p
    value_sq: Fraction          # <p, p>
    hull_coeffs: tuple          # rational, one per weight, summing to 1
    margins: tuple              # <p, chi_i> - <p, p>, all >= 0
    lam_opt: Optional[tuple]    # primitive integer vector, or None
    mu_opt: Optional[int]
    lam_norm_sq: Optional[int]


def optimal_cocharacter(w: WeightSet, budget: int = DEFAULT_BUDGET) -> InstabilityReport:
    point, coeffs = min_norm_point(w, budget=budget)
    value_sq = _dot(point, point) + Fraction(0)
    margins = tuple(_dot(point, chi) - value_sq for chi in w.weights)
    if all(x == 0 for x in point):
        return InstabilityReport(True, point, value_sq, coeffs, margins,
                                 None, None, None)
    scale = math.lcm(*(x.denominator for x in point))
    ints = [int(x * scale) for x in point]
    g = math.gcd(*(abs(v) for v in ints))
    lam = tuple(v // g for v in ints)
    m = mu(w, lam)
    q = norm_sq(lam)
    assert math.gcd(*(abs(v) for v in lam)) == 1
    assert _dot(lam, point) > 0
    assert Fraction(m * m) == value_sq * q, "certificate identity violated"
    return InstabilityReport(False, point, value_sq, coeffs, margins, lam, m, q)


@dataclass(frozen=True)
class BoxOptimum:
    """Best cocharacter in an integer box, with its comparison witness."""

    lam: tuple
    mu: int
    norm_sq: int


def brute_force_optimum(w: WeightSet, box: int,
                        budget: int = DEFAULT_BUDGET) -> BoxOptimum:
    """Maximize the normalized value over nonzero integer vectors in
    [-box, box]^rank; ties resolve to the lexicographically smallest."""
    if box < 1:
        raise ValueError("box radius must be >= 1")
    r = w.rank
    count = (2 * box + 1) ** r
    if r * count > budget:
        raise BudgetExceeded(f"{r * count} enumeration steps exceed budget {budget}")
    best = None
    for cand in itertools.product(range(-box, box + 1), repeat=r):
        if all(x == 0 for x in cand):
            continue
        if best is None or f_compare(w, cand, best) > 0:
            best = cand
    return BoxOptimum(best, mu(w, best), norm_sq(best))
