"""Cocharacters of the diagonal torus of GL_n, block parabolic data, limits.

A cocharacter is an integer exponent vector (a_1, ..., a_n), optionally
conjugated by an invertible matrix g (the cocharacter a -> g diag(a^..) g^-1).
Conjugated cocharacters are carried symbolically: every consumer only needs
the entry-scaling exponents a_i - a_j, so limits are decided by exact zero
tests, never by evaluating at a small parameter value.

Entry conditions, for a diagonal cocharacter with exponents e:
  x in P   iff x[i][j] == 0 whenever e[i] <  e[j]
  x in L   iff x[i][j] == 0 whenever e[i] != e[j]
  x in R_u iff x in P and the equal-exponent diagonal blocks are identity
and conjugation under the cocharacter scales entry (i, j) by a^(e[i]-e[j]),
so the limit at a -> 0 exists iff x is in the P pattern and then zeroes every
entry with e[i] > e[j].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .linalg import Field, Matrix, MatrixTuple, Subspace

# Integer character (weight) vectors of the diagonal torus.
Character = Tuple[int, ...]


@dataclass(frozen=True)
class Cocharacter:
    exponents: tuple
    conjugator: Optional[Matrix] = None

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps:
            raise ValueError("empty exponent vector")
        g = self.conjugator
        if g is not None:
            if not g.is_square or g.rows != len(exps):
                raise ValueError("conjugator dimension mismatch")
            if not g.is_invertible():
                raise ValueError("conjugator not invertible")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def is_diagonal(self) -> bool:
        return self.conjugator is None

    def scaled(self, c: int) -> "Cocharacter":
        return Cocharacter(tuple(c * e for e in self.exponents), self.conjugator)


def pairing(lam: Cocharacter, chi: Sequence[int]) -> int:
    """The pairing <lam, chi>: dot product of exponent vectors on one torus."""
    if not lam.is_diagonal:
        raise ValueError("pairing requires an unconjugated cocharacter")
    chi = tuple(int(c) for c in chi)
    if len(chi) != lam.n:
        raise ValueError("length mismatch")
    return sum(a * c for a, c in zip(lam.exponents, chi))


@dataclass(frozen=True)
class ParabolicData:
    """Block data of P, L and R_u(P) for a diagonal cocharacter.

    order is the sorting permutation: coordinate indices by weakly decreasing
    exponent, ties broken by original index.  block_sizes groups equal
    exponents; block_exponents are the strictly decreasing sorted values.
    """

    exponents: tuple
    order: tuple
    block_sizes: tuple
    block_exponents: tuple

    @property
    def is_proper(self) -> bool:
        return len(self.block_sizes) > 1

    def _check(self, x: Matrix):
        if not x.is_square or x.rows != len(self.exponents):
            raise ValueError("dimension mismatch")

    def contains_p(self, x: Matrix) -> bool:
        self._check(x)
        e = self.exponents
        return all(x.entries[i][j] == 0
                   for i in range(x.rows) for j in range(x.cols)
                   if e[i] < e[j])

    def contains_levi(self, x: Matrix) -> bool:
        self._check(x)
        e = self.exponents
        return all(x.entries[i][j] == 0
                   for i in range(x.rows) for j in range(x.cols)
                   if e[i] != e[j])

    def contains_ru(self, x: Matrix) -> bool:
        self._check(x)
        if not self.contains_p(x):
            return False
        e = self.exponents
        one, zero = x.field.one, x.field.zero
        for i in range(x.rows):
            for j in range(x.cols):
                if e[i] == e[j] and x.entries[i][j] != (one if i == j else zero):
                    return False
        return True

    def free_ru_positions(self) -> tuple:
        """Entry positions free in R_u(P): (i, j) with e[i] > e[j], row major."""
        e = self.exponents
        n = len(e)
        return tuple((i, j) for i in range(n) for j in range(n) if e[i] > e[j])

    def enumerate_ru(self, field: Field):
        """All members of R_u(P) over a finite field, in lexicographic order
        of the free-entry values."""
        positions = self.free_ru_positions()
        n = len(self.exponents)
        for values in itertools.product(field.elements(), repeat=len(positions)):
            rows = [[field.one if i == j else field.zero for j in range(n)]
                    for i in range(n)]
            for (i, j), v in zip(positions, values):
                rows[i][j] = v
            yield Matrix(field, n, n, tuple(tuple(r) for r in rows))


def parabolic_of(lam: Cocharacter) -> ParabolicData:
    """Block parabolic data of a diagonal cocharacter.

    A conjugated cocharacter is rejected; conjugate the test matrices by
    g^-1 instead and use the diagonal core.
    """
    if not lam.is_diagonal:
        raise ValueError("parabolic data requires an unconjugated cocharacter")
    e = lam.exponents
    order = tuple(sorted(range(len(e)), key=lambda i: (-e[i], i)))
    sizes = []
    values = []
    for i in order:
        if values and e[i] == values[-1]:
            sizes[-1] += 1
        else:
            values.append(e[i])
            sizes.append(1)
    return ParabolicData(e, order, tuple(sizes), tuple(values))


def _limit_diagonal(exponents, x: Matrix) -> Optional[Matrix]:
    e = exponents
    zero = x.field.zero
    out = []
    for i in range(x.rows):
        row = []
        for j in range(x.cols):
            v = x.entries[i][j]
            if e[i] < e[j]:
                if v != 0:
                    return None
                row.append(v)
            elif e[i] > e[j]:
                row.append(zero)
            else:
                row.append(v)
        out.append(tuple(row))
    return Matrix(x.field, x.rows, x.cols, tuple(out))


def limit_conj(lam: Cocharacter, x: Matrix) -> Optional[Matrix]:
    """Limit of the conjugation action lam(a) x lam(a)^-1 as a -> 0.

    Absence of the limit is a normal outcome, reported as None.  x need not
    be invertible (module elements are fine).
    """
    if not x.is_square or x.rows != lam.n:
        raise ValueError("dimension mismatch")
    g = lam.conjugator
    if g is None:
        return _limit_diagonal(lam.exponents, x)
    gi = g.inverse()
    lim = _limit_diagonal(lam.exponents, gi * x * g)
    return None if lim is None else g * lim * gi


def limit_tuple(lam: Cocharacter, h: MatrixTuple) -> Optional[MatrixTuple]:
    """Componentwise limit; present iff every componentwise limit exists."""
    out = []
    for c in h:
        lim = limit_conj(lam, c)
        if lim is None:
            return None
        out.append(lim)
    return MatrixTuple(h.field, h.dim, tuple(out))


def cocharacter_from_flag(flag: Sequence[Subspace]) -> Cocharacter:
    """Cocharacter adapted to a flag of subspaces.

    The flag must be strictly increasing and end at the full space (a leading
    zero member is dropped).  The conjugator columns are an adapted basis
    mapping coordinate subspaces onto the flag; exponents are t-1, ..., 0,
    constant on the blocks the flag cuts out, so the flag stabilizer is the
    conjugated parabolic membership pattern.
    """
    flag = list(flag)
    if flag and flag[0].is_zero:
        flag = flag[1:]
    if not flag:
        raise ValueError("empty flag")
    field = flag[0].field
    n = flag[0].ambient
    prev_dim = 0
    for i, sub in enumerate(flag):
        if sub.ambient != n or sub.field != field:
            raise ValueError("ambient mismatch")
        if sub.dim <= prev_dim or (i > 0 and not flag[i - 1] <= sub):
            raise ValueError("flag not strictly increasing")
        prev_dim = sub.dim
    if not flag[-1].is_full:
        raise ValueError("flag does not end at the full space")

    adapted = []
    span = Subspace.zero(field, n)
    sizes = []
    for sub in flag:
        start = len(adapted)
        for row in sub.basis.entries:
            if not span.contains(row):
                adapted.append(row)
                span = span.add(Subspace.from_vectors(field, n, [row]))
        sizes.append(len(adapted) - start)
    assert len(adapted) == n

    t = len(flag)
    exps = []
    for bi, size in enumerate(sizes):
        exps.extend([t - 1 - bi] * size)
    g = Matrix(field, n, n, tuple(zip(*adapted)))
    ident = Matrix.identity(field, n)
    return Cocharacter(tuple(exps), None if g == ident else g)
