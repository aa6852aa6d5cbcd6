"""Exact linear algebra over the rationals and prime fields.

Scalars are `fractions.Fraction` over the rationals and plain ints in
[0, p) over F_p.  No floating point is used anywhere: instability values
downstream must compare exactly.  All values are immutable and every
operation is a pure function.
"""

from __future__ import annotations

import bisect
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

DEFAULT_BUDGET = 1_000_000


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True, slots=True)
class Field:
    """The rationals (p is None) or the prime field F_p with p < 2**31."""

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"modulus not prime: {self.p!r}")
            if self.p >= 2**31:
                raise ValueError(f"modulus too large: {self.p}")

    @property
    def kind(self) -> str:
        return "rationals" if self.p is None else "prime_field"

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __call__(self, x):
        """Canonicalize a scalar: Fraction in lowest terms, or residue in [0, p)."""
        if self.p is None:
            if isinstance(x, Fraction):
                return x
            if isinstance(x, (int, str)):
                return Fraction(x)
            raise TypeError(f"not a rational scalar: {x!r}")
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"not an integer residue: {x}")
            x = x.numerator
        elif isinstance(x, str):
            x = int(x, 10)
        if not isinstance(x, int):
            raise TypeError(f"not a prime-field scalar: {x!r}")
        return x % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise ValueError("division by zero")
        return 1 / Fraction(a) if self.p is None else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def fmt(self, a) -> str:
        return str(a)

    def elements(self):
        """All field elements, in residue order.  Prime fields only."""
        if self.p is None:
            raise ValueError("cannot enumerate the rationals")
        return range(self.p)


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class Matrix:
    """Immutable matrix with canonical row-major entries over a Field."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    @staticmethod
    def make(field: Field, rows_data) -> "Matrix":
        rows_data = [list(r) for r in rows_data]
        nr = len(rows_data)
        nc = len(rows_data[0]) if nr else 0
        for r in rows_data:
            if len(r) != nc:
                raise ValueError("jagged matrix")
        ent = tuple(tuple(field(x) for x in r) for r in rows_data)
        return Matrix(field, nr, nc, ent)

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        one, zero = field.one, field.zero
        return Matrix(field, n, n,
                      tuple(tuple(one if i == j else zero for j in range(n))
                            for i in range(n)))

    @staticmethod
    def zero(field: Field, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return Matrix(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> tuple:
        return self.entries[i]

    def col(self, j) -> tuple:
        return tuple(r[j] for r in self.entries)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        if self.cols == 0:
            return Matrix.zero(self.field, self.rows, other.cols)
        p = self.field.p
        bt = tuple(zip(*other.entries))
        if p is None:
            ent = tuple(tuple(sum(x * y for x, y in zip(ra, cb)) + Fraction(0)
                              for cb in bt)
                        for ra in self.entries)
        else:
            ent = tuple(tuple(sum(x * y for x, y in zip(ra, cb)) % p for cb in bt)
                        for ra in self.entries)
        return Matrix(self.field, self.rows, other.cols, ent)

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols or self.field != other.field:
            raise ValueError("shape mismatch")
        f = self.field
        ent = tuple(tuple(f.add(a, b) for a, b in zip(ra, rb))
                    for ra, rb in zip(self.entries, other.entries))
        return Matrix(self.field, self.rows, self.cols, ent)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        f = self.field
        ent = tuple(tuple(f.neg(a) for a in ra) for ra in self.entries)
        return Matrix(self.field, self.rows, self.cols, ent)

    def scaled(self, c) -> "Matrix":
        f = self.field
        c = f(c)
        ent = tuple(tuple(f.mul(c, a) for a in ra) for ra in self.entries)
        return Matrix(self.field, self.rows, self.cols, ent)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.entries)))

    def apply(self, v: Sequence) -> tuple:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        p = self.field.p
        if p is None:
            return tuple(sum(x * y for x, y in zip(row, v)) + Fraction(0)
                         for row in self.entries)
        return tuple(sum(x * y for x, y in zip(row, v)) % p for row in self.entries)

    def trace(self):
        if not self.is_square:
            raise ValueError("not square")
        t = self.field.zero
        for i in range(self.rows):
            t = self.field.add(t, self.entries[i][i])
        return t

    def rank(self) -> int:
        return rref(self)[2]

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ValueError("not square")
        n = self.rows
        ident = Matrix.identity(self.field, n)
        aug = Matrix(self.field, n, 2 * n,
                     tuple(ra + rb for ra, rb in zip(self.entries, ident.entries)))
        red, piv, _ = rref(aug)
        if piv[:n] != tuple(range(n)):
            raise ValueError("matrix not invertible")
        return Matrix(self.field, n, n, tuple(r[n:] for r in red.entries))


def rref(m: Matrix):
    """Reduced row-echelon form.

    Returns (rref matrix, pivot columns, rank).  The result is the unique
    RREF, with pivots 1 and pivot columns cleared above and below.
    """
    f = m.field
    rows = [list(r) for r in m.entries]
    nr, nc = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(nc):
        pr = next((i for i in range(r, nr) if rows[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        rows[r] = [f.mul(inv, x) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    red = Matrix(f, nr, nc, tuple(tuple(row) for row in rows))
    return red, tuple(pivots), r


def _kernel_from_rref(field: Field, red_entries, pivots, cols: int):
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [field.zero] * cols
        v[fc] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field.neg(red_entries[i][fc])
        basis.append(tuple(v))
    return tuple(basis)


def kernel_basis(m: Matrix):
    """Basis of {v : m v = 0}, one vector per free column of the RREF."""
    red, piv, _ = rref(m)
    return _kernel_from_rref(m.field, red.entries, piv, m.cols)


def solve_affine(a: Matrix, b: Sequence):
    """Solve a x = b exactly.

    Returns (particular solution, kernel basis) or None when infeasible.
    The particular solution sets all free variables to zero.
    """
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    f = a.field
    bb = [f(x) for x in b]
    aug = Matrix(f, a.rows, a.cols + 1,
                 tuple(ra + (bv,) for ra, bv in zip(a.entries, bb)))
    red, piv, _ = rref(aug)
    if a.cols in piv:
        return None
    x = [f.zero] * a.cols
    for i, pc in enumerate(piv):
        x[pc] = red.entries[i][a.cols]
    kern = _kernel_from_rref(f, red.entries, piv, a.cols)
    return tuple(x), kern


@dataclass(frozen=True)
class Subspace:
    """Subspace of k^n, canonicalized by the RREF of its basis rows.

    Equality of subspaces is therefore equality of basis rows.
    """

    ambient: int
    basis: Matrix

    @staticmethod
    def from_vectors(field: Field, ambient: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = [tuple(field(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("dimension mismatch")
        if not vectors:
            return Subspace.zero(field, ambient)
        red, piv, rank = rref(Matrix(field, len(vectors), ambient, tuple(vectors)))
        return Subspace(ambient, Matrix(field, rank, ambient, red.entries[:rank]))

    @staticmethod
    def zero(field: Field, ambient: int) -> "Subspace":
        return Subspace(ambient, Matrix(field, 0, ambient, ()))

    @staticmethod
    def full(field: Field, ambient: int) -> "Subspace":
        return Subspace(ambient, Matrix.identity(field, ambient))

    @property
    def field(self) -> Field:
        return self.basis.field

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def pivots(self) -> tuple:
        out = []
        for row in self.basis.entries:
            out.append(next(j for j, x in enumerate(row) if x != 0))
        return tuple(out)

    @property
    def is_zero(self) -> bool:
        return self.dim == 0

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    def reduce(self, v: Sequence) -> tuple:
        """Residual of v after subtracting its components along the basis."""
        f = self.field
        v = [f(x) for x in v]
        if len(v) != self.ambient:
            raise ValueError("dimension mismatch")
        for row, pc in zip(self.basis.entries, self.pivots):
            c = v[pc]
            if c != 0:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v: Sequence) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.entries)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_space(self)

    def coords(self, v: Sequence):
        """Coefficients of v in the RREF basis, or None if v is outside."""
        if not self.contains(v):
            return None
        f = self.field
        v = [f(x) for x in v]
        return tuple(v[pc] for pc in self.pivots)

    def add(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient or self.field != other.field:
            raise ValueError("ambient mismatch")
        return Subspace.from_vectors(
            self.field, self.ambient,
            list(self.basis.entries) + list(other.basis.entries))

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient != other.ambient or self.field != other.field:
            raise ValueError("ambient mismatch")
        ann = list(kernel_basis(self.basis)) + list(kernel_basis(other.basis))
        if not ann:
            return Subspace.full(self.field, self.ambient)
        m = Matrix(self.field, len(ann), self.ambient, tuple(ann))
        return Subspace.from_vectors(self.field, self.ambient, kernel_basis(m))


@dataclass(frozen=True)
class MatrixTuple:
    """Ordered invertible generators (h_1, ..., h_m) of a matrix subgroup."""

    field: Field
    dim: int
    components: tuple

    @staticmethod
    def make(field: Field, mats) -> "MatrixTuple":
        comps = []
        for m in mats:
            if not isinstance(m, Matrix):
                m = Matrix.make(field, m)
            comps.append(m)
        if not comps:
            raise ValueError("empty generator tuple")
        n = comps[0].rows
        for m in comps:
            if m.field != field:
                raise ValueError("field mismatch")
            if not m.is_square or m.rows != n:
                raise ValueError("generators must be square of equal dimension")
            if not m.is_invertible():
                raise ValueError("generator not invertible")
        return MatrixTuple(field, n, tuple(comps))

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i) -> Matrix:
        return self.components[i]

    def conjugated(self, g: Matrix) -> "MatrixTuple":
        gi = g.inverse()
        return MatrixTuple(self.field, self.dim,
                           tuple(g * c * gi for c in self.components))


def _components(gens) -> list:
    if isinstance(gens, MatrixTuple):
        return list(gens.components)
    return list(gens)


def span_basis(mats: Sequence[Matrix]) -> list:
    """First members of mats, in order, that enlarge the linear span.

    Stability and commuting conditions are linear in the acting matrix, so
    downstream solvers may restrict to such a spanning subset.
    """
    mats = _components(mats)
    if not mats:
        return []
    field = mats[0].field
    rows: list = []  # (pivot, normalized flattened row), sorted by pivot
    keep = []
    for m in mats:
        v = [x for row in m.entries for x in row]
        v = _reduce_row(field, v, rows)
        pc = next((i for i, x in enumerate(v) if x != 0), None)
        if pc is None:
            continue
        inv = field.inv(v[pc])
        nv = tuple(field.mul(inv, x) for x in v)
        bisect.insort(rows, (pc, nv))
        keep.append(m)
    return keep


def _reduce_row(field: Field, v, rows):
    v = list(v)
    for pc, row in rows:
        c = v[pc]
        if c != 0:
            v = [field.sub(a, field.mul(c, b)) for a, b in zip(v, row)]
    return v


def spin(seeds: Sequence[Sequence], gens) -> Subspace:
    """Smallest subspace containing the seeds and stable under every generator.

    Seeds and generators are processed in input order, breadth first, so the
    output is deterministic; the result is canonical RREF anyway.
    """
    mats = _components(gens)
    if not mats:
        raise ValueError("no generators")
    field = mats[0].field
    n = mats[0].cols
    for m in mats:
        if not m.is_square or m.cols != n or m.field != field:
            raise ValueError("generators must be square of equal dimension")
    seeds = [tuple(field(x) for x in s) for s in seeds]
    if not seeds:
        raise ValueError("empty seed set")
    for s in seeds:
        if len(s) != n:
            raise ValueError("dimension mismatch")
    acts = span_basis(mats)
    rows: list = []
    queue = deque(seeds)
    while queue:
        v = queue.popleft()
        r = _reduce_row(field, v, rows)
        pc = next((i for i, x in enumerate(r) if x != 0), None)
        if pc is None:
            continue
        inv = field.inv(r[pc])
        nr = tuple(field.mul(inv, x) for x in r)
        bisect.insort(rows, (pc, nr))
        for a in acts:
            queue.append(a.apply(nr))
    return Subspace.from_vectors(field, n, [row for _, row in rows])


def commutant(gens) -> tuple:
    """Canonical basis of the algebra {a : a h_i = h_i a for all i}."""
    mats = _components(gens)
    if not mats:
        raise ValueError("no generators")
    field = mats[0].field
    n = mats[0].rows
    for m in mats:
        if not m.is_square or m.rows != n or m.field != field:
            raise ValueError("generators must be square of equal dimension")
    acts = span_basis(mats)
    rows = []
    for hm in acts:
        he = hm.entries
        for i in range(n):
            for j in range(n):
                row = [field.zero] * (n * n)
                for k in range(n):
                    row[i * n + k] = field.add(row[i * n + k], he[k][j])
                    row[k * n + j] = field.sub(row[k * n + j], he[i][k])
                rows.append(tuple(row))
    m = Matrix(field, len(rows), n * n, tuple(rows))
    sol = Subspace.from_vectors(field, n * n, kernel_basis(m))
    return tuple(Matrix(field, n, n,
                        tuple(row[i * n:(i + 1) * n] for i in range(n)))
                 for row in sol.basis.entries)
