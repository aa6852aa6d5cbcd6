"""Shared test utilities: raw-tuple oracles independent of the library.

The conjugacy oracle works on plain nested int tuples mod p and scans the
whole finite general linear group, so it shares no code path with the
engine operations it checks.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from gcr.linalg import Field, GF, Matrix, MatrixTuple


# -- raw matrices over F_p ---------------------------------------------------

def rmul(p, a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(ra, cb)) % p for cb in bt)
                 for ra in a)


def rident(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _invertible_raw(p, m):
    rows = [list(r) for r in m]
    n = len(rows)
    rank = 0
    for c in range(n):
        pr = next((i for i in range(rank, n) if rows[i][c] % p), None)
        if pr is None:
            continue
        rows[rank], rows[pr] = rows[pr], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(inv * x) % p for x in rows[rank]]
        for i in range(n):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank == n


@lru_cache(maxsize=None)
def enumerate_gl(n, p):
    """All of GL_n(F_p) as raw tuples, identity first, then lexicographic."""
    out = []
    ident = rident(n)
    for flat in itertools.product(range(p), repeat=n * n):
        m = tuple(flat[i * n:(i + 1) * n] for i in range(n))
        if m != ident and _invertible_raw(p, m):
            out.append(m)
    return (ident,) + tuple(out)


def tuples_conjugate(p, hs, ks):
    """Brute-force simultaneous conjugacy over the full GL_n(F_p)."""
    n = len(hs[0])
    for s in enumerate_gl(n, p):
        if all(rmul(p, s, h) == rmul(p, k, s) for h, k in zip(hs, ks)):
            return True
    return False


def to_raw(m: Matrix):
    return tuple(tuple(int(x) for x in row) for row in m.entries)


def to_matrix(field: Field, raw) -> Matrix:
    return Matrix.make(field, raw)


def raw_tuple(h: MatrixTuple):
    return tuple(to_raw(c) for c in h.components)


# -- random generators -------------------------------------------------------

def random_invertible(rng: random.Random, field: Field, n: int) -> Matrix:
    while True:
        m = Matrix.make(field, [[rng.randrange(field.p) for _ in range(n)]
                                for _ in range(n)])
        if m.is_invertible():
            return m


def random_gl_tuple(rng: random.Random, p: int, n: int, m: int) -> MatrixTuple:
    field = GF(p)
    return MatrixTuple.make(field,
                            [random_invertible(rng, field, n) for _ in range(m)])


def random_unitriangular(rng: random.Random, field: Field, n: int) -> Matrix:
    rows = [[field.one if i == j else field.zero for j in range(n)]
            for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rng.randrange(field.p)
    return Matrix.make(field, rows)


def random_unipotent_tuple(rng: random.Random, p: int, n: int,
                           m: int) -> MatrixTuple:
    """Random tuple generating a unipotent subgroup: conjugated upper
    unitriangular generators (retries until some generator is nontrivial)."""
    field = GF(p)
    ident = Matrix.identity(field, n)
    while True:
        g = random_invertible(rng, field, n)
        gi = g.inverse()
        comps = [g * random_unitriangular(rng, field, n) * gi for _ in range(m)]
        if any(c != ident for c in comps):
            return MatrixTuple(field, n, tuple(comps))


def random_permutation_matrix(rng: random.Random, field: Field, n: int) -> Matrix:
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[field.one if j == perm[i] else field.zero for j in range(n)]
            for i in range(n)]
    return Matrix.make(field, rows)


def random_monomial_matrix(rng: random.Random, field: Field, n: int) -> Matrix:
    m = random_permutation_matrix(rng, field, n)
    rows = [[field.mul(x, field(rng.randrange(1, field.p))) for x in row]
            for row in m.entries]
    return Matrix.make(field, rows)


def random_conjugated_diagonal(rng: random.Random, field: Field, n: int) -> Matrix:
    g = random_invertible(rng, field, n)
    d = Matrix.make(field, [[rng.randrange(1, field.p) if i == j else 0
                             for j in range(n)] for i in range(n)])
    return g * d * g.inverse()


def random_weight_set(rng: random.Random, rank: int, bound: int = 4,
                      max_size: int = 6):
    from gcr.instability import WeightSet
    t = rng.randint(1, max_size)
    ws = set()
    while len(ws) < t:
        ws.add(tuple(rng.randint(-bound, bound) for _ in range(rank)))
    return WeightSet.of(sorted(ws))
