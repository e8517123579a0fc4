"""Exact rank and nullspace computations over Q, plus modular rank.

Matrices are lists of rows with int or Fraction entries.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

PRIMES = (1073741827, 2147483647)  # both > 2**30


def _integer_rows(rows):
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def rank_exact(rows) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [r for r in _integer_rows(rows) if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        piv = m[rank][col]
        for i in range(rank + 1, len(m)):
            a = m[i][col]
            row_i, row_r = m[i], m[rank]
            m[i] = [(piv * row_i[j] - a * row_r[j]) // prev for j in range(ncols)]
        prev = piv
        rank += 1
        if rank == len(m):
            break
    return rank


def rank_mod(rows, p: int) -> int:
    """Rank over GF(p); entries with denominators divisible by p are rejected."""
    m = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator divisible by {p}")
                r.append(x.numerator * pow(x.denominator, -1, p) % p)
            else:
                r.append(int(x) % p)
        if any(r):
            m.append(r)
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                a = m[i][col]
                m[i] = [(x - a * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def nullspace(rows, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}`` over Q, one vector per free column."""
    m = [[Fraction(x) for x in row] for row in rows if any(row)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                a = m[i][col]
                m[i] = [x - a * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def matmul(a, b):
    """Product of an (m x k) and a (k x n) matrix given as row lists."""
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in cols] for row in a]


def transpose(a, ncols: int | None = None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*a)]
