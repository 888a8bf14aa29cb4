"""Exact rational linear algebra on lists of lists."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fractions(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in r] for r in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = to_fractions(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        p = m[r]
        pc = p[c]
        for i in range(r + 1, len(m)):
            row = m[i]
            f = row[c]
            if f:
                new = [pc * a - f * b for a, b in zip(row, p)]
                g = gcd(*new)
                m[i] = [a // g for a in new] if g > 1 else new
        r += 1
        if r == len(m):
            break
    return r


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {v : rows @ v = 0}, one basis vector per free column."""
    red, pivots = rref(rows)
    if ncols is None:
        ncols = len(rows[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of a @ x = b, or None when inconsistent."""
    if not a:
        return []
    ncols = len(a[0])
    aug = [list(r) + [y] for r, y in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, p in enumerate(pivots):
        x[p] = red[r][ncols]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(to_fractions(a))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def primitive(v: Sequence) -> list[int]:
    """Smallest integer vector with the same direction as ``v``."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = gcd(*ints)
    return [x // g for x in ints] if g > 1 else ints


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of ``points``."""
    pts = list(points)
    if not pts:
        raise ValueError("affine dimension of an empty point set is undefined")
    base = [Fraction(x) for x in pts[0]]
    diffs = [[Fraction(x) - y for x, y in zip(p, base)] for p in pts[1:]]
    return int_rank([primitive(d) for d in diffs]) if diffs else 0


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))
