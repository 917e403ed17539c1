"""Exact integer/rational linear algebra used by the counting and flow routines."""

from __future__ import annotations

import math
from fractions import Fraction


def det_bareiss(m: list[list[int]]) -> int:
    """Exact determinant of an integer matrix via fraction-free elimination.

    Mutates its argument. All intermediate values stay integral, so there is
    no floating point anywhere and the result is exact for any size.
    """
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            lead = ri[k]
            if lead == 0:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * pivot) // prev
            else:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * pivot - lead * rk[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def laplacian_minor_det(
    vertices: list[int],
    endpoints,
    excluded: frozenset[int] | set[int],
) -> int:
    """Determinant of the multigraph Laplacian with the excluded rows/columns removed.

    ``endpoints`` iterates over (u, v) pairs, one per edge (parallel edges
    repeat, self-loops are ignored). With one vertex excluded this counts
    spanning trees; with the two endpoints of an edge excluded it counts
    spanning trees containing that edge.
    """
    kept = [v for v in vertices if v not in excluded]
    idx = {v: i for i, v in enumerate(kept)}
    n = len(kept)
    m = [[0] * n for _ in range(n)]
    for u, v in endpoints:
        if u == v:
            continue
        iu = idx.get(u)
        iv = idx.get(v)
        if iu is not None:
            m[iu][iu] += 1
        if iv is not None:
            m[iv][iv] += 1
        if iu is not None and iv is not None:
            m[iu][iv] -= 1
            m[iv][iu] -= 1
    return det_bareiss(m)


def solve_rational(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Solve a x = b exactly over the rationals (Gaussian elimination, partial pivot)."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for k in range(n):
        piv = None
        for i in range(k, n):
            if m[i][k] != 0:
                piv = i
                break
        if piv is None:
            raise ValueError("singular system")
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        pk = m[k][k]
        for i in range(k + 1, n):
            f = m[i][k]
            if f:
                f = f / pk
                for j in range(k, n + 1):
                    m[i][j] -= f * m[k][j]
    x = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        s = m[k][n] - sum(m[k][j] * x[j] for j in range(k + 1, n))
        x[k] = s / m[k][k]
    return x


def log2_int(n: int) -> float:
    """log2 of a positive integer, safe for values far beyond float range."""
    if n <= 0:
        raise ValueError("log2 of non-positive integer")
    bits = n.bit_length()
    if bits <= 900:
        return math.log2(n)
    shift = bits - 53
    return math.log2(n >> shift) + shift


def log2_fraction(q: Fraction) -> float:
    if q <= 0:
        raise ValueError("log2 of non-positive value")
    return log2_int(q.numerator) - log2_int(q.denominator)
