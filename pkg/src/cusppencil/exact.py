"""Exact integer/rational linear algebra used across the package.

Everything here works on lists of lists of ``int`` or ``Fraction``; no
floating point is involved.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def bareiss_det(m: Matrix) -> int:
    """Determinant of an integer matrix by fraction-free elimination.

    The empty (0x0) matrix has determinant 1.
    """
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def leading_minors(m: Matrix) -> list[int]:
    """Leading principal minors D_1, ..., D_n."""
    return [bareiss_det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_negative_definite(m: Matrix) -> bool:
    """Sylvester's criterion applied to -m: (-1)^k D_k > 0 for every k."""
    return all((-1) ** k * dk > 0 for k, dk in enumerate(leading_minors(m), start=1))


def signature(m: Matrix) -> tuple[int, int, int]:
    """Return ``(n_plus, n_minus, n_zero)`` of a symmetric matrix.

    Uses congruence diagonalization over the rationals: a zero pivot with a
    nonzero off-diagonal entry is repaired by adding one row/column to another.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and a[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # row_i += row_j, col_i += col_j  (congruence)
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        row = a[piv][:]
        for i in active:
            if row[i] == 0:
                continue
            f = row[i] / p
            for k in active:
                a[i][k] -= f * row[k]
        for i in active:
            a[i][piv] = a[piv][i] = Fraction(0)
    return pos, neg, n - pos - neg


def order_echelon(rows: list[list[Fraction]]) -> tuple[list[tuple[int, list[Fraction], list[Fraction]]], list[list[Fraction]]]:
    """Echelon form keyed by the *lowest* nonzero column ("t-order").

    ``rows[i]`` is a coefficient vector; the returned data tracks, for every
    reduced row, the combination of input rows producing it.

    Returns ``(pivots, kernel)`` where ``pivots`` is a list of
    ``(pivot_column, reduced_row, combination)`` sorted by pivot column and
    fully reduced (each row is zero at every other pivot column), and
    ``kernel`` is a list of combinations whose row reduces to zero.
    """
    nrows = len(rows)
    work = [
        ([Fraction(x) for x in r], [Fraction(int(i == k)) for i in range(nrows)])
        for k, r in enumerate(rows)
    ]
    by_pivot: dict[int, tuple[list[Fraction], list[Fraction]]] = {}
    kernel: list[list[Fraction]] = []
    for vec, comb in work:
        while True:
            lead = next((c for c, x in enumerate(vec) if x != 0), None)
            if lead is None:
                kernel.append(comb)
                break
            if lead not in by_pivot:
                s = vec[lead]
                vec = [x / s for x in vec]
                comb = [x / s for x in comb]
                by_pivot[lead] = (vec, comb)
                break
            pv, pc = by_pivot[lead]
            f = vec[lead]
            vec = [x - f * y for x, y in zip(vec, pv)]
            comb = [x - f * y for x, y in zip(comb, pc)]
    # back-substitution: clear every pivot column from the other rows
    cols = sorted(by_pivot)
    for c in reversed(cols):
        pv, pc = by_pivot[c]
        for c2 in cols:
            if c2 >= c:
                continue
            v2, k2 = by_pivot[c2]
            f = v2[c]
            if f != 0:
                by_pivot[c2] = (
                    [x - f * y for x, y in zip(v2, pv)],
                    [x - f * y for x, y in zip(k2, pc)],
                )
    pivots = [(c, by_pivot[c][0], by_pivot[c][1]) for c in cols]
    return pivots, kernel
