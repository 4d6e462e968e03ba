"""Exact dense linear algebra over a field (Gaussian rationals or rationals).

Matrices are lists of rows.  Entries only need ``+ - * /`` and truthiness, so
the same routines work for :class:`~segrejet.coeff.Coeff` and ``gmpy2.mpq``.
"""

from __future__ import annotations

from typing import List, Sequence

from .errors import SingularJacobian

Matrix = List[list]


def _copy(a: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in a]


def row_echelon(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = _copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((k for k in range(r, rows) if m[k][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(rows):
            if k != r and m[k][c]:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(row_echelon(a)[1])


def det(a: Sequence[Sequence]):
    n = len(a)
    m = _copy(a)
    out = None
    sign = 1
    for c in range(n):
        p = next((k for k in range(c, n) if m[k][c]), None)
        if p is None:
            return m[0][0] * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        out = piv if out is None else out * piv
        inv = 1 / piv
        for k in range(c + 1, n):
            if m[k][c]:
                f = m[k][c] * inv
                m[k] = [x - f * y for x, y in zip(m[k], m[c])]
    if out is None:
        raise ValueError("determinant of empty matrix")
    return out if sign > 0 else -out


def inverse(a: Sequence[Sequence]) -> Matrix:
    """Inverse of a square matrix; raises :class:`SingularJacobian`."""
    n = len(a)
    if n == 0:
        return []
    one = a[0][0] * 0 + 1
    zero = one * 0
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise SingularJacobian("matrix is singular")
    return [row[n:] for row in red]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), v[0] * 0) for row in a]


def is_consistent(a: Sequence[Sequence], b: Sequence) -> bool:
    """Whether ``a x = b`` has a solution."""
    if not a:
        return not any(b)
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    ncols = len(a[0])
    _, piv = row_echelon(aug)
    return ncols not in piv
