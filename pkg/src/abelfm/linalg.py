"""Small dense exact-rational linear algebra.

Matrices are tuples of row tuples of :class:`fractions.Fraction`.  Everything
here is sized for the 6x6 problems of this package; no attempt is made at
sparsity or pivoting strategy beyond "first nonzero".
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


class SingularMatrixError(ValueError):
    pass


_ZERO = Fraction(0)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    return Fraction(value)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(tuple(as_fraction(v) for v in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != shape(b)[0]:
        raise ValueError(f"cannot multiply {shape(a)} by {shape(b)}")
    cols = transpose(b)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in cols)
        for row in a
    )


def matvec(m: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    if shape(m)[1] != len(v):
        raise ValueError(f"cannot apply {shape(m)} matrix to vector of length {len(v)}")
    nz = [(j, x) for j, x in enumerate(v) if x]
    out = []
    for row in m:
        acc = _ZERO
        for j, x in nz:
            if row[j]:
                acc += row[j] * x
        out.append(acc)
    return tuple(out)


def scale(m: Matrix, c) -> Matrix:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in m)


def _row_reduce(m: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in m]
    nrows, ncols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def rank(m: Matrix) -> int:
    return len(_row_reduce(m)[1]) if m else 0


def inverse(m: Matrix) -> Matrix:
    n, k = shape(m)
    if n != k:
        raise ValueError("only square matrices are invertible")
    aug = tuple(row + ident for row, ident in zip(m, identity(n)))
    rows, pivots = _row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def independent_columns(m: Matrix) -> list[int]:
    """Indices of a maximal set of linearly independent columns (greedy, left to right)."""
    return _row_reduce(m)[1]
