"""Small dense exact linear algebra over RatFunc."""

from __future__ import annotations

from typing import Sequence

from .algebra import ONE, ZERO, RatFunc, as_ratfunc


class SingularMatrix(ArithmeticError):
    pass


Matrix = list  # list of rows of RatFunc


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(m):
            s = ZERO
            for k, x in enumerate(row):
                if not x.is_zero():
                    y = b[k][j]
                    if not y.is_zero():
                        s = s + x * y
            new.append(s)
        out.append(new)
    return out


def matvec(a: Matrix, v: Sequence[RatFunc]) -> list[RatFunc]:
    out = []
    for row in a:
        s = ZERO
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                s = s + x * y
        out.append(s)
    return out


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def det(a: Matrix) -> RatFunc:
    """Determinant by Gaussian elimination with pivot search."""
    m = [list(r) for r in a]
    n = len(m)
    result = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            result = -result
        p = m[col][col]
        result = result * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = m[r][col]
            if f.is_zero():
                continue
            f = f * inv
            for c in range(col + 1, n):
                if not m[col][c].is_zero():
                    m[r][c] = m[r][c] - f * m[col][c]
    return result


def solve(a: Matrix, b: Sequence) -> list[RatFunc]:
    """Solve a x = b for square nonsingular a."""
    n = len(a)
    m = [list(r) + [as_ratfunc(b[i])] for i, r in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv if not x.is_zero() else x for x in m[col]]
        for r in range(n):
            if r == col:
                continue
            f = m[r][col]
            if f.is_zero():
                continue
            m[r] = [x - f * y if not y.is_zero() else x for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def nullspace(a: Matrix) -> list[list[RatFunc]]:
    """Basis of the right kernel, via reduced row echelon form."""
    rows = [list(r) for r in a]
    nr, nc = len(rows), len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * nc
        v[fcol] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    cols = [solve(a, [ONE if i == j else ZERO for i in range(n)]) for j in range(n)]
    return transpose(cols)
