"""Exact linear algebra over the Gaussian rationals.

Matrices are lists of rows of ``Scalar``.  Everything is plain Gaussian
elimination over a field; entries never leave the field, so results are
exact.  Sizes in this package stay below a few hundred, which keeps the
quadratic Python loops cheap enough.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar, as_scalar

Matrix = List[List[Scalar]]


def to_matrix(rows) -> Matrix:
    return [[as_scalar(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[ZERO] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def conj_transpose(a: Matrix) -> Matrix:
    return [[x.conjugate() for x in col] for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = ZERO
            for x, y in zip(row, col):
                if x.re_num or x.im_num:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a: Matrix, v: Sequence[Scalar]) -> List[Scalar]:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            acc = acc + x * y
        out.append(acc)
    return out


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the first nonzero entry at or below the current row,
    so the output is deterministic for a given input.
    """
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r:
                f = m[i][c]
                if not f.is_zero():
                    pr = m[r]
                    m[i] = [x - f * y if not y.is_zero() else x for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1]) if a else 0


def nullspace(a: Matrix, ncols: int = None) -> Matrix:
    """Basis (list of vectors) of ``{x : a x = 0}``."""
    if not a:
        n = ncols or 0
        return identity(n)
    m, pivots = rref(a)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def row_space(vectors: Matrix) -> Matrix:
    """Echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    m, pivots = rref(vectors)
    return m[: len(pivots)]


def solve(a: Matrix, b: Sequence[Scalar]):
    """Return one solution of ``a x = b`` or ``None`` when inconsistent.

    Free variables are set to zero.
    """
    n = len(a[0]) if a else 0
    aug = [list(row) + [as_scalar(bi)] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if n in pivots:
        return None
    x = [ZERO] * n
    for r, pc in enumerate(pivots):
        x[pc] = m[r][n]
    return x


def det(a: Matrix) -> Scalar:
    m = [list(row) for row in a]
    n = len(m)
    out = ONE
    for c in range(n):
        p = next((i for i in range(c, n) if not m[i][c].is_zero()), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        piv = m[c][c]
        out = out * piv
        inv = ONE / piv
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if not f.is_zero():
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]


def is_hermitian(a: Matrix) -> bool:
    n = len(a)
    return all(a[j][i] == a[i][j].conjugate() for i in range(n) for j in range(i, n))


def leading_minors(a: Matrix) -> List[Scalar]:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester's criterion on a Hermitian matrix (minors are real)."""
    if not is_hermitian(a):
        return False
    # pivots of elimination without row swaps are ratios of successive minors
    m = [list(row) for row in a]
    n = len(m)
    for c in range(n):
        piv = m[c][c]
        if not piv.is_real() or piv.sign() <= 0:
            return False
        inv = ONE / piv
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if not f.is_zero():
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return True


def mat_str(a: Matrix) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in a)
