"""Exact dense linear algebra over Q or Q(sqrt(D)).

Matrices are lists of row lists of scalars.  Everything is fraction-free
only in the sense of exact field arithmetic; sizes here are small (the
largest systems are a few hundred rows), so straight Gaussian elimination
is the right tool.
"""

from __future__ import annotations

from typing import Sequence

from .errors import QuadspecError
from .scalars import QE, Scalar, as_scalar, is_rational, rat, sqrt_scalar

Matrix = list[list[Scalar]]


def _inv(x: Scalar) -> Scalar:
    if isinstance(x, QE):
        return x.inverse()
    if x == 0:
        raise ZeroDivisionError("inverting zero scalar")
    return 1 / x


def _nonzero(x: Scalar) -> bool:
    return isinstance(x, QE) or x != 0


def identity(n: int) -> Matrix:
    return [[rat(1) if i == j else rat(0) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[rat(0)] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if not _nonzero(c):
                continue
            bk = b[k]
            for j in range(cols):
                oi[j] = oi[j] + c * bk[j]
    return out

def mat_vec(a: Matrix, v: Sequence[Scalar]) -> list[Scalar]:
    out = []
    for row in a:
        s: Scalar = rat(0)
        for c, x in zip(row, v):
            if _nonzero(c):
                s = s + c * x
        out.append(s)
    return out


def mat_pow(a: Matrix, e: int) -> Matrix:
    result = identity(len(a))
    base = [row[:] for row in a]
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def trace(a: Matrix) -> Scalar:
    t: Scalar = rat(0)
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def rref(matrix: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    rows = [row[:] for row in matrix]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if _nonzero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = _inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and _nonzero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(matrix: Matrix) -> int:
    return len(rref(matrix)[1])


def nullspace(matrix: Matrix) -> list[list[Scalar]]:
    """Basis of the right kernel."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    red, pivots = rref(matrix)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [rat(0)] * ncols
        vec[fc] = rat(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve(matrix: Matrix, rhs: Sequence[Scalar]):
    """One solution of A x = b, or None if inconsistent."""
    if not matrix:
        return []
    aug = [row[:] + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    ncols = len(matrix[0])
    if ncols in pivots:
        return None
    x = [rat(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def det(matrix: Matrix) -> Scalar:
    n = len(matrix)
    rows = [row[:] for row in matrix]
    result: Scalar = rat(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if _nonzero(rows[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            return rat(0)
        if pivot_row != c:
            rows[c], rows[pivot_row] = rows[pivot_row], rows[c]
            result = -result
        result = result * rows[c][c]
        inv = _inv(rows[c][c])
        for i in range(c + 1, n):
            if _nonzero(rows[i][c]):
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def inverse(matrix: Matrix) -> Matrix:
    n = len(matrix)
    aug = [row[:] + ident_row[:] for row, ident_row in zip(matrix, identity(n))]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise QuadspecError("matrix not invertible")
    return [row[n:] for row in red]


def charpoly(matrix: Matrix) -> list[Scalar]:
    """Characteristic polynomial det(xI - M), ascending coefficients.

    Faddeev-LeVerrier; divisions are by integers only, valid in char 0.
    """
    n = len(matrix)
    coeffs = [rat(0)] * (n + 1)
    coeffs[n] = rat(1)
    m = identity(n)
    for k in range(1, n + 1):
        m = mat_mul(matrix, m)
        ck = -(trace(m) / k)
        coeffs[n - k] = ck
        for i in range(n):
            m[i][i] = m[i][i] + ck
    return coeffs


def minpoly_of_vector(mult_matrix: Matrix, start: Sequence[Scalar]) -> list[Scalar]:
    """Monic minimal polynomial of the Krylov sequence start, M start, ...

    When start represents the unit of a finite-dimensional algebra and M is
    multiplication by an element, this is the minimal polynomial of that
    element.
    """
    n = len(start)
    vectors = [list(start)]
    while True:
        # is the newest Krylov vector dependent on the earlier ones?
        if len(vectors) == 1:
            a = [[] for _ in range(n)]
        else:
            a = [list(row) for row in zip(*vectors[:-1])]
        x = solve(a, vectors[-1])
        if x is not None:
            return [-c for c in x] + [rat(1)]
        if len(vectors) > n:
            raise QuadspecError("Krylov sequence failed to terminate")
        vectors.append(mat_vec(mult_matrix, vectors[-1]))


def eig2(matrix: Matrix) -> tuple[Scalar, Scalar]:
    """Eigenvalues of a 2x2 matrix, deterministically ordered.

    Rational pairs come back sorted ascending.  Pairs needing a quadratic
    extension come back as (a + b*sqrt(D), a - b*sqrt(D)) with b > 0.
    """
    t = matrix[0][0] + matrix[1][1]
    d = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    disc = t * t - 4 * d
    s = sqrt_scalar(disc)
    half = rat(1, 2)
    r1 = (t + s) * half
    r2 = (t - s) * half
    return order_eigenpair(r1, r2)


def order_eigenpair(r1: Scalar, r2: Scalar) -> tuple[Scalar, Scalar]:
    if is_rational(r1) and is_rational(r2):
        return (r1, r2) if r1 <= r2 else (r2, r1)
    if isinstance(r1, QE) and r1.b < 0:
        r1, r2 = r2, r1
    return r1, r2
