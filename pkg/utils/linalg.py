"""
Exact linear algebra over the rationals.

Matrices are numpy object arrays holding Fractions so that ``@``, ``.T`` and
elementwise arithmetic stay exact. Rank, kernels, solves, inverses and
determinants go through sympy over QQ. Congruence diagonalization works on
row lists and returns the change of basis with the diagonal.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from utils.errors import DimensionMismatchError, NotInvertibleError

Matrix = np.ndarray
FrozenMatrix = Tuple[Tuple[Fraction, ...], ...]


def as_matrix(rows, n_cols: Optional[int] = None) -> Matrix:
    """Build an object array of Fractions from nested sequences."""
    rows = [[Fraction(x) for x in row] for row in rows]
    if not rows:
        return np.empty((0, n_cols or 0), dtype=object)
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise DimensionMismatchError("ragged matrix rows")
    M = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            M[i, j] = x
    return M


def as_column(values: Sequence) -> Matrix:
    return as_matrix([[v] for v in values], n_cols=1)


def identity_matrix(n: int) -> Matrix:
    M = zero_matrix(n, n)
    for i in range(n):
        M[i, i] = Fraction(1)
    return M


def zero_matrix(n_rows: int, n_cols: int) -> Matrix:
    M = np.empty((n_rows, n_cols), dtype=object)
    M.fill(Fraction(0))
    return M


def freeze(M: Matrix) -> FrozenMatrix:
    """Hashable tuple-of-tuples copy of a matrix."""
    return tuple(tuple(Fraction(x) for x in row) for row in np.asarray(M, dtype=object))


def mat_vec(M: Matrix, v: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    if M.shape[1] != len(v):
        raise DimensionMismatchError(f"matrix has {M.shape[1]} columns, vector has {len(v)} entries")
    return tuple(sum((M[i, j] * v[j] for j in range(len(v))), Fraction(0)) for i in range(M.shape[0]))


def bilinear_form(G: Matrix, v: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    n = G.shape[0]
    total = Fraction(0)
    for i in range(n):
        if v[i] == 0:
            continue
        row = G[i]
        for j in range(n):
            if w[j] != 0 and row[j] != 0:
                total += v[i] * row[j] * w[j]
    return total


def to_sympy(M: Matrix) -> sympy.Matrix:
    """Copy an object array of Fractions into a sympy Matrix over QQ."""
    n_rows, n_cols = M.shape
    return sympy.Matrix(
        n_rows,
        n_cols,
        [sympy.Rational(x.numerator, x.denominator) for x in (Fraction(y) for y in M.flat)],
    )


def _fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def from_sympy(S: sympy.Matrix) -> Matrix:
    return as_matrix([[_fraction(x) for x in S.row(i)] for i in range(S.rows)], n_cols=S.cols)


def rank(M: Matrix) -> int:
    if 0 in M.shape:
        return 0
    return to_sympy(M).rank()


def nullspace(M: Matrix) -> List[Tuple[Fraction, ...]]:
    """Basis of {x : M x = 0}, one vector per free column."""
    n_rows, n_cols = M.shape
    if n_rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(n_cols)) for j in range(n_cols)]
    return [tuple(_fraction(x) for x in v) for v in to_sympy(M).nullspace()]


def solve(M: Matrix, b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Unique solution of M x = b; raises NotInvertibleError otherwise."""
    n_rows, n_cols = M.shape
    if len(b) != n_rows:
        raise DimensionMismatchError("right-hand side length does not match matrix rows")
    if n_cols == 0:
        if any(Fraction(x) != 0 for x in b):
            raise NotInvertibleError("linear system is inconsistent")
        return ()
    S = to_sympy(M)
    if S.rank() != n_cols:
        raise NotInvertibleError("linear system has no unique solution")
    try:
        sol, _ = S.gauss_jordan_solve(to_sympy(as_column(b)))
    except ValueError as e:
        raise NotInvertibleError("linear system is inconsistent") from e
    return tuple(_fraction(x) for x in sol)


def inverse(M: Matrix) -> Matrix:
    n = M.shape[0]
    if M.shape != (n, n):
        raise DimensionMismatchError("only square matrices have inverses")
    if n == 0:
        return zero_matrix(0, 0)
    S = to_sympy(M)
    if S.det() == 0:
        raise NotInvertibleError("matrix is singular")
    return from_sympy(S.inv())


def determinant(M: Matrix) -> Fraction:
    if M.shape[0] == 0:
        return Fraction(1)
    return _fraction(to_sympy(M).det())


def congruence_diagonalize(G: Matrix) -> Tuple[List[Fraction], Matrix]:
    """
    Diagonalize a symmetric matrix by simultaneous row/column operations.

    Returns (diag, P) with P invertible and P^T G P = diag(diag). When every
    remaining diagonal entry vanishes but an off-diagonal one does not, the
    pair is replaced by (b_i + b_j, b_j), turning the 2x2 hyperbolic block
    into one with a nonzero diagonal.

    Args:
        G: symmetric square matrix of Fractions.

    Returns:
        Diagonal entries in basis order and the change-of-basis matrix whose
        columns are the new (mutually orthogonal) basis vectors.
    """
    n = G.shape[0]
    A = [[Fraction(x) for x in row] for row in G]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i: int, j: int) -> None:
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    def add_multiple(target: int, source: int, f: Fraction) -> None:
        # basis vector b_target += f * b_source
        A[target] = [a + f * b for a, b in zip(A[target], A[source])]
        for row in A:
            row[target] += f * row[source]
        for row in P:
            row[target] += f * row[source]

    for k in range(n):
        pivot = next((i for i in range(k, n) if A[i][i] != 0), None)
        if pivot is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            add_multiple(i, j, Fraction(1))
            pivot = i
        swap(k, pivot)
        p = A[k][k]
        for r in range(k + 1, n):
            if A[r][k] != 0:
                add_multiple(r, k, -A[r][k] / p)

    return [A[i][i] for i in range(n)], as_matrix(P, n_cols=n)
