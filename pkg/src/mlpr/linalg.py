"""
Module providing the dense linear algebra kernel.

Householder QR with explicit `Q`, triangular solves, the kernel vector of a
full-rank `n × (n+1)` matrix and the application of its pseudo-inverse.

Matrices are `numpy` float64 arrays indexed `(i, j)` from 0.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import solve_triangular

from mlpr.core import RANK_TOL

Matrix = NDArray[np.float64]
"""Dense real matrix."""

Vector = NDArray[np.float64]
"""Dense real vector."""


class RankDeficientError(ArithmeticError):
    """
    Raised when a triangular factor has a negligible diagonal entry.
    """

    def __init__(self, index: int, ratio: float) -> None:
        """
        Arguments:
            index: the column of the offending diagonal entry.
            ratio: its magnitude relative to the largest diagonal entry.
        """
        self.index = index
        self.ratio = ratio

        super().__init__(
            f"rank deficient at column {index}: |r_ii| / max |r_jj| = {ratio:.3e}"
        )


class SingularMatrixError(RankDeficientError):
    """
    Raised when a square system is numerically singular.
    """


@dataclass(frozen=True)
class QrFactorization:
    """
    Full QR factorization `A = Q [R; 0]` of a matrix with at least as many rows as columns.
    """

    q: Matrix
    """Orthogonal `rows × rows` matrix."""

    r: Matrix
    """Upper-triangular `rows × cols` matrix, zero below the first `cols` rows."""

    @property
    def rank(self) -> int:
        """
        The number of columns of the factorized matrix.
        """
        return self.r.shape[1]

    @property
    def triangle(self) -> Matrix:
        """
        The square upper-triangular block of `R`.
        """
        return self.r[: self.rank]


def as_matrix(a: ArrayLike) -> Matrix:
    """
    Convert the input to a finite float64 matrix.

    Arguments:
        a: the matrix-like input.

    Raises:
        ValueError: if the input is not two-dimensional or not finite.

    Returns:
        a float64 copy of the input.
    """
    out = np.array(a, dtype=np.float64)

    if out.ndim == 1:
        out = out.reshape(1, -1)

    if out.ndim != 2:
        raise ValueError(f"expected a matrix, got an array with {out.ndim} dimensions")

    if not np.all(np.isfinite(out)):
        raise ValueError("matrix has non-finite entries")

    return out


def qr_factor(a: ArrayLike, rank_tol: float = RANK_TOL) -> QrFactorization:
    """
    Factorize a matrix with Householder reflections.

    The signs are chosen such that the diagonal of `R` is nonnegative.

    Arguments:
        a: matrix with `rows >= cols`.
        rank_tol: relative threshold on the diagonal of `R`.

    Raises:
        ValueError: if `a` has more columns than rows.
        RankDeficientError: if some `|R_ii| <= rank_tol * max |R_jj|`.

    Returns:
        the factorization with explicit `Q`.
    """
    r = as_matrix(a)
    rows, cols = r.shape

    if rows < cols:
        raise ValueError(f"need rows >= cols, got a {rows}x{cols} matrix")

    q = np.eye(rows)

    for k in range(cols):
        x = r[k:, k]
        tail = np.linalg.norm(x[1:])

        # already triangular in this column
        if tail == 0.0:
            continue

        alpha = -np.copysign(np.hypot(x[0], tail), x[0])

        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)

        r[k:, k:] -= 2.0 * np.outer(v, v @ r[k:, k:])
        q[:, k:] -= 2.0 * np.outer(q[:, k:] @ v, v)

        # exact zeros below the diagonal
        r[k + 1 :, k] = 0.0

    # flip rows of R and columns of Q to a nonnegative diagonal
    signs = np.where(np.diag(r) < 0.0, -1.0, 1.0)
    r[:cols] *= signs[:, np.newaxis]
    q[:, :cols] *= signs

    check_rank(r[:cols], rank_tol)

    return QrFactorization(q=q, r=r)


def check_rank(triangle: Matrix, rank_tol: float = RANK_TOL) -> None:
    """
    Check the diagonal of a triangular factor against the rank threshold.

    Arguments:
        triangle: square triangular matrix.
        rank_tol: relative threshold.

    Raises:
        RankDeficientError: if a diagonal entry is negligible.
    """
    diagonal = np.abs(np.diag(triangle))

    if diagonal.size == 0:
        return

    largest = diagonal.max()

    if largest == 0.0:
        raise RankDeficientError(0, 0.0)

    ratios = diagonal / largest
    index = int(np.argmin(ratios))

    if ratios[index] <= rank_tol:
        raise RankDeficientError(index, float(ratios[index]))


def kernel_vector(
    a: ArrayLike,
    factorization: QrFactorization | None = None,
) -> Vector:
    """
    Get the unit vector spanning the kernel of a full-rank `n × (n+1)` matrix.

    Arguments:
        a: the matrix.
        factorization: the QR factorization of `a` transposed, if already available.

    Raises:
        RankDeficientError: if `a` has rank below `n`.

    Returns:
        the last column of `Q` from the QR factorization of `a` transposed,
        renormalized to unit 2-norm.
    """
    a = as_matrix(a)
    rows, cols = a.shape

    if cols != rows + 1:
        raise ValueError(f"expected an n x (n+1) matrix, got {rows}x{cols}")

    if factorization is None:
        factorization = qr_factor(a.T)

    q = factorization.q[:, -1].copy()

    return q / np.linalg.norm(q)


def pseudo_inverse_apply(
    a: ArrayLike,
    b: ArrayLike,
    factorization: QrFactorization | None = None,
) -> Vector:
    """
    Apply the pseudo-inverse of a full-rank `n × (n+1)` matrix.

    With `a^T = Q [R; 0]`, the result is `Q [R^{-T} b; 0]`, the minimum 2-norm
    solution `z` of `a z = b`.

    Arguments:
        a: the matrix.
        b: the right-hand side of length `n`.
        factorization: the QR factorization of `a` transposed, if already available.

    Raises:
        RankDeficientError: if `a` has rank below `n`.

    Returns:
        the vector `a⁺ b` of length `n + 1`.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    rows, _ = a.shape

    if b.shape != (rows,):
        raise ValueError(f"right-hand side of shape {b.shape}, expected ({rows},)")

    if factorization is None:
        factorization = qr_factor(a.T)

    y = solve_triangular(factorization.triangle, b, trans="T", lower=False)

    return factorization.q[:, :rows] @ y


def solve_square(
    a: ArrayLike,
    b: ArrayLike,
    rank_tol: float = RANK_TOL,
) -> Vector:
    """
    Solve a square linear system through its QR factorization.

    Arguments:
        a: nonsingular `n × n` matrix.
        b: right-hand side of length `n`.
        rank_tol: relative threshold on the diagonal of `R`.

    Raises:
        SingularMatrixError: if `a` is numerically singular.

    Returns:
        the solution `z` of `a z = b`.
    """
    a = as_matrix(a)
    b = np.asarray(b, dtype=np.float64)
    rows, cols = a.shape

    if rows != cols:
        raise ValueError(f"expected a square matrix, got {rows}x{cols}")

    if b.shape != (rows,):
        raise ValueError(f"right-hand side of shape {b.shape}, expected ({rows},)")

    try:
        factorization = qr_factor(a, rank_tol=rank_tol)
    except RankDeficientError as exc:
        raise SingularMatrixError(exc.index, exc.ratio) from None

    return solve_triangular(factorization.triangle, factorization.q.T @ b)
