"""
Module defining the problem data model.

The stochastic tensor `R` is stored as a dense `n × n^m` matrix. The column of
the index tuple `(j_1, ..., j_m)` follows the Kronecker order of
`x ⊗ x ⊗ ... ⊗ x`: `j_1` varies slowest and `j_m` fastest, i.e. the column is
`j_1 n^{m-1} + j_2 n^{m-2} + ... + j_m` with 0-based indices.
"""

from dataclasses import dataclass, field, replace
from functools import reduce

import numpy as np
from numpy.typing import ArrayLike

from mlpr.linalg import Matrix, Vector

SUM_TOL = 1e-12
"""Tolerance on column sums and entry sums of stochastic data."""


class DimensionMismatchError(ValueError):
    """
    Raised when a vector does not match the problem dimension.
    """

    def __init__(self, expected: int, got: tuple[int, ...]) -> None:
        self.expected = expected
        self.got = got

        super().__init__(f"expected a vector of length {expected}, got shape {got}")


@dataclass(frozen=True)
class Violation:
    """
    A violated stochasticity condition of a tensor.
    """

    kind: str
    """Either `"negative"` or `"column-sum"`."""

    column: int
    """The column index in `R`."""

    index: tuple[int, ...]
    """The index tuple of the column."""

    value: float
    """The offending entry or column sum."""

    row: int | None = None
    """The row of a negative entry."""

    def __str__(self) -> str:
        if self.kind == "negative":
            return f"negative entry {self.value:.3e} at row {self.row}, column {self.index}"

        return f"column {self.index} sums to {self.value:.17g}"


class InvalidTensorError(ValueError):
    """
    Raised when a tensor violates the stochasticity conditions.
    """

    def __init__(self, violations: list[Violation]) -> None:
        self.violations = violations

        shown = "; ".join(str(violation) for violation in violations[:5])
        more = len(violations) - 5
        suffix = f" (and {more} more)" if more > 0 else ""

        super().__init__(f"invalid stochastic tensor: {shown}{suffix}")


def _frozen(array: ArrayLike) -> np.ndarray:
    out = np.array(array, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class StochasticTensor:
    """
    The nonnegative `n × n^m` matrix `R` with unit column sums.
    """

    r: Matrix
    """The dense matrix representation."""

    m: int
    """The order."""

    n: int = field(init=False)
    """The dimension."""

    def __post_init__(self) -> None:
        r = _frozen(self.r)

        if self.m < 2:
            raise ValueError(f"order must be at least 2, got {self.m}")

        if r.ndim != 2:
            raise ValueError(f"expected a matrix, got {r.ndim} dimensions")

        n = r.shape[0]

        if n < 1 or r.shape[1] != n**self.m:
            raise ValueError(
                f"a tensor of order {self.m} needs shape (n, n^{self.m}), got {r.shape}"
            )

        object.__setattr__(self, "r", r)
        object.__setattr__(self, "n", n)

    @property
    def shape(self) -> tuple[int, ...]:
        """
        The shape of a column index tuple.
        """
        return (self.n,) * self.m

    def column_index(self, index: tuple[int, ...]) -> int:
        """
        Get the column of an index tuple.

        Arguments:
            index: the tuple `(j_1, ..., j_m)`.

        Returns:
            the column of `R`.
        """
        return int(np.ravel_multi_index(index, self.shape))

    def column_tuple(self, column: int) -> tuple[int, ...]:
        """
        Get the index tuple of a column.

        Arguments:
            column: the column of `R`.

        Returns:
            the tuple `(j_1, ..., j_m)`.
        """
        return tuple(int(j) for j in np.unravel_index(column, self.shape))

    def check(self) -> None:
        """
        Raise if the tensor is not stochastic.

        Raises:
            InvalidTensorError: listing all violations.
        """
        violations = validate(self)

        if violations:
            raise InvalidTensorError(violations)


def as_vector(x: ArrayLike, n: int) -> Vector:
    """
    Convert the input to a float64 vector of length `n`.

    Raises:
        DimensionMismatchError: on a wrong shape.
    """
    out = np.asarray(x, dtype=np.float64)

    if out.shape != (n,):
        raise DimensionMismatchError(n, out.shape)

    return out


def is_stochastic(x: ArrayLike, tol: float = SUM_TOL) -> bool:
    """
    Check for a nonnegative vector with unit entry sum.

    Arguments:
        x: the vector.
        tol: tolerance on the entry sum.

    Returns:
        `True` if `x` is stochastic.
    """
    x = np.asarray(x, dtype=np.float64)
    return bool(np.all(x >= 0.0) and abs(x.sum() - 1.0) <= tol)


@dataclass(frozen=True, eq=False)
class Problem:
    """
    A multilinear PageRank instance `x = α R(x^{⊗m}) + (1-α) v`.
    """

    tensor: StochasticTensor
    """The stochastic tensor."""

    v: Vector
    """The stochastic teleportation vector."""

    alpha: float
    """The damping parameter in `[0, 1)`."""

    def __post_init__(self) -> None:
        v = _frozen(as_vector(self.v, self.tensor.n))

        if not is_stochastic(v):
            raise ValueError("teleportation vector must be stochastic")

        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")

        object.__setattr__(self, "v", v)
        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def uniform(cls, tensor: StochasticTensor, alpha: float) -> "Problem":
        """
        Create an instance with `v = e/n`.

        Arguments:
            tensor: the stochastic tensor.
            alpha: the damping parameter.

        Returns:
            the problem instance.
        """
        return cls(tensor, np.full(tensor.n, 1.0 / tensor.n), alpha)

    @property
    def n(self) -> int:
        """
        The dimension.
        """
        return self.tensor.n

    @property
    def m(self) -> int:
        """
        The order.
        """
        return self.tensor.m

    def with_alpha(self, alpha: float) -> "Problem":
        """
        Get the same instance with another damping parameter.
        """
        return replace(self, alpha=alpha)


@dataclass(frozen=True, eq=False)
class CurvePoint:
    """
    A point `(x, α)` on or near the solution curve.
    """

    x: Vector
    """The solution estimate."""

    alpha: float
    """The parameter coordinate."""

    residual_norm: float
    """The 1-norm of `H(x, α)`."""

    tau: float = 0.0
    """The step length that produced this point, 0 if it was not predicted."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _frozen(self.x))
        object.__setattr__(self, "alpha", float(self.alpha))

    @classmethod
    def evaluate(
        cls, problem: Problem, x: ArrayLike, alpha: float, tau: float = 0.0
    ) -> "CurvePoint":
        """
        Create a point with its residual norm.

        Arguments:
            problem: the problem defining `H`.
            x: the solution estimate.
            alpha: the parameter coordinate.
            tau: the step length that produced the point.

        Returns:
            the curve point.
        """
        x = as_vector(x, problem.n)
        residual = float(np.abs(residual_h(problem, x, alpha)).sum())
        return cls(x, alpha, residual, tau)

    @classmethod
    def from_array(cls, problem: Problem, y: ArrayLike, tau: float = 0.0) -> "CurvePoint":
        """
        Create a point from its `n + 1` coordinates.
        """
        y = as_vector(y, problem.n + 1)
        return cls.evaluate(problem, y[:-1], y[-1], tau)

    def as_array(self) -> Vector:
        """
        Get the `n + 1` coordinates `(x, α)`.
        """
        return np.append(self.x, self.alpha)


def kron_power(x: ArrayLike, m: int) -> Vector:
    """
    Compute `x ⊗ x ⊗ ... ⊗ x` with `m` factors.

    Arguments:
        x: the vector.
        m: the number of factors, at least 1.

    Returns:
        the vector of length `n^m`.
    """
    if m < 1:
        raise ValueError(f"need at least one factor, got {m}")

    x = np.asarray(x, dtype=np.float64)
    return reduce(np.kron, [x] * m)


def apply_tensor(tensor: StochasticTensor, x: ArrayLike) -> Vector:
    """
    Compute `R(x^{⊗m})`.

    Raises:
        DimensionMismatchError: if `x` has the wrong length.
    """
    x = as_vector(x, tensor.n)
    return tensor.r @ kron_power(x, tensor.m)


def residual_h(problem: Problem, x: ArrayLike, alpha: float) -> Vector:
    """
    Compute `H(x, α) = α R(x^{⊗m}) + (1-α) v - x`.

    The parameter is passed separately since continuation evaluates `H`
    away from the problem's own `α`.

    Raises:
        DimensionMismatchError: if `x` has the wrong length.
    """
    x = as_vector(x, problem.n)
    return alpha * apply_tensor(problem.tensor, x) + (1.0 - alpha) * problem.v - x


def jacobian_px(tensor: StochasticTensor, x: ArrayLike) -> Matrix:
    """
    Compute `P_x`, the Jacobian of `R(x^{⊗m})`.

    Every slot contributes `R` applied to the Kronecker product with the
    identity in that slot and `x` in all others.

    Raises:
        DimensionMismatchError: if `x` has the wrong length.
    """
    x = as_vector(x, tensor.n)
    n, m = tensor.n, tensor.m

    column = x.reshape(n, 1)
    identity = np.eye(n)

    p = np.zeros((n, n))

    for slot in range(m):
        factors = [identity if s == slot else column for s in range(m)]
        p += tensor.r @ reduce(np.kron, factors)

    return p


def jacobian_x(problem: Problem, x: ArrayLike, alpha: float) -> Matrix:
    """
    Compute `∂H/∂x = α P_x - I`.
    """
    return alpha * jacobian_px(problem.tensor, x) - np.eye(problem.n)


def jacobian_h(problem: Problem, x: ArrayLike, alpha: float) -> Matrix:
    """
    Compute `J_H[x, α] = [α P_x - I | R(x^{⊗m}) - v]`.

    Raises:
        DimensionMismatchError: if `x` has the wrong length.

    Returns:
        the `n × (n+1)` Jacobian.
    """
    x = as_vector(x, problem.n)
    d_alpha = apply_tensor(problem.tensor, x) - problem.v

    return np.column_stack((jacobian_x(problem, x, alpha), d_alpha))


def validate(tensor: StochasticTensor, tol: float = SUM_TOL) -> list[Violation]:
    """
    Check the tensor for negative entries and column sums different from 1.

    Arguments:
        tensor: the tensor to check.
        tol: tolerance on the column sums.

    Returns:
        the violations, empty if the tensor is stochastic.
    """
    r = tensor.r
    violations = []

    for row, column in zip(*np.nonzero(r < 0.0)):
        violations.append(
            Violation(
                kind="negative",
                column=int(column),
                index=tensor.column_tuple(int(column)),
                value=float(r[row, column]),
                row=int(row),
            )
        )

    sums = r.sum(axis=0)

    for column in np.flatnonzero(np.abs(sums - 1.0) > tol):
        violations.append(
            Violation(
                kind="column-sum",
                column=int(column),
                index=tensor.column_tuple(int(column)),
                value=float(sums[column]),
            )
        )

    return violations
