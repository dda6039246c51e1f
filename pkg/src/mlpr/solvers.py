"""
Module providing the baseline solvers and the scalar analysis of entry sums.

The entry sum `s = e^T x` of any nonnegative solution satisfies
`g(s) = α s^m - s + (1-α) = 0`, so it is either 1 or `c_α`.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping

import numpy as np
from numpy.typing import ArrayLike

from mlpr.core import DIVERGENCE_BOUND, MAXIT, TOL
from mlpr.linalg import SingularMatrixError, Vector, solve_square
from mlpr.log import get_logger
from mlpr.tensor import (
    CurvePoint,
    Problem,
    apply_tensor,
    as_vector,
    jacobian_x,
)


class SolveStatus(Enum):
    """
    Outcome of a solve.
    """

    CONVERGED = "converged"
    MAX_ITERATIONS = "max-iterations"
    SINGULAR_JACOBIAN = "singular-jacobian"
    DIVERGED = "diverged"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SolverOptions:
    """
    Options shared by the fixed-parameter solvers.
    """

    tol: float = TOL
    """Tolerance on the 1-norm of the residual."""

    maxit: int = MAXIT
    """Iteration budget."""

    divergence_bound: float = DIVERGENCE_BOUND
    """1-norm above which a Newton iterate counts as diverged."""

    normalize: bool = True
    """Rescale every Newton iterate to unit entry sum when `α m > 1`."""

    record: bool = False
    """Keep every iterate in the report trace."""

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")

        if self.maxit < 0:
            raise ValueError(f"iteration budget must be nonnegative, got {self.maxit}")

    @classmethod
    def from_config(cls, section: Mapping[str, Any]) -> "SolverOptions":
        """
        Create options from a config section, ignoring unrelated keys.

        Arguments:
            section: the config section.

        Returns:
            the solver options.
        """
        keys = ("tol", "maxit", "divergence_bound", "normalize")
        return cls(**{key: section[key] for key in keys if key in section})


@dataclass(frozen=True, eq=False)
class SolveReport:
    """
    Result of a solve.
    """

    x: Vector
    """The last iterate."""

    status: SolveStatus
    """The outcome."""

    iterations: int
    """Iterations spent."""

    residual_norm: float
    """The 1-norm of `H(x, α)` at the last iterate."""

    trace: tuple[CurvePoint, ...] | None = None
    """Recorded iterates or accepted curve points."""

    @property
    def converged(self) -> bool:
        """
        Whether the solve converged.
        """
        return self.status is SolveStatus.CONVERGED


##
#
# SCALAR ANALYSIS
#


def g_poly(z: float, alpha: float, m: int) -> float:
    """
    Evaluate `g(z) = α z^m - z + (1-α)`.
    """
    return alpha * z**m - z + (1.0 - alpha)


def g_minimum(alpha: float, m: int) -> float:
    """
    Get the minimizer `z* = (1/(α m))^{1/(m-1)}` of `g` on the positive axis.
    """
    return (1.0 / (alpha * m)) ** (1.0 / (m - 1))


def c_alpha(alpha: float, m: int) -> float:
    """
    Compute the positive root of `g` other than 1.

    The root is bracketed on the side of `z*` opposite to 1, bisected to
    machine precision and polished by scalar Newton steps.

    Arguments:
        alpha: the damping parameter in `(0, 1)`.
        m: the order, at least 2.

    Returns:
        `c_α`, which is 1 if `α = 1/m`.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")

    if m < 2:
        raise ValueError(f"order must be at least 2, got {m}")

    if math.isclose(alpha * m, 1.0, rel_tol=1e-15, abs_tol=0.0):
        return 1.0

    z_star = g_minimum(alpha, m)

    if alpha * m > 1.0:
        lo, hi = 0.0, z_star
    else:
        lo, hi = z_star, max(2.0, (1.0 / alpha) ** (1.0 / (m - 1)) + 1.0)

    # g is positive at the outer end of the bracket
    outer_positive_at_lo = alpha * m > 1.0

    while True:
        mid = 0.5 * (lo + hi)

        if mid in (lo, hi):
            break

        if (g_poly(mid, alpha, m) > 0.0) == outer_positive_at_lo:
            lo = mid
        else:
            hi = mid

    c = 0.5 * (lo + hi)

    for _ in range(3):
        slope = alpha * m * c ** (m - 1) - 1.0

        if slope == 0.0:
            break

        polished = c - g_poly(c, alpha, m) / slope

        if abs(g_poly(polished, alpha, m)) < abs(g_poly(c, alpha, m)):
            c = polished
        else:
            break

    return c


##
#
# ITERATIONS
#


def _report(
    problem: Problem,
    x: Vector,
    status: SolveStatus,
    iterations: int,
    residual: float,
    trace: list[CurvePoint] | None,
) -> SolveReport:
    log = get_logger(__name__)
    log.info(
        f"{status} after {iterations} iterations at alpha={problem.alpha}, "
        f"residual {residual:.3e}"
    )

    return SolveReport(
        x=x,
        status=status,
        iterations=iterations,
        residual_norm=residual,
        trace=tuple(trace) if trace is not None else None,
    )


def fixed_point(
    problem: Problem,
    x0: ArrayLike,
    options: SolverOptions = SolverOptions(),
) -> SolveReport:
    """
    Iterate `x_{k+1} = f_α(x_k) = α R(x_k^{⊗m}) + (1-α) v`.

    Arguments:
        problem: the instance.
        x0: the nonnegative starting vector.
        options: tolerance, budget and recording.

    Returns:
        the report; every step counts as one iteration.
    """
    log = get_logger(__name__)

    x = as_vector(x0, problem.n).copy()

    if np.any(x < 0.0):
        raise ValueError("starting vector must be nonnegative")

    alpha = problem.alpha
    trace = [] if options.record else None

    for k in range(options.maxit + 1):
        fx = alpha * apply_tensor(problem.tensor, x) + (1.0 - alpha) * problem.v
        residual = float(np.abs(fx - x).sum())

        if trace is not None:
            trace.append(CurvePoint(x, alpha, residual))

        log.debug(f"fixed-point step {k}: residual {residual:.3e}")

        if residual <= options.tol:
            return _report(problem, x, SolveStatus.CONVERGED, k, residual, trace)

        if k == options.maxit:
            break

        x = fx

    return _report(problem, x, SolveStatus.MAX_ITERATIONS, k, residual, trace)


def newton_fixed_alpha(
    problem: Problem,
    x0: ArrayLike,
    options: SolverOptions = SolverOptions(),
) -> SolveReport:
    """
    Run Newton's method on `H(·, α)` with `α` fixed.

    Each step solves `(α P_x - I) d = -H(x, α)` exactly, without damping.

    Arguments:
        problem: the instance.
        x0: the starting vector.
        options: tolerance, budget, divergence bound and normalization.

    Returns:
        the report; every linear solve counts as one iteration.
    """
    log = get_logger(__name__)

    x = as_vector(x0, problem.n).copy()
    alpha = problem.alpha
    trace = [] if options.record else None
    normalize = options.normalize and alpha * problem.m > 1.0

    for k in range(options.maxit + 1):
        h = alpha * apply_tensor(problem.tensor, x) + (1.0 - alpha) * problem.v - x
        residual = float(np.abs(h).sum())

        if trace is not None:
            trace.append(CurvePoint(x, alpha, residual))

        log.debug(f"newton step {k}: residual {residual:.3e}")

        if residual <= options.tol:
            return _report(problem, x, SolveStatus.CONVERGED, k, residual, trace)

        if k == options.maxit:
            break

        try:
            d = solve_square(jacobian_x(problem, x, alpha), -h)
        except SingularMatrixError as exc:
            log.info(f"singular Newton matrix at step {k}: {exc}")
            return _report(
                problem, x, SolveStatus.SINGULAR_JACOBIAN, k, residual, trace
            )

        x = x + d

        if not np.all(np.isfinite(x)) or np.abs(x).sum() > options.divergence_bound:
            return _report(problem, x, SolveStatus.DIVERGED, k + 1, math.inf, trace)

        # the entry sum would otherwise be drawn to c_α < 1
        if normalize and (total := x.sum()) != 0.0:
            x /= total

    return _report(problem, x, SolveStatus.MAX_ITERATIONS, k, residual, trace)


def newton_baseline(
    problem: Problem,
    options: SolverOptions = SolverOptions(),
) -> SolveReport:
    """
    Run Newton's method from the standard starting vector `(1-α) v`.
    """
    return newton_fixed_alpha(problem, (1.0 - problem.alpha) * problem.v, options)


def minimal_solution(
    problem: Problem,
    options: SolverOptions = SolverOptions(),
) -> SolveReport:
    """
    Compute the minimal solution as the fixed-point limit from `x_0 = 0`.

    Its entry sum is `min(1, c_α)`.
    """
    return fixed_point(problem, np.zeros(problem.n), options)
