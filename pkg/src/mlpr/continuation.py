"""
Module implementing the Predictor-Corrector-Newton method.

The solutions of `H(x, α) = 0` form a curve in `ℝ^{n+1}` through `(v, 0)`.
Instead of stepping in `α` alone, the curve is followed by arclength: the
predictor moves along the tangent (the kernel of `J_H`), the corrector projects
back with the underdetermined Newton iteration `y ← y - J_H⁺ H(y)` and the
first correction steers the step size. Once the curve crosses the target
parameter, the crossing is interpolated and polished by Newton's method at
fixed `α`.

Example:

```python
from mlpr.continuation import ContinuationConfig, pc_newton

report = pc_newton(problem, ContinuationConfig(tau0=0.02))
```
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Mapping, NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from mlpr.core import (
    ALPHA0_MARGIN,
    ALPHA_MAX,
    DELTA,
    F_MIN,
    F_RETRY,
    MAX_CORRECTOR,
    MAXIT,
    SIMPLEX_SLACK,
    TAU0,
    TAU_MAX_FACTOR,
    TAU_MIN,
    TOL,
)
from mlpr.linalg import RankDeficientError, Vector, kernel_vector, pseudo_inverse_apply
from mlpr.log import get_logger
from mlpr.solvers import SolveReport, SolverOptions, SolveStatus, newton_fixed_alpha
from mlpr.tensor import CurvePoint, Problem, as_vector, jacobian_h, residual_h

SECANT_TOL = 1e-14
"""Distance below which two points do not define a secant."""


##
#
# ERRORS
#


class SingularPointError(ArithmeticError):
    """
    Raised when `J_H` is rank deficient on or near the curve.
    """

    def __init__(self, alpha: float, steps: int = 0) -> None:
        """
        Arguments:
            alpha: the parameter coordinate of the offending point.
            steps: corrector steps taken before the rank deficiency.
        """
        self.alpha = alpha
        self.steps = steps

        super().__init__(f"rank deficient Jacobian at alpha={alpha:.17g}")


class CorrectorDivergedError(ArithmeticError):
    """
    Raised when the corrector exceeds its step cap or leaves the finite numbers.
    """

    def __init__(self, steps: int, residual: float) -> None:
        self.steps = steps
        self.residual = residual

        super().__init__(
            f"corrector stopped after {steps} steps at residual {residual:.3e}"
        )


class StepRejectedError(ArithmeticError):
    """
    Raised when the first correction signals a too large predictor step.
    """

    def __init__(self, first_step_norm: float, steps: int) -> None:
        self.first_step_norm = first_step_norm
        self.steps = steps

        super().__init__(f"first correction of size {first_step_norm:.3e} too large")


class DegenerateSecantError(ValueError):
    """
    Raised when two points are too close to define a direction.
    """


class BudgetExhaustedError(RuntimeError):
    """
    Raised when the total iteration budget is spent.
    """

    def __init__(self, iterations: int) -> None:
        self.iterations = iterations

        super().__init__(f"iteration budget exhausted after {iterations} iterations")


class StepSizeTooSmallError(ArithmeticError):
    """
    Raised when repeated halving pushes the step size below its lower bound.
    """

    def __init__(self, tau: float) -> None:
        self.tau = tau

        super().__init__(f"step size {tau:.3e} below its lower bound")


class NewtonFailedError(ArithmeticError):
    """
    Raised when the initial fixed-parameter Newton solve fails.
    """

    def __init__(self, report: SolveReport) -> None:
        self.report = report

        super().__init__(f"initial Newton solve failed: {report.status}")


##
#
# CONFIGURATION
#


class Predictor(Enum):
    """
    Direction used by the predictor step.
    """

    TANGENT = "tangent"
    """The QR kernel of `J_H`."""

    SECANT = "secant"
    """The normalized difference of the last two accepted points."""

    def __str__(self) -> str:
        return self.value


def default_alpha0(target: float, m: int) -> float:
    """
    Get the default starting parameter, slightly below `1/m` and below the target.

    Arguments:
        target: the target parameter.
        m: the order.

    Returns:
        `min(target / 2, (1 - margin) / m)`.
    """
    return min(target / 2.0, (1.0 - ALPHA0_MARGIN) / m)


@dataclass(frozen=True)
class ContinuationConfig:
    """
    Parameters of the Predictor-Corrector-Newton method.
    """

    tol: float = TOL
    """Tolerance on the 1-norm of `H` for corrector and final Newton solve."""

    alpha0: float | None = None
    """Starting parameter, defaults to [`default_alpha0`][mlpr.continuation.default_alpha0]."""

    tau0: float = TAU0
    """Initial step size."""

    delta: float = DELTA
    """Nominal size of the first correction."""

    maxit: int = MAXIT
    """Total iteration budget."""

    tau_max_factor: float = TAU_MAX_FACTOR
    """Step sizes are capped at `tau_max_factor * tau0`."""

    f_min: float = F_MIN
    """Lower clamp of the deceleration factor."""

    f_retry: float = F_RETRY
    """Deceleration factor above which a predictor step is retried."""

    max_corrector: int = MAX_CORRECTOR
    """Corrector steps allowed per predictor step."""

    tau_min: float = TAU_MIN
    """Step size below which the run fails."""

    predictor: Predictor = Predictor.TANGENT
    """Direction of the predictor step."""

    def __post_init__(self) -> None:
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")

        if not self.tau0 > 0.0:
            raise ValueError(f"initial step size must be positive, got {self.tau0}")

        if not self.delta > 0.0:
            raise ValueError(f"nominal distance must be positive, got {self.delta}")

        if not self.f_min < self.f_retry:
            raise ValueError(
                f"need f_min < f_retry, got {self.f_min} and {self.f_retry}"
            )

        if self.maxit < 1 or self.max_corrector < 1:
            raise ValueError("iteration budgets must be at least 1")

        if self.alpha0 is not None and not 0.0 < self.alpha0 < 1.0:
            raise ValueError(f"alpha0 must lie in (0, 1), got {self.alpha0}")

        object.__setattr__(self, "predictor", Predictor(self.predictor))

    @classmethod
    def from_config(cls, section: Mapping[str, Any]) -> "ContinuationConfig":
        """
        Create a configuration from a config section, ignoring unrelated keys.

        Arguments:
            section: the config section.

        Returns:
            the continuation configuration.
        """
        keys = (
            "tol",
            "alpha0",
            "tau0",
            "delta",
            "maxit",
            "tau_max_factor",
            "f_min",
            "f_retry",
            "max_corrector",
            "tau_min",
            "predictor",
        )
        return cls(**{key: section[key] for key in keys if section.get(key) is not None})

    def start_alpha(self, target: float, m: int) -> float:
        """
        Get the starting parameter for a target.

        Raises:
            ValueError: if the starting parameter is not below the target.
        """
        alpha0 = self.alpha0 if self.alpha0 is not None else default_alpha0(target, m)

        if not 0.0 < alpha0 < target:
            raise ValueError(f"need 0 < alpha0 < {target}, got alpha0 = {alpha0}")

        return alpha0


@dataclass(frozen=True, eq=False)
class ContinuationState:
    """
    State after an accepted step.
    """

    y: CurvePoint
    """The accepted point."""

    t: Vector
    """The unit direction of the step that produced `y`, `e_{n+1}` initially."""

    tau: float
    """The step size for the next predictor step."""

    k: int
    """The number of accepted steps."""

    total_iterations: int
    """Newton, predictor and corrector steps spent so far."""


class StepDecision(NamedTuple):
    """
    Outcome of the step size control.
    """

    accept: bool
    new_tau: float
    f: float


##
#
# STEPS
#


def tangent(problem: Problem, y: CurvePoint, t_prev: ArrayLike) -> Vector:
    """
    Compute the unit tangent of the curve, oriented along the previous one.

    Arguments:
        problem: the instance.
        y: the point on the curve.
        t_prev: the previous unit tangent.

    Raises:
        SingularPointError: if `J_H` is rank deficient at `y`.

    Returns:
        the kernel vector `q` of `J_H` with `<t_prev, q> >= 0`.
    """
    t_prev = as_vector(t_prev, problem.n + 1)

    try:
        q = kernel_vector(jacobian_h(problem, y.x, y.alpha))
    except RankDeficientError:
        raise SingularPointError(y.alpha) from None

    if np.dot(t_prev, q) < 0.0:
        q = -q

    return q


def predict(y: CurvePoint, t: ArrayLike, tau: float) -> Vector:
    """
    Step from `y` by `tau` along the unit direction `t`.

    Returns:
        the predicted `n + 1` coordinates.
    """
    if tau < 0.0:
        raise ValueError(f"step size must be nonnegative, got {tau}")

    t = as_vector(t, y.x.size + 1)

    return y.as_array() + tau * t


def secant_direction(y: CurvePoint, y_prev: CurvePoint) -> Vector:
    """
    Get the unit direction from `y_prev` to `y`.

    Raises:
        DegenerateSecantError: if the points nearly coincide.
    """
    d = y.as_array() - y_prev.as_array()
    norm = np.linalg.norm(d)

    if norm < SECANT_TOL:
        raise DegenerateSecantError(f"points at distance {norm:.3e} give no secant")

    return d / norm


def predict_secant(y: CurvePoint, y_prev: CurvePoint, tau: float) -> Vector:
    """
    Extrapolate linearly through the last two accepted points.

    Returns:
        `y + tau (y - y_prev) / ||y - y_prev||_2`.
    """
    return predict(y, secant_direction(y, y_prev), tau)


def correct(
    problem: Problem,
    y_hat: ArrayLike,
    tol: float,
    max_corrector: int,
    first_step_limit: float = math.inf,
) -> tuple[CurvePoint, float, int]:
    """
    Project a predicted point onto the curve with underdetermined Newton steps.

    Arguments:
        problem: the instance.
        y_hat: the predicted `n + 1` coordinates.
        tol: tolerance on the 1-norm of `H`.
        max_corrector: the step cap.
        first_step_limit: bound on the 1-norm of the first correction.

    Raises:
        CorrectorDivergedError: on hitting the cap or a non-finite iterate.
        StepRejectedError: if the first correction exceeds its limit.
        SingularPointError: if `J_H` becomes rank deficient.

    Returns:
        the point on the curve, the 1-norm of the first correction (0 without
        corrections) and the number of corrections.
    """
    y = as_vector(y_hat, problem.n + 1).copy()
    first_step_norm = 0.0

    for steps in range(max_corrector + 1):
        x, alpha = y[:-1], float(y[-1])

        h = residual_h(problem, x, alpha)
        residual = float(np.abs(h).sum())

        if not math.isfinite(residual):
            raise CorrectorDivergedError(steps, residual)

        if residual <= tol:
            return CurvePoint(x, alpha, residual), first_step_norm, steps

        if steps == max_corrector:
            raise CorrectorDivergedError(steps, residual)

        try:
            d = -pseudo_inverse_apply(jacobian_h(problem, x, alpha), h)
        except RankDeficientError:
            raise SingularPointError(alpha, steps) from None

        if steps == 0:
            first_step_norm = float(np.abs(d).sum())

            if first_step_norm > first_step_limit:
                raise StepRejectedError(first_step_norm, 1)

        y = y + d

        if not np.all(np.isfinite(y)):
            raise CorrectorDivergedError(steps + 1, math.inf)

    # unreachable, the loop returns or raises
    raise CorrectorDivergedError(max_corrector, residual)


def step_control(
    first_step_norm: float,
    delta: float,
    tau: float,
    tau0: float,
    f_min: float,
    tau_max_factor: float,
    f_retry: float = F_RETRY,
) -> StepDecision:
    """
    Adapt the step size to the size of the first correction.

    The first correction scales like `C tau^2`, so `f = sqrt(|d|_1 / delta)`
    measures how far the step overshot the nominal distance.

    Returns:
        a rejection halving `tau` if `f > f_retry`, else an acceptance with
        `f` clamped from below by `f_min` and the new step size
        `min(tau / f, tau_max_factor * tau0)`.
    """
    if not delta > 0.0 or not tau > 0.0:
        raise ValueError(f"need positive delta and tau, got {delta} and {tau}")

    f = math.sqrt(first_step_norm / delta)

    if f > f_retry:
        return StepDecision(accept=False, new_tau=tau / 2.0, f=f)

    f = max(f, f_min)

    return StepDecision(accept=True, new_tau=min(tau / f, tau_max_factor * tau0), f=f)


##
#
# ENGINE
#


class Continuation:
    """
    Stepping engine following the curve from `(x_0, α_0)`.

    Every predictor attempt, corrector step and Newton step counts as one
    iteration against the total budget of the configuration.
    """

    def __init__(self, problem: Problem, config: ContinuationConfig, alpha0: float):
        """
        Arguments:
            problem: the instance, its own `α` is not used.
            config: the method parameters.
            alpha0: the starting parameter.
        """
        self.problem = problem
        self.config = config
        self.alpha0 = alpha0

        self.iterations = 0
        self.state: ContinuationState | None = None
        self.previous: CurvePoint | None = None

        self.log = get_logger(self.__module__, self.__class__.__name__)

    @property
    def remaining(self) -> int:
        """
        The iterations left in the budget.
        """
        return max(self.config.maxit - self.iterations, 0)

    def _spend(self, iterations: int) -> None:
        self.iterations += iterations

    def start(self) -> ContinuationState:
        """
        Solve at the starting parameter with Newton's method from `v`.

        Raises:
            NewtonFailedError: if the Newton solve fails.

        Returns:
            the initial state with direction `e_{n+1}`.
        """
        problem = self.problem.with_alpha(self.alpha0)
        options = SolverOptions(tol=self.config.tol, maxit=self.remaining)

        report = newton_fixed_alpha(problem, problem.v, options)
        self._spend(report.iterations)

        if not report.converged:
            self.log.warning(f"no initial solution at alpha={self.alpha0}")
            raise NewtonFailedError(report)

        n = self.problem.n
        e = np.zeros(n + 1)
        e[-1] = 1.0

        self.state = ContinuationState(
            y=CurvePoint(report.x, self.alpha0, report.residual_norm),
            t=e,
            tau=self.config.tau0,
            k=0,
            total_iterations=self.iterations,
        )
        self.log.debug(f"start at alpha={self.alpha0} after {report.iterations} Newton steps")

        return self.state

    def _feasible(self, point: CurvePoint) -> bool:
        slack = SIMPLEX_SLACK * self.config.tol

        if point.alpha > ALPHA_MAX + self.config.tol:
            return False

        return bool(np.all(point.x > -slack))

    def _direction(self, state: ContinuationState) -> Vector:
        if self.config.predictor is Predictor.SECANT and self.previous is not None:
            try:
                return secant_direction(state.y, self.previous)
            except DegenerateSecantError as exc:
                self.log.info(f"{exc}, using the tangent")

        return tangent(self.problem, state.y, state.t)

    def advance(self) -> ContinuationState:
        """
        Take one accepted predictor-corrector step.

        Rejected attempts halve the step size and retry the predictor with the
        same direction. Corrected points outside the probability simplex or
        beyond `α = 1` are rejected too.

        Raises:
            SingularPointError: if the tangent is undefined at the current point.
            StepSizeTooSmallError: if the step size drops below its lower bound.
            BudgetExhaustedError: if the budget is spent before acceptance.

        Returns:
            the new state.
        """
        if self.state is None:
            raise RuntimeError("continuation not started")

        config = self.config
        state = self.state

        direction = self._direction(state)
        tau = state.tau

        # predicted points stay at or below the end of the curve
        if direction[-1] > 0.0:
            tau = min(tau, (ALPHA_MAX - state.y.alpha) / direction[-1])

        while True:
            if tau < config.tau_min:
                self.log.warning(f"step size {tau:.3e} too small at alpha={state.y.alpha}")
                raise StepSizeTooSmallError(tau)

            if self.remaining < 1:
                raise BudgetExhaustedError(self.iterations)

            # predictor
            self._spend(1)
            y_hat = predict(state.y, direction, tau)

            try:
                point, first_step_norm, steps = correct(
                    self.problem,
                    y_hat,
                    config.tol,
                    min(config.max_corrector, self.remaining),
                    first_step_limit=config.f_retry**2 * config.delta,
                )
            except (StepRejectedError, CorrectorDivergedError, SingularPointError) as exc:
                self._spend(exc.steps)
                self.log.info(f"{exc}, halving step size {tau:.3e}")
                tau /= 2.0
                continue

            self._spend(steps)

            if not self._feasible(point):
                self.log.info(
                    f"point at alpha={point.alpha:.6f} leaves the simplex, "
                    f"halving step size {tau:.3e}"
                )
                tau /= 2.0
                continue

            decision = step_control(
                first_step_norm,
                config.delta,
                tau,
                config.tau0,
                config.f_min,
                config.tau_max_factor,
                config.f_retry,
            )

            if not decision.accept:
                self.log.info(f"deceleration {decision.f:.3f}, halving step size {tau:.3e}")
                tau = decision.new_tau
                continue

            break

        self.previous = state.y
        self.state = ContinuationState(
            y=replace(point, tau=tau),
            t=direction,
            tau=decision.new_tau,
            k=state.k + 1,
            total_iterations=self.iterations,
        )
        self.log.debug(
            f"step {self.state.k}: alpha={point.alpha:.6f}, tau={tau:.3e}, "
            f"{steps} corrections"
        )

        return self.state

    def follow(self) -> Iterator[ContinuationState]:
        """
        Yield the initial state and then the state after every accepted step.

        The generator never ends on its own; stop consuming it or let it raise.
        """
        if self.state is None:
            yield self.start()

        while True:
            yield self.advance()


##
#
# DRIVERS
#


def _failure(
    problem: Problem,
    engine: Continuation,
    status: SolveStatus,
    trace: list[CurvePoint],
) -> SolveReport:
    x = engine.state.y.x if engine.state is not None else problem.v
    residual = float(np.abs(residual_h(problem, x, problem.alpha)).sum())

    engine.log.warning(f"{status} after {engine.iterations} iterations")

    return SolveReport(
        x=np.array(x),
        status=status,
        iterations=engine.iterations,
        residual_norm=residual,
        trace=tuple(trace),
    )


def pc_newton(
    problem: Problem,
    config: ContinuationConfig = ContinuationConfig(),
) -> SolveReport:
    """
    Solve an instance with the Predictor-Corrector-Newton method.

    The curve is followed from `α_0` until an accepted point reaches the
    target `α`, the last two points are interpolated at the target and the
    result is polished with Newton's method at fixed `α`.

    Arguments:
        problem: the instance, its `α` is the target.
        config: the method parameters.

    Returns:
        the report; its trace holds every accepted point and its iterations
        sum Newton, predictor and corrector steps.
    """
    target = problem.alpha

    if not 0.0 < target < 1.0:
        raise ValueError(f"target alpha must lie in (0, 1), got {target}")

    engine = Continuation(problem, config, config.start_alpha(target, problem.m))

    trace: list[CurvePoint] = []
    previous: CurvePoint | None = None

    try:
        for state in engine.follow():
            trace.append(state.y)

            if state.y.alpha >= target:
                break

            previous = state.y
    except NewtonFailedError as exc:
        return _failure(problem, engine, exc.report.status, trace)
    except BudgetExhaustedError:
        return _failure(problem, engine, SolveStatus.MAX_ITERATIONS, trace)
    except SingularPointError:
        return _failure(problem, engine, SolveStatus.SINGULAR_JACOBIAN, trace)
    except StepSizeTooSmallError:
        return _failure(problem, engine, SolveStatus.DIVERGED, trace)

    crossing = state.y

    # interpolate the crossing, the parameter is exactly the target
    eta = (target - previous.alpha) / (crossing.alpha - previous.alpha)
    y_hat = previous.as_array() + eta * (crossing.as_array() - previous.as_array())
    y_hat[-1] = target

    options = SolverOptions(tol=config.tol, maxit=engine.remaining)
    final = newton_fixed_alpha(problem, y_hat[:-1], options)

    iterations = engine.iterations + final.iterations

    log = engine.log
    log.info(
        f"{final.status} at alpha={target} after {iterations} iterations, "
        f"{len(trace) - 1} steps"
    )

    return SolveReport(
        x=final.x,
        status=final.status,
        iterations=iterations,
        residual_norm=final.residual_norm,
        trace=tuple(trace),
    )


def trace_curve(
    problem: Problem,
    config: ContinuationConfig,
    alpha_stop: float,
) -> list[CurvePoint]:
    """
    Follow the curve until the parameter reaches `alpha_stop` or the budget ends.

    Arguments:
        problem: the instance, its own `α` is not used.
        config: the method parameters.
        alpha_stop: the parameter to stop at, at most 1.

    Raises:
        NewtonFailedError: if there is no initial solution.
        SingularPointError: if the tangent is undefined on the curve.
        StepSizeTooSmallError: if the step size drops below its lower bound.

    Returns:
        all accepted points.
    """
    if alpha_stop > 1.0:
        raise ValueError(f"alpha_stop must be at most 1, got {alpha_stop}")

    alpha0 = config.alpha0
    if alpha0 is None:
        alpha0 = default_alpha0(alpha_stop, problem.m)

    engine = Continuation(problem, config, alpha0)
    points: list[CurvePoint] = []

    try:
        for state in engine.follow():
            points.append(state.y)

            # predictor steps end at α = 1, the corrector may stop just short of it
            if state.y.alpha >= min(alpha_stop, ALPHA_MAX - config.tol):
                break
    except BudgetExhaustedError as exc:
        engine.log.info(str(exc))

    return points


def turning_points(trace: list[CurvePoint]) -> list[int]:
    """
    Find the points where the parameter changes direction.

    Arguments:
        trace: consecutive points on the curve.

    Returns:
        the indices of the points between an increase and a decrease of `α`.
    """
    alphas = np.array([point.alpha for point in trace])
    steps = np.diff(alphas)

    return [i for i in range(1, steps.size) if steps[i - 1] * steps[i] < 0.0]
