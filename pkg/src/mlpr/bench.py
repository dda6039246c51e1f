"""
Module providing the experiment harness.

Random sparse stochastic tensors, batch runs of the solvers with failure
counting and performance profiles of their costs.
"""

import math
import time
from collections import defaultdict
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import TextIO

import numpy as np
from anyio import CapacityLimiter, create_task_group, to_thread

from mlpr.continuation import ContinuationConfig, pc_newton
from mlpr.core import ENSEMBLE_SIZE
from mlpr.files import write_profile
from mlpr.log import get_logger
from mlpr.solvers import (
    SolveReport,
    SolverOptions,
    SolveStatus,
    fixed_point,
    newton_baseline,
)
from mlpr.tensor import Problem, StochasticTensor


class Method(Enum):
    """
    Solvers compared in an experiment.
    """

    N = "n"
    """Newton's method from `(1-α) v`."""

    PCN = "pcn"
    """The Predictor-Corrector-Newton method."""

    FP = "fp"
    """The fixed-point iteration from `v`."""

    def __str__(self) -> str:
        return self.value


class Cost(Enum):
    """
    Cost measure of performance profiles.
    """

    ITERATIONS = "iterations"
    TIME = "time"

    def __str__(self) -> str:
        return self.value


class MismatchedInstancesError(ValueError):
    """
    Raised when methods were not run on the same instances.
    """


##
#
# INSTANCES
#


def instance_seed(seed: int, index: int) -> int:
    """
    Derive the 64-bit seed of an ensemble member.

    Arguments:
        seed: the experiment seed.
        index: the instance index.

    Returns:
        a seed independent of the number of instances and workers.
    """
    state = np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def random_tensor(n: int, m: int, seed: int) -> StochasticTensor:
    """
    Create a random sparse stochastic tensor.

    Every column holds a single 1 in a row drawn uniformly and independently
    with a PCG64 generator.

    Arguments:
        n: the dimension, at least 1.
        m: the order, at least 2.
        seed: the generator seed.

    Returns:
        the tensor.
    """
    if n < 1 or m < 2:
        raise ValueError(f"need n >= 1 and m >= 2, got n={n}, m={m}")

    rng = np.random.Generator(np.random.PCG64(seed))

    columns = n**m
    rows = rng.integers(0, n, size=columns)

    r = np.zeros((n, columns))
    r[rows, np.arange(columns)] = 1.0

    return StochasticTensor(r, m)


@dataclass(frozen=True)
class ExperimentSpec:
    """
    Description of a batch run.
    """

    methods: tuple[Method, ...] = (Method.N, Method.PCN)
    """The methods to compare."""

    alphas: tuple[float, ...] = (0.90, 0.95, 0.99)
    """The damping parameters."""

    ensemble_size: int = ENSEMBLE_SIZE
    """The number of random instances."""

    n: int = 5
    """The dimension of random instances."""

    m: int = 2
    """The order of random instances."""

    seed: int = 0
    """The experiment seed."""

    solver: SolverOptions = field(default_factory=SolverOptions)
    """Options of the Newton and fixed-point baselines."""

    continuation: ContinuationConfig = field(default_factory=ContinuationConfig)
    """Parameters of the Predictor-Corrector-Newton method."""

    workers: int = 1
    """The number of instances solved concurrently."""

    tensors: tuple[tuple[str, StochasticTensor], ...] | None = None
    """Named tensors replacing the random ensemble."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))

        if not self.methods:
            raise ValueError("need at least one method")

        if not self.alphas or not all(0.0 < alpha < 1.0 for alpha in self.alphas):
            raise ValueError(f"alphas must lie in (0, 1), got {self.alphas}")

        if self.ensemble_size < 1:
            raise ValueError(f"ensemble size must be at least 1, got {self.ensemble_size}")

        if self.workers < 1:
            raise ValueError(f"need at least one worker, got {self.workers}")

        if self.tensors is not None and not self.tensors:
            raise ValueError("empty tensor set")

        alpha0 = self.continuation.alpha0

        if (
            Method.PCN in self.methods
            and alpha0 is not None
            and not alpha0 < min(self.alphas)
        ):
            raise ValueError(
                f"alpha0 must lie below every alpha, got {alpha0} and {self.alphas}"
            )

    def instances(self) -> list[tuple[str, StochasticTensor]]:
        """
        Get the named tensors of this experiment.

        Random instances are named by their zero-padded index.
        """
        if self.tensors is not None:
            return list(self.tensors)

        width = len(str(self.ensemble_size - 1))

        return [
            (f"{i:0{width}d}", random_tensor(self.n, self.m, instance_seed(self.seed, i)))
            for i in range(self.ensemble_size)
        ]


@dataclass(frozen=True)
class InstanceRecord:
    """
    Outcome of one method on one instance at one parameter.
    """

    id: str
    method: Method
    alpha: float
    status: SolveStatus
    iterations: int
    residual: float
    time_s: float
    """Wall time in seconds, informative only."""

    @property
    def failed(self) -> bool:
        """
        Whether the method did not converge.
        """
        return self.status is not SolveStatus.CONVERGED

    @property
    def key(self) -> tuple[str, str, float]:
        """
        The sort key `(id, method, alpha)`.
        """
        return (self.id, self.method.value, self.alpha)


@dataclass(frozen=True)
class ExperimentResult:
    """
    Records of a batch run, sorted by their keys.
    """

    methods: tuple[Method, ...]
    alphas: tuple[float, ...]
    records: tuple[InstanceRecord, ...]

    def __post_init__(self) -> None:
        records = tuple(sorted(self.records, key=lambda record: record.key))
        object.__setattr__(self, "records", records)

    @property
    def failures(self) -> dict[tuple[Method, float], int]:
        """
        The number of failed records per method and parameter.
        """
        counts = {(method, alpha): 0 for alpha in self.alphas for method in self.methods}

        for record in self.records:
            if record.failed:
                counts[record.method, record.alpha] += 1

        return counts


##
#
# RUNS
#


def solve_instance(problem: Problem, method: Method, spec: ExperimentSpec) -> SolveReport:
    """
    Solve an instance with one of the compared methods.
    """
    match method:
        case Method.N:
            return newton_baseline(problem, spec.solver)
        case Method.PCN:
            return pc_newton(problem, spec.continuation)
        case Method.FP:
            return fixed_point(problem, problem.v, spec.solver)


def _record(
    name: str,
    tensor: StochasticTensor,
    alpha: float,
    method: Method,
    spec: ExperimentSpec,
) -> InstanceRecord:
    problem = Problem.uniform(tensor, alpha)

    start = time.perf_counter()
    report = solve_instance(problem, method, spec)
    elapsed = time.perf_counter() - start

    if not report.converged:
        log = get_logger(__name__)
        log.info(f"{method} failed on instance {name} at alpha={alpha}: {report.status}")

    return InstanceRecord(
        id=name,
        method=method,
        alpha=alpha,
        status=report.status,
        iterations=report.iterations,
        residual=report.residual_norm,
        time_s=elapsed,
    )


async def run_experiment(
    spec: ExperimentSpec,
    progress: Callable[[], None] | None = None,
) -> ExperimentResult:
    """
    Run every method on every instance and parameter.

    Instances are solved in worker threads, at most `spec.workers` at a time.
    Failures are recorded, they never abort the batch.

    Arguments:
        spec: the experiment.
        progress: called after every finished record.

    Returns:
        the result with sorted records.
    """
    log = get_logger(__name__)

    instances = spec.instances()
    limiter = CapacityLimiter(spec.workers)
    records: list[InstanceRecord] = []

    log.info(
        f"running {len(instances)} instances with {', '.join(map(str, spec.methods))} "
        f"at alphas {', '.join(map(str, spec.alphas))}"
    )

    async def solve(name, tensor, alpha, method):
        record = await to_thread.run_sync(
            _record, name, tensor, alpha, method, spec, limiter=limiter
        )
        records.append(record)

        if progress is not None:
            progress()

    async with create_task_group() as tg:
        for name, tensor in instances:
            for alpha in spec.alphas:
                for method in spec.methods:
                    tg.start_soon(solve, name, tensor, alpha, method)

    return ExperimentResult(spec.methods, spec.alphas, tuple(records))


##
#
# REPORTS
#


def failure_table(result: ExperimentResult) -> list[tuple[float, dict[Method, int]]]:
    """
    Arrange the failure counts with one row per parameter and one column per method.
    """
    failures = result.failures

    return [
        (alpha, {method: failures[method, alpha] for method in result.methods})
        for alpha in result.alphas
    ]


def _cost(record: InstanceRecord, cost: Cost) -> float:
    if record.failed:
        return math.inf

    return float(record.iterations) if cost is Cost.ITERATIONS else record.time_s


def performance_profile(
    results: Sequence[ExperimentResult],
    alpha: float,
    cost: Cost = Cost.ITERATIONS,
) -> tuple[list[float], dict[Method, list[float]]]:
    """
    Compute the performance profile of the methods at one parameter.

    The ratio of a method on an instance is its cost over the smallest cost
    of all methods on that instance, infinite on failure. The profile of a
    method is the fraction of instances with ratio at most `θ`.

    Arguments:
        results: results sharing a common instance set.
        alpha: the parameter to profile.
        cost: the cost measure.

    Raises:
        MismatchedInstancesError: if the methods ran on different instances.

    Returns:
        the sorted breakpoints `θ` and the fractions of every method at them.
    """
    costs: dict[Method, dict[str, float]] = defaultdict(dict)

    for result in results:
        for record in result.records:
            if record.alpha != alpha:
                continue

            if record.id in costs[record.method]:
                raise MismatchedInstancesError(
                    f"{record.method} ran twice on instance {record.id}"
                )

            costs[record.method][record.id] = _cost(record, cost)

    if not costs:
        raise MismatchedInstancesError(f"no records at alpha={alpha}")

    methods = list(costs)
    ids = set(costs[methods[0]])

    if any(set(costs[method]) != ids for method in methods):
        raise MismatchedInstancesError(f"methods ran on different instances at alpha={alpha}")

    ratios: dict[Method, list[float]] = {method: [] for method in methods}

    for name in sorted(ids):
        best = min(costs[method][name] for method in methods)

        for method in methods:
            c = costs[method][name]

            if math.isinf(c):
                ratio = math.inf
            elif best == 0.0:
                ratio = 1.0 if c == 0.0 else math.inf
            else:
                ratio = c / best

            ratios[method].append(ratio)

    thetas = sorted(
        {ratio for values in ratios.values() for ratio in values if math.isfinite(ratio)}
        | {1.0}
    )

    fractions = {
        method: [
            sum(ratio <= theta for ratio in ratios[method]) / len(ids) for theta in thetas
        ]
        for method in methods
    }

    return thetas, fractions


def emit_profile(
    results: Sequence[ExperimentResult],
    stream: TextIO,
    alpha: float,
    cost: Cost = Cost.ITERATIONS,
) -> None:
    """
    Write the performance profile at one parameter as CSV.

    Raises:
        MismatchedInstancesError: if the methods ran on different instances.
    """
    thetas, fractions = performance_profile(results, alpha, cost)
    write_profile(stream, thetas, {str(method): values for method, values in fractions.items()})
