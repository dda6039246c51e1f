"""
App definition.
"""

from dataclasses import replace

from click import UsageError, echo

from mlpr.bench import Method
from mlpr.cli.options import load_problem
from mlpr.config import Config
from mlpr.continuation import ContinuationConfig, pc_newton
from mlpr.files import number, write_curve
from mlpr.log import get_logger
from mlpr.solvers import SolveReport, SolverOptions, fixed_point, newton_baseline


def solve(config: Config) -> SolveReport:
    """
    Solve the instance described by the `solve` section.

    Raises:
        UsageError: if the inputs do not define a solvable instance.
    """
    c = config["solve"]

    problem = load_problem(c, c["alpha"])
    method = Method(c.get("method", Method.PCN.value))
    record = c.get("trace") is not None

    log = get_logger(__name__)
    log.info(f"solving n={problem.n}, m={problem.m} at alpha={problem.alpha} with {method}")

    try:
        match method:
            case Method.PCN:
                return pc_newton(problem, ContinuationConfig.from_config(c))
            case Method.N:
                options = replace(SolverOptions.from_config(c), record=record)
                return newton_baseline(problem, options)
            case Method.FP:
                options = replace(SolverOptions.from_config(c), record=record)
                return fixed_point(problem, problem.v, options)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def main(config: Config) -> int:
    """
    Main app routine.

    Prints the status, the iterations, the residual and the solution.

    Arguments:
        config: the merged config.

    Returns:
        0 on convergence, else 1.
    """
    report = solve(config)

    echo(f"status: {report.status}")
    echo(f"iterations: {report.iterations}")
    echo(f"residual: {number(report.residual_norm)}")
    echo("x: " + " ".join(number(value) for value in report.x))

    if (path := config.get("solve.trace")) is not None:
        with path.open("w", newline="") as file:
            write_curve(file, report.trace or ())

    return 0 if report.converged else 1
