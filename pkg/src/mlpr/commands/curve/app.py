"""
App definition.
"""

import sys

from click import UsageError, echo

from mlpr.cli.options import load_problem
from mlpr.config import Config
from mlpr.continuation import (
    ContinuationConfig,
    NewtonFailedError,
    SingularPointError,
    StepSizeTooSmallError,
    trace_curve,
    turning_points,
)
from mlpr.files import write_curve


def main(config: Config) -> int:
    """
    Main app routine.

    Writes the accepted points and reports the turning points on stderr.

    Arguments:
        config: the merged config.

    Returns:
        0 if the curve reached the stop parameter, else 1.
    """
    c = config["curve"]
    alpha_stop = c.get("alpha_stop", 1.0)

    # the parameter of the instance is not used for tracing
    problem = load_problem(c, 0.0)

    try:
        cfg = ContinuationConfig.from_config(c)
        points = trace_curve(problem, cfg, alpha_stop)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except (NewtonFailedError, SingularPointError, StepSizeTooSmallError) as exc:
        echo(f"Tracing failed: {exc}", err=True)
        return 1

    if (path := c.get("out")) is not None:
        with path.open("w", newline="") as file:
            write_curve(file, points)
    else:
        write_curve(sys.stdout, points)

    for index in turning_points(points):
        echo(f"turning point at alpha={points[index].alpha:.6f} (point {index})", err=True)

    return 0 if points[-1].alpha >= alpha_stop else 1
