"""
CLI definition.
"""

from importlib import import_module as import_
from pathlib import Path

from click import FloatRange, UsageError, command, option
from click import Path as PathParamType

from mlpr.cli import context, options, unset
from mlpr.config import Config
from mlpr.log import setup_logging

TRANSLATE = {
    **options.TRANSLATE,
    "alpha-stop": "alpha_stop",
    "out": "out",
    "o": "out",
}
"""
Table for translation from flag to parameter names.
"""


def run(config: Config) -> int:
    """
    Run the app.

    Arguments:
        config: the merged config.

    Returns:
        the exit code, 0 if the curve reached the stop parameter.
    """
    setup_logging(config, __package__)

    app = import_(".app", __package__)

    try:
        return app.main(config)
    except PermissionError as exc:
        raise UsageError(str(exc)) from None


@command(name="curve")
@options.tensor
@options.random
@options.vector
@option(
    "--alpha-stop",
    "alpha_stop",
    help="Parameter at which the tracing stops.",
    type=FloatRange(0.0, 1.0, min_open=True),
    default=1.0,
    show_default=True,
)
@options.tol
@options.maxit
@options.alpha0
@options.tau0
@options.delta
@options.predictor
@option(
    "--out",
    "-o",
    "out",
    help="Path to the CSV file receiving the curve points.  [default: stdout]",
    type=PathParamType(
        path_type=Path,
        exists=False,
        file_okay=True,
        dir_okay=False,
        writable=True,
        resolve_path=True,
    ),
)
@unset(TRANSLATE)
@context
def cli(config: dict) -> None:
    """
    Trace the solution curve through (v, 0) as CSV.
    \f

    Arguments:
        config: the merged `curve` config section.
    """
    options.check_source(config)

    return run
