"""
CLI definition.
"""

from importlib import import_module as import_
from pathlib import Path

from click import Choice, FloatRange, UsageError, command, option
from click import Path as PathParamType

from mlpr.bench import Method
from mlpr.cli import context, options, unset
from mlpr.config import Config
from mlpr.log import setup_logging

TRANSLATE = {
    **options.TRANSLATE,
    "alpha": "alpha",
    "a": "alpha",
    "method": "method",
    "m": "method",
    "normalize": "normalize",
    "no-normalize": "normalize",
    "trace": "trace",
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
        the exit code, 0 on convergence and 1 otherwise.
    """
    setup_logging(config, __package__)

    # defer heavy app import
    app = import_(".app", __package__)

    try:
        return app.main(config)
    except (PermissionError, IsADirectoryError) as exc:
        raise UsageError(str(exc)) from None


@command(name="solve")
@options.tensor
@options.random
@options.vector
@option(
    "--alpha",
    "-a",
    "alpha",
    help="The damping parameter.",
    type=FloatRange(0.0, 1.0, max_open=True),
)
@option(
    "--method",
    "-m",
    "method",
    help="The solver.",
    type=Choice([method.value for method in Method]),
    default=Method.PCN.value,
    show_default=True,
)
@options.tol
@options.maxit
@option(
    "--normalize/--no-normalize",
    "normalize",
    help="Rescale Newton iterates to unit entry sum.",
    default=True,
    show_default=True,
)
@options.alpha0
@options.tau0
@options.delta
@options.predictor
@option(
    "--trace",
    "trace",
    help="Path to a CSV file receiving the accepted curve points or the iterates.",
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
    Solve x = α R(x^m) + (1-α) v for a stochastic x.
    \f

    Arguments:
        config: the merged `solve` config section.
    """
    options.check_source(config)

    if config.get("alpha") is None:
        raise UsageError("missing option '--alpha'")

    return run
