"""
CLI definition.
"""

from importlib import import_module as import_
from pathlib import Path

from click import INT, Choice, IntRange, UsageError, command, option
from click import Path as PathParamType

from mlpr.bench import Cost
from mlpr.cli import context, options, unset
from mlpr.cli.params import FloatList, MethodList
from mlpr.config import Config
from mlpr.core import ENSEMBLE_SIZE
from mlpr.log import setup_logging

TRANSLATE = {
    **{
        key: value
        for key, value in options.TRANSLATE.items()
        if value not in ("tensor", "random", "v")
    },
    "ensemble": "ensemble",
    "e": "ensemble",
    "n": "n",
    "m": "m",
    "alphas": "alphas",
    "methods": "methods",
    "seed": "seed",
    "s": "seed",
    "workers": "workers",
    "w": "workers",
    "tensors": "tensors",
    "profile-cost": "profile_cost",
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
        the exit code.
    """
    setup_logging(config, __package__)

    # defer heavy app import
    app = import_(".app", __package__)
    anyio = import_("anyio")

    try:
        return anyio.run(app.main, config)
    except PermissionError as exc:
        raise UsageError(str(exc)) from None
    except KeyboardInterrupt:
        return 1


@command(name="bench")
@option(
    "--ensemble",
    "-e",
    "ensemble",
    help="Number of random instances.",
    type=IntRange(min=1),
    default=ENSEMBLE_SIZE,
    show_default=True,
)
@option(
    "--n",
    "n",
    help="Dimension of random instances.",
    type=IntRange(min=1),
    default=5,
    show_default=True,
)
@option(
    "--m",
    "m",
    help="Order of random instances.",
    type=IntRange(min=2),
    default=2,
    show_default=True,
)
@option(
    "--alphas",
    "alphas",
    help="Comma-separated damping parameters.",
    type=FloatList(),
    default="0.90,0.95,0.99",
    show_default=True,
)
@option(
    "--methods",
    "methods",
    help="Comma-separated solvers out of n, pcn and fp.",
    type=MethodList(),
    default="n,pcn",
    show_default=True,
)
@option(
    "--seed",
    "-s",
    "seed",
    help="Experiment seed.",
    type=INT,
    default=0,
    show_default=True,
)
@option(
    "--workers",
    "-w",
    "workers",
    help="Number of instances solved concurrently.",
    type=IntRange(min=1),
    default=1,
    show_default=True,
)
@option(
    "--tensors",
    "tensors",
    help="Directory of tensor files replacing the random ensemble.",
    type=PathParamType(
        path_type=Path,
        exists=True,
        file_okay=False,
        dir_okay=True,
        readable=True,
        resolve_path=True,
    ),
)
@option(
    "--profile-cost",
    "profile_cost",
    help="Cost measure of the performance profiles.",
    type=Choice([cost.value for cost in Cost]),
    default=Cost.ITERATIONS.value,
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
    help="Directory receiving instances.csv, summary.csv and the profile_<alpha>.csv files.",
    type=PathParamType(
        path_type=Path,
        exists=False,
        file_okay=False,
        dir_okay=True,
        writable=True,
        resolve_path=True,
    ),
)
@unset(TRANSLATE)
@context
def cli(config: dict) -> None:
    """
    Count solver failures on random or given tensors.
    \f

    Arguments:
        config: the merged `bench` config section.
    """
    return run
