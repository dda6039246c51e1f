"""
CLI definition.
"""

from pathlib import Path

from click import INT, IntRange, UsageError, command, echo, option
from click import Path as PathParamType

from mlpr.bench import ExperimentSpec
from mlpr.cli import context, unset
from mlpr.config import Config
from mlpr.files import TENSOR_SUFFIX, write_tensor

TRANSLATE = {
    "count": "count",
    "c": "count",
    "n": "n",
    "m": "m",
    "seed": "seed",
    "s": "seed",
    "out": "out",
    "o": "out",
}
"""
Table for translation from flag to parameter names.
"""


def run(config: Config) -> int:
    """
    Write the ensemble a `bench` run with the same parameters would solve.

    Arguments:
        config: the merged config.

    Returns:
        the exit code.
    """
    c = config["generate"]

    spec = ExperimentSpec(
        ensemble_size=c["count"],
        n=c["n"],
        m=c["m"],
        seed=c["seed"],
    )

    out = c["out"]

    try:
        out.mkdir(parents=True, exist_ok=True)

        for name, tensor in spec.instances():
            write_tensor(out / f"{name}{TENSOR_SUFFIX}", tensor)
    except OSError as exc:
        raise UsageError(str(exc)) from None

    echo(f"Wrote {spec.ensemble_size} tensors to {out}", err=True)

    return 0


@command(name="generate")
@option(
    "--count",
    "-c",
    "count",
    help="Number of tensors.",
    type=IntRange(min=1),
    default=1,
    show_default=True,
)
@option(
    "--n",
    "n",
    help="Dimension.",
    type=IntRange(min=1),
    default=5,
    show_default=True,
)
@option(
    "--m",
    "m",
    help="Order.",
    type=IntRange(min=2),
    default=2,
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
    "--out",
    "-o",
    "out",
    help="Directory receiving the tensor files.",
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
    Write random sparse stochastic tensors as files named like bench instances.
    \f

    Arguments:
        config: the merged `generate` config section.
    """
    if config.get("out") is None:
        raise UsageError("missing option '--out'")

    return run
