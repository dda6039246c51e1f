"""
Module providing options shared by the app commands and the instance loading behind them.
"""

from pathlib import Path
from typing import Any, Mapping

from click import FloatRange, IntRange, UsageError, option
from click import Choice as ChoiceParamType
from click import Path as PathParamType

from mlpr.bench import random_tensor
from mlpr.continuation import Predictor
from mlpr.core import DELTA, MAXIT, TAU0, TOL
from mlpr.files import FormatError, read_tensor, read_vector
from mlpr.tensor import InvalidTensorError, Problem, StochasticTensor

from .params import UNIFORM, IntTriple, VectorSource

tensor = option(
    "--tensor",
    "-t",
    "tensor",
    help="Path to a tensor file.",
    type=PathParamType(
        path_type=Path,
        exists=True,
        file_okay=True,
        dir_okay=False,
        readable=True,
        resolve_path=True,
    ),
)
"""The tensor file option."""

random = option(
    "--random",
    "-r",
    "random",
    help="Generate a random sparse tensor of dimension n and order m from a seed.",
    type=IntTriple(),
)
"""The random tensor option."""

vector = option(
    "--v",
    "v",
    help="Path to a teleportation vector file, or 'uniform'.",
    type=VectorSource(),
    default=UNIFORM,
    show_default=True,
)
"""The teleportation vector option."""

tol = option(
    "--tol",
    help="Tolerance on the 1-norm of the residual.",
    type=FloatRange(min=0.0, min_open=True),
    default=TOL,
    show_default=True,
)
"""The tolerance option."""

maxit = option(
    "--maxit",
    help="Iteration budget.",
    type=IntRange(min=1),
    default=MAXIT,
    show_default=True,
)
"""The iteration budget option."""

alpha0 = option(
    "--alpha0",
    help="Starting parameter of the continuation.  [default: slightly below 1/m]",
    type=FloatRange(0.0, 1.0, min_open=True, max_open=True),
)
"""The continuation starting parameter option."""

tau0 = option(
    "--tau0",
    help="Initial step size of the continuation.",
    type=FloatRange(min=0.0, min_open=True),
    default=TAU0,
    show_default=True,
)
"""The initial step size option."""

delta = option(
    "--delta",
    help="Nominal size of the first correction.",
    type=FloatRange(min=0.0, min_open=True),
    default=DELTA,
    show_default=True,
)
"""The nominal distance option."""

predictor = option(
    "--predictor",
    help="Direction of the predictor step.",
    type=ChoiceParamType([p.value for p in Predictor]),
    default=Predictor.TANGENT.value,
    show_default=True,
)
"""The predictor option."""

TRANSLATE = {
    "tensor": "tensor",
    "t": "tensor",
    "random": "random",
    "r": "random",
    "v": "v",
    "tol": "tol",
    "maxit": "maxit",
    "alpha0": "alpha0",
    "tau0": "tau0",
    "delta": "delta",
    "predictor": "predictor",
}
"""Translations from flag to parameter names of the shared options."""


def check_source(section: Mapping[str, Any]) -> None:
    """
    Ensure exactly one tensor source in a config section.

    Raises:
        UsageError: if neither or both of `tensor` and `random` are set.
    """
    given = [key for key in ("tensor", "random") if section.get(key) is not None]

    if len(given) != 1:
        raise UsageError("give exactly one of --tensor and --random")


def load_tensor(section: Mapping[str, Any]) -> StochasticTensor:
    """
    Load the tensor named in a config section.

    Raises:
        UsageError: if the tensor file is malformed or the tensor is not stochastic.
    """
    if (path := section.get("tensor")) is not None:
        try:
            return read_tensor(path)
        except (OSError, FormatError, InvalidTensorError, ValueError) as exc:
            raise UsageError(str(exc)) from None

    n, m, seed = section["random"]

    return random_tensor(n, m, seed)


def load_problem(section: Mapping[str, Any], alpha: float) -> Problem:
    """
    Load the instance described by a config section.

    Raises:
        UsageError: if an input file is invalid.
    """
    tensor = load_tensor(section)
    source = section.get("v", UNIFORM)

    try:
        if source == UNIFORM:
            return Problem.uniform(tensor, alpha)

        return Problem(tensor, read_vector(source, tensor.n), alpha)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
