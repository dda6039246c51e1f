"""
Definition of library constants.
"""

import math

import numpy as np

APP_NAME = "MLPR"
"""Default app name."""

CONFIG_NAME = APP_NAME.lower() + ".toml"
"""Default configuration file name."""

COMMAND_DIR_NAME = "commands"
"""Directory name where command namespace packages are searched for."""


def get_command_import_path(command: str) -> str:
    """
    Get the Python import path for a command.

    Arguments:
        command: the command namespace package name.

    Returns:
        the import path of a command namespace package.
    """
    return f"mlpr.{COMMAND_DIR_NAME}.{command}"


##
#
# SOLVER DEFAULTS
#

TOL = math.sqrt(np.finfo(np.float64).eps)
"""Default residual tolerance, the square root of the unit roundoff."""

MAXIT = 10_000
"""Default iteration budget."""

DIVERGENCE_BOUND = 1e6
"""1-norm above which a Newton iterate counts as diverged."""

RANK_TOL = 1e-12
"""Relative threshold on the diagonal of triangular factors."""


##
#
# CONTINUATION DEFAULTS
#

TAU0 = 0.01
"""Initial step size."""

DELTA = 0.1
"""Nominal distance of the predicted point to the curve."""

TAU_MAX_FACTOR = 5.0
"""Step sizes are capped at this multiple of the initial step size."""

F_MIN = 0.5
"""Lower clamp of the deceleration factor."""

F_RETRY = 2.0
"""Deceleration factor above which a predictor step is retried."""

MAX_CORRECTOR = 20
"""Corrector steps allowed per predictor step."""

TAU_MIN = 1e-10
"""Step size below which continuation gives up."""

ALPHA0_MARGIN = 0.01
"""Relative distance kept below `1/m` by the default starting parameter."""

ALPHA_MAX = 1.0
"""End of the curve, predictor steps do not go beyond it."""

SIMPLEX_SLACK = 100.0
"""Multiple of the tolerance by which accepted points may leave the probability simplex."""


##
#
# EXPERIMENT DEFAULTS
#

ENSEMBLE_SIZE = 1_000
"""Default number of random instances per experiment."""

DIGITS = 17
"""Significant digits of floats written to result files."""
