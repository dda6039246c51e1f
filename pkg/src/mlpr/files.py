"""
Module providing the text and CSV file formats.

Tensor files start with a line `n m`, followed by the `n` rows of `R` with
`n^m` space-separated entries each, columns in Kronecker order. Lines starting
with `#` and blank lines are ignored. Vector files hold `n` space-separated
entries.

Floats are written with 17 significant digits, so they read back exactly.
"""

import csv
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, TextIO

import numpy as np

from mlpr.core import DIGITS
from mlpr.linalg import Vector
from mlpr.tensor import CurvePoint, StochasticTensor

if TYPE_CHECKING:
    from mlpr.bench import InstanceRecord, Method

TENSOR_SUFFIX = ".txt"
"""Suffix of tensor files in a benchmark directory."""


class FormatError(ValueError):
    """
    Raised when a file does not follow its format.
    """

    def __init__(self, path: str | Path, line: int, message: str) -> None:
        """
        Arguments:
            path: the path of the file.
            line: the 1-based line number, 0 for the whole file.
            message: what is wrong.
        """
        self.path = Path(path)
        self.line = line

        where = f"{path}:{line}" if line else f"{path}"
        super().__init__(f"{where}: {message}")


def number(value: float) -> str:
    """
    Format a float with 17 significant digits.
    """
    return f"{value:.{DIGITS}g}"


def _lines(path: Path) -> list[tuple[int, list[str]]]:
    lines = []

    with path.open() as file:
        for lineno, line in enumerate(file, start=1):
            line = line.strip()

            if not line or line.startswith("#"):
                continue

            lines.append((lineno, line.split()))

    return lines


def _floats(path: Path, lineno: int, tokens: list[str]) -> list[float]:
    try:
        return [float(token) for token in tokens]
    except ValueError as exc:
        raise FormatError(path, lineno, str(exc)) from None


##
#
# READERS
#


def read_tensor(path: str | Path) -> StochasticTensor:
    """
    Read and validate a tensor file.

    Arguments:
        path: the path of the tensor file.

    Raises:
        FormatError: if the file is malformed.
        InvalidTensorError: if the tensor is not stochastic.

    Returns:
        the tensor.
    """
    path = Path(path)
    lines = _lines(path)

    if not lines:
        raise FormatError(path, 0, "empty file")

    lineno, header = lines[0]

    try:
        n, m = (int(token) for token in header)
    except ValueError:
        raise FormatError(path, lineno, "expected the header 'n m'") from None

    if n < 1 or m < 2:
        raise FormatError(path, lineno, f"need n >= 1 and m >= 2, got n={n}, m={m}")

    rows = lines[1:]

    if len(rows) != n:
        raise FormatError(path, 0, f"expected {n} rows, got {len(rows)}")

    r = np.empty((n, n**m))

    for i, (lineno, tokens) in enumerate(rows):
        if len(tokens) != n**m:
            raise FormatError(path, lineno, f"expected {n**m} entries, got {len(tokens)}")

        r[i] = _floats(path, lineno, tokens)

    tensor = StochasticTensor(r, m)
    tensor.check()

    return tensor


def read_tensor_dir(path: str | Path) -> tuple[tuple[str, StochasticTensor], ...]:
    """
    Read all tensor files in a directory, named by their stems.

    Raises:
        FormatError: if the directory holds no tensor files or a file is malformed.
    """
    path = Path(path)
    files = sorted(path.glob(f"*{TENSOR_SUFFIX}"))

    if not files:
        raise FormatError(path, 0, f"no *{TENSOR_SUFFIX} tensor files")

    return tuple((file.stem, read_tensor(file)) for file in files)


def read_vector(path: str | Path, n: int) -> Vector:
    """
    Read a vector file.

    Raises:
        FormatError: if the file does not hold exactly `n` entries.
    """
    path = Path(path)
    lines = _lines(path)

    values = [
        value for lineno, tokens in lines for value in _floats(path, lineno, tokens)
    ]

    if len(values) != n:
        raise FormatError(path, 0, f"expected {n} entries, got {len(values)}")

    return np.array(values)


##
#
# WRITERS
#


def write_tensor(path: str | Path, tensor: StochasticTensor) -> None:
    """
    Write a tensor file.
    """
    with Path(path).open("w") as file:
        file.write(f"{tensor.n} {tensor.m}\n")

        for row in tensor.r:
            file.write(" ".join(number(value) for value in row) + "\n")


def _writer(stream: TextIO):
    return csv.writer(stream, lineterminator="\n")


def write_curve(stream: TextIO, points: Sequence[CurvePoint]) -> None:
    """
    Write curve points as CSV with header `alpha,x1,...,xn,residual,tau`.
    """
    writer = _writer(stream)
    n = points[0].x.size if points else 0

    writer.writerow(["alpha", *(f"x{i}" for i in range(1, n + 1)), "residual", "tau"])

    for point in points:
        writer.writerow(
            [
                number(point.alpha),
                *(number(value) for value in point.x),
                number(point.residual_norm),
                number(point.tau),
            ]
        )


def write_instances(
    stream: TextIO,
    records: Iterable["InstanceRecord"],
    timing: bool = True,
) -> None:
    """
    Write per-instance records as CSV.

    Arguments:
        stream: the output.
        records: the records.
        timing: whether to include the `time_s` column.
    """
    writer = _writer(stream)

    header = ["id", "method", "alpha", "status", "iterations", "residual"]
    writer.writerow(header + ["time_s"] if timing else header)

    for record in records:
        row = [
            record.id,
            str(record.method),
            number(record.alpha),
            str(record.status),
            record.iterations,
            number(record.residual),
        ]
        writer.writerow(row + [number(record.time_s)] if timing else row)


def write_summary(
    stream: TextIO,
    table: Sequence[tuple[float, Mapping["Method", int]]],
) -> None:
    """
    Write failure counts as CSV, one row per parameter and one column per method.
    """
    writer = _writer(stream)
    methods = list(table[0][1]) if table else []

    writer.writerow(["alpha", *(str(method) for method in methods)])

    for alpha, counts in table:
        writer.writerow([number(alpha), *(counts[method] for method in methods)])


def write_profile(
    stream: TextIO,
    thetas: Sequence[float],
    fractions: Mapping[str, Sequence[float]],
) -> None:
    """
    Write a performance profile as CSV with header `theta,fraction_<method>,...`.
    """
    writer = _writer(stream)
    writer.writerow(["theta", *(f"fraction_{name}" for name in fractions)])

    for i, theta in enumerate(thetas):
        writer.writerow(
            [number(theta), *(number(values[i]) for values in fractions.values())]
        )
