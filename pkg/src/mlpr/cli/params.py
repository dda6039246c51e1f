"""
Module providing parameter types of the commands.

Every type accepts values already converted, as well as strings from the
command line and values from config files.
"""

from pathlib import Path
from typing import Any

from click import Context, Parameter, ParamType

from mlpr.bench import Method

UNIFORM = "uniform"
"""Vector source of the uniform teleportation vector."""


def _items(value: Any) -> list:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]

    return list(value)


class IntTriple(ParamType):
    """
    Comma-separated triple of integers like `n,m,seed`.
    """

    name = "n,m,seed"

    def convert(
        self, value: Any, param: Parameter | None, ctx: Context | None
    ) -> tuple[int, int, int]:
        try:
            items = tuple(int(item) for item in _items(value))
        except (TypeError, ValueError):
            self.fail(f"'{value}' is not a comma-separated list of integers", param, ctx)

        if len(items) != 3:
            self.fail(f"expected three integers, got {len(items)}", param, ctx)

        n, m, _ = items

        if n < 1 or m < 2:
            self.fail(f"need n >= 1 and m >= 2, got n={n}, m={m}", param, ctx)

        return items


class FloatList(ParamType):
    """
    Comma-separated floats in the open unit interval.
    """

    name = "floats"

    def convert(
        self, value: Any, param: Parameter | None, ctx: Context | None
    ) -> tuple[float, ...]:
        try:
            items = tuple(float(item) for item in _items(value))
        except (TypeError, ValueError):
            self.fail(f"'{value}' is not a comma-separated list of floats", param, ctx)

        if not items:
            self.fail("empty list", param, ctx)

        if not all(0.0 < item < 1.0 for item in items):
            self.fail(f"values must lie in (0, 1), got {items}", param, ctx)

        return items


class MethodList(ParamType):
    """
    Comma-separated solver names.
    """

    name = "methods"

    def convert(
        self, value: Any, param: Parameter | None, ctx: Context | None
    ) -> tuple[Method, ...]:
        try:
            items = tuple(Method(item) for item in _items(value))
        except (TypeError, ValueError):
            choices = ", ".join(method.value for method in Method)
            self.fail(f"'{value}' holds unknown methods, use {choices}", param, ctx)

        if not items:
            self.fail("empty list", param, ctx)

        # first occurrence wins
        return tuple(dict.fromkeys(items))


class VectorSource(ParamType):
    """
    Path to a vector file or `uniform`.
    """

    name = "FILE|uniform"

    def convert(
        self, value: Any, param: Parameter | None, ctx: Context | None
    ) -> Path | str:
        if value == UNIFORM:
            return value

        path = Path(value)

        if not path.is_file():
            self.fail(f"vector file '{path}' does not exist", param, ctx)

        return path.resolve()
