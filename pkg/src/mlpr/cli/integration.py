"""
Module providing the decorators and options shared by all commands.
"""

from functools import wraps
from typing import Any, Callable

from click import Context, Parameter, ParamType, option
from click import pass_context as ctx


def context(arg: Callable | None = None) -> Callable:
    """
    Make a command return its context instead of running.

    The decorated function becomes the alteration routine of its config
    section, called by [`run`][mlpr.cli.basis.run] after merging.

    Arguments:
        arg: the command function, for use without parenthesis.

    Returns:
        the decorated function.
    """

    def _context(cmd: Callable) -> Callable:
        @wraps(cmd)
        @ctx
        def __context(ctx: Context, **kwargs: Any) -> dict[str, Context]:
            ctx.alter = cmd

            return {ctx.command.name: ctx}

        return __context

    if callable(arg):
        return _context(arg)
    else:
        return _context


class TranslatedChoice(ParamType):
    """
    A choice from flag to parameter name translation mapping.
    """

    name = "choice"

    def __init__(self, translate: dict[str, str]) -> None:
        """
        Arguments:
            translate: the flag to parameter name mapping.
        """
        self.translate = translate

    def convert(self, value: str, param: Parameter | None, ctx: Context | None) -> str:
        """
        Convert a flag to its parameter name.

        Returns:
            the parameter name.
        """
        # already converted
        if value in self.translate.values():
            return value

        try:
            return self.translate[value]
        except KeyError:
            self.fail(
                f"'{value}' is not a valid choice. Use one from {list(self.translate)}",
                param,
                ctx,
            )


def unset(translate: dict[str, str]) -> Callable:
    """
    Get the `--unset` option of a command.

    Arguments:
        translate: the translation mapping from flag to parameter names.

    Returns:
        the configured option decorator.
    """
    return option(
        "--unset",
        "-?",
        "unset",
        metavar="ENTRY",
        multiple=True,
        show_choices=False,
        help="Unset the value of a command option. Can be given multiple times.",
        type=TranslatedChoice(translate),
    )
