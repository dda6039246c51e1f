from click import command, echo, option
from tomli_w import dumps

from mlpr.cli import context, unset
from mlpr.config import Config, convert, deepsort

TRANSLATE = {
    "config": "config",
    "c": "config",
}
"""
Table for translation from flag to parameter names.
"""


def run(config: Config) -> None:
    """
    Print the merged config as TOML.

    Arguments:
        config: the merged config.
    """
    if not config.get("context.config", False):
        config.pop("config", None)

    config.pop("context", None)

    echo(dumps(deepsort(convert(config))))


@command(name="context")
@option(
    "--config",
    "-c",
    "config",
    is_flag=True,
    help="Show the config file selection as well.",
)
@unset(TRANSLATE)
@context
def cli(config: dict) -> None:
    """
    Print the parameters passed to the other commands.
    \f

    Arguments:
        config: the merged `context` config section.
    """
    return run
