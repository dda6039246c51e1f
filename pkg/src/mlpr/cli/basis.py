"""
Module providing the root command group and the config pipeline run after it.
"""

from importlib import import_module as import_
from pathlib import Path
from tomllib import TOMLDecodeError, load
from typing import Any, Callable

from click import (
    Context,
    Group,
    UsageError,
    echo,
    get_app_dir,
    get_current_context,
    group,
)
from click import (
    version_option as version,
)
from click.core import ParameterSource

from mlpr.config import Config, clean
from mlpr.core import APP_NAME, CONFIG_NAME, get_command_import_path


class OrderedGroup(Group):
    """
    Group listing commands in definition order.
    """

    def list_commands(self, ctx: Context | None = None) -> list[str]:
        """
        List commands as internally stored.

        Arguments:
            ctx: the CLI context.

        Returns:
            a list of group commands.
        """
        return list(self.commands)


def info(message: str) -> None:
    """
    Emit a note to stderr.

    Arguments:
        message: the note.
    """
    echo(message, err=True)


def find_default_config_paths() -> list[Path]:
    """
    Find config files from highest to lowest precedence.

    Project files in the working directory and its parents come first, then
    the file in the OS-specific app directory.

    Returns:
        the paths of found config files.
    """
    paths = []

    cwd = Path.cwd()

    for path in [cwd, *cwd.parents]:
        config = path / CONFIG_NAME

        if config.exists():
            paths.append(config)

    app_dir_config = Path(get_app_dir(APP_NAME.lower())) / CONFIG_NAME

    if app_dir_config.exists():
        paths.append(app_dir_config)

    return paths


def read_config_files(paths: list[Path]) -> tuple[list[Path], Config]:
    """
    Read and merge config files.

    Arguments:
        paths: config file paths, sorted by descending precedence.

    Returns:
        the paths read successfully and the merged config, in which values of
        earlier paths win.
    """
    config = Config()

    unique_paths = []

    for path in paths:
        path = Path(path).resolve()

        if path not in unique_paths:
            unique_paths.append(path)

    checked_paths = []

    # lowest precedence first, later merges overwrite
    for path in reversed(unique_paths):
        try:
            with path.open(mode="rb") as file:
                data = load(file)
        except (FileNotFoundError, PermissionError, TOMLDecodeError) as exc:
            info(f"Ignoring {path}: {exc}")
        else:
            config.merge(data)
            checked_paths.append(path)

    checked_paths.reverse()

    return checked_paths, config


def stored(ctxs: dict[str, Context]) -> Config:
    """
    Initialize the config from config files.

    Arguments:
        ctxs: the invoked command contexts by command name.

    Returns:
        the config read from the files selected by the `config` command.
    """
    ctx = ctxs.get("config")
    params = dict(ctx.params) if ctx is not None else {}

    files = list(params.get("files") or [])

    if params.get("defaults", True):
        files = find_default_config_paths() + files

    paths, config = read_config_files(files)

    config["config.files"] = paths

    return config


def split(ctx: Context) -> tuple[dict, dict]:
    """
    Split CLI parameters into defaults and explicitly given values.

    Arguments:
        ctx: the CLI context.

    Returns:
        the parameters from defaults and the parameters from other sources.
    """
    default = {}
    given = dict(ctx.params)

    for param in ctx.params:
        source = ctx.get_parameter_source(param)

        if source in (ParameterSource.DEFAULT, ParameterSource.DEFAULT_MAP):
            default[param] = given.pop(param)

    return default, given


def merge(config: Config, ctxs: dict[str, Context]) -> None:
    """
    Merge the file config with the CLI parameters.

    Order of precedence, from highest to lowest:

    1. explicitly given CLI values
    2. additional config files, the first one highest
    3. project config files, the nearest one highest
    4. app directory config file
    5. CLI defaults

    Arguments:
        config: the file config, updated in place.
        ctxs: the invoked command contexts by command name.
    """
    default = Config()
    given = Config()

    for name, ctx in ctxs.items():
        default[name], given[name] = split(ctx)

    out = Config()

    for mapping in (default, config, given):
        out.merge(mapping)

    config.clear()
    config.update(out)


def typecast(config: Config) -> None:
    """
    Cast config values to the types of their CLI parameters.

    Arguments:
        config: the merged config.

    Raises:
        BadParameter: if a value from a config file is invalid.
    """
    for name in list(config):
        try:
            module = import_(get_command_import_path(name))
        except ImportError:
            info(f"Skipping type casting of table {name}: no corresponding command")
            continue

        command = module.cli
        ctx = Context(command, info_name=name)
        section = config[name]

        for param in command.params:
            if section.get(param.name) is not None:
                section[param.name] = param.type_cast_value(ctx, section[param.name])


def alter(config: Config, ctxs: dict[str, Context]) -> Callable | None:
    """
    Let every invoked command alter its config section.

    Arguments:
        config: the merged config.
        ctxs: the invoked command contexts by command name.

    Returns:
        the app routine returned by an app command, else `None`.
    """
    app = None

    for name, ctx in ctxs.items():
        section = config.setdefault(name, {})

        app = ctx.alter(section) or app

        for param in set(section.pop("unset", None) or []):
            section.pop(param, None)

    return app


def run(returned: list[dict[str, Any]]) -> None:
    """
    Routine executed at the end of a chain of commands.

    Arguments:
        returned: the return values of every invoked command.
    """
    ctxs = {}

    for mapping in returned:
        ctxs.update(mapping)

    config = stored(ctxs)
    merge(config, ctxs)
    typecast(config)

    app = alter(config, ctxs)

    if app is None:
        raise UsageError("no app command specified")

    clean(config)

    rc = app(config)

    get_current_context().exit(rc or 0)


@group(
    cls=OrderedGroup,
    chain=True,
    result_callback=run,
)
@version(prog_name=APP_NAME, package_name="mlpr")
def mlpr():
    """
    MLPR - Multilinear PageRank solvers and experiments.
    """
    return
