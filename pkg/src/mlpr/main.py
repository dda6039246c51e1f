"""
Module with the entry point for the `mlpr` command.

Subcommands are defined in the respective command package.
"""

from importlib import import_module as import_
from pathlib import Path

from mlpr.cli import mlpr
from mlpr.core import COMMAND_DIR_NAME, get_command_import_path

ORDER = ["config", "log", "context", "solve", "curve", "bench", "generate"]
"""Listing order of known commands, others follow alphabetically."""


def commands() -> list[str]:
    """
    Get all namespace package names from the command directory.

    Returns:
        the namespace package names in listing order.
    """
    root = Path(__file__).parent / COMMAND_DIR_NAME

    names = [
        path.name
        for path in root.iterdir()
        if path.is_dir() and (path / "__init__.py").exists()
    ]

    def position(name: str) -> tuple[int, str]:
        return (ORDER.index(name) if name in ORDER else len(ORDER), name)

    return sorted(names, key=position)


for path in map(get_command_import_path, commands()):
    module = import_(path)
    mlpr.add_command(module.cli)

if __name__ == "__main__":
    mlpr()
