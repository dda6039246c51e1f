"""
Module specifying the logger context variable, the default formatter and the logging setup of commands.

Library modules get their loggers through [`get_logger`][mlpr.log.get_logger],
which nests them under the logger name of the running command if one is set.

Example:

```python
from mlpr.log import LOGGER_NAME, get_logger

LOGGER_NAME.set("mlpr.commands.solve")

# logs to "mlpr.commands.solve.Continuation"
log = get_logger("mlpr.continuation", "Continuation")
```
"""

import logging
import sys
from contextvars import ContextVar
from enum import IntEnum
from logging import DEBUG, INFO, WARNING, FileHandler, Formatter, StreamHandler

from mlpr.config import Config

LOGGER_NAME: ContextVar = ContextVar("logger_name")
"""
Context variable supposed to hold the logger name of the running command.
"""

ROOT_LOGGER_NAME = "mlpr"
"""Logger receiving the handler of a command run."""

HANDLER_NAME = "mlpr-command"
"""Name of the handler installed by [`setup_logging`][mlpr.log.setup_logging]."""


class LogLevel(IntEnum):
    """
    Enumeration of `logging` log levels.
    """

    WARNING = WARNING
    INFO = INFO
    DEBUG = DEBUG

    def __str__(self) -> str:
        """
        Convert a log level to a string.

        Returns:
            the string conversion of a log level.
        """
        return self.name


class DefaultFormatter(Formatter):
    """
    Default formatter for log records.

    It extends log messages with the following scheme:

        [<time>] [<log message level>] [<logger name>] <message>

    where `<time>` follows the [ISO 8601 standard](https://www.iso.org/iso-8601-date-and-time-format.html) with

        YYYY-MM-DD hh:mm:ss
    """

    def __init__(self):
        fmt = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
        datefmt = "%Y-%m-%d %H:%M:%S"

        super().__init__(fmt=fmt, datefmt=datefmt)


def get_logger(module: str, name: str | None = None) -> logging.Logger:
    """
    Get a logger nested under the running command's logger.

    Without a command logger name, the logger is `<module>[.<name>]`, else
    `<command>.<name>` with the last module component as default name.

    Arguments:
        module: the module name.
        name: an optional child name, e.g. a class name.

    Returns:
        the logger.
    """
    base = LOGGER_NAME.get(None)

    if base is None:
        parts = (module, name)
    else:
        parts = (base, name or module.rpartition(".")[2])

    return logging.getLogger(".".join(part for part in parts if part))


def setup_logging(config: Config, name: str) -> logging.Logger:
    """
    Install the handler configured in the `log` section.

    Records go to the log file if one is given, else to stderr.

    Arguments:
        config: the merged config.
        name: the logger name of the running command.

    Returns:
        the command logger.
    """
    LOGGER_NAME.set(name)

    root = logging.getLogger(ROOT_LOGGER_NAME)

    for handler in list(root.handlers):
        if handler.name == HANDLER_NAME:
            root.removeHandler(handler)
            handler.close()

    if (file := config.get("log.file")) is not None:
        handler = FileHandler(file)
    else:
        handler = StreamHandler(sys.stderr)

    handler.name = HANDLER_NAME
    handler.setFormatter(DefaultFormatter())
    root.addHandler(handler)

    level = config.get("log.level", LogLevel.WARNING)
    root.setLevel(level)

    return logging.getLogger(name)
