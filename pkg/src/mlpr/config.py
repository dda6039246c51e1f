"""
Module defining the configuration mapping with dotted config paths.

A config path like `"solve.tol"` addresses the key `tol` in the table `solve`,
mirroring the TOML tables of the config files.
"""

from collections.abc import Iterable, Mapping, Sequence
from typing import Any

from deepmerge import always_merger

DELIMITER = "."
"""The delimiter of keys in a config path."""

_MISSING = object()


class Config(dict):
    """
    Dictionary with config path lookup.
    """

    def __repr__(self) -> str:
        """
        Get the string representation.

        Returns:
            the string representation of this config.
        """
        return f"{self.__class__.__name__}({super().__repr__()})"

    def _parent(self, path: str, create: bool) -> tuple[dict, str]:
        """
        Get the table holding the last key of a path.

        Arguments:
            path: the config path.
            create: if `True`, insert missing or non-table intermediates as tables.

        Raises:
            KeyError: if `create` is `False` and an intermediate table is absent.

        Returns:
            the parent table and the last key.
        """
        *tables, last = path.split(DELIMITER)

        current: dict = self

        for table in tables:
            child = dict.get(current, table)

            if not isinstance(child, dict):
                if not create:
                    raise KeyError(path)

                child = {}
                dict.__setitem__(current, table, child)

            current = child

        return current, last

    def get(self, path: str, default: Any = None) -> Any:
        """
        Get the value of a path.

        Arguments:
            path: the config path to query.
            default: the value to return when the path is absent.

        Returns:
            the value of a present path, else the default.
        """
        try:
            return self[path]
        except KeyError:
            return default

    def __getitem__(self, path: str) -> Any:
        """
        Look up the value of a path.

        Raises:
            KeyError: if the path is absent.
        """
        parent, key = self._parent(path, create=False)

        try:
            return dict.__getitem__(parent, key)
        except KeyError:
            raise KeyError(path) from None

    def __setitem__(self, path: str, value: Any) -> None:
        """
        Set the value of a path, creating intermediate tables.
        """
        parent, key = self._parent(path, create=True)
        dict.__setitem__(parent, key, value)

    def __contains__(self, path: str) -> bool:
        """
        Check for presence of a path.
        """
        try:
            self[path]
        except KeyError:
            return False

        return True

    def setdefault(self, path: str, default: Any = None) -> Any:
        """
        Get the value of a present path or set it to the default.

        Returns:
            the value now stored under the path.
        """
        if path not in self:
            self[path] = default

        return self[path]

    def pop(self, path: str, default: Any = _MISSING) -> Any:
        """
        Remove a path and return its value.

        Raises:
            KeyError: if the path is absent and no default was given.

        Returns:
            the removed value or the default.
        """
        try:
            parent, key = self._parent(path, create=False)
            return dict.pop(parent, key)
        except KeyError:
            if default is _MISSING:
                raise KeyError(path) from None

            return default

    def merge(self, other: Mapping) -> "Config":
        """
        Deepmerge another mapping into this config.

        Values of `other` take precedence, nested tables are merged.

        Arguments:
            other: the new config data.

        Returns:
            this config, for chaining.
        """
        always_merger.merge(self, dict(other))

        return self


def clean(mapping: dict) -> None:
    """
    Remove `None` values and empty containers, recursing into tables.

    Arguments:
        mapping: the mapping to clean in place.
    """
    for key, value in list(dict.items(mapping)):
        if isinstance(value, dict):
            clean(value)

        if value is None or (isinstance(value, (list, tuple, dict)) and not value):
            dict.pop(mapping, key)


def convert(item: Any) -> Any:
    """
    Make an item TOML-serializable.

    Containers are converted recursively, other types, including subclasses
    of the TOML scalar types, become strings.

    Arguments:
        item: the item to convert.

    Returns:
        the TOML-serializable conversion of the given item.
    """
    if isinstance(item, Mapping):
        return {str(key): convert(value) for key, value in item.items()}

    if isinstance(item, Sequence) and not isinstance(item, str):
        return [convert(value) for value in item]

    # exact types, enum members become their names
    if type(item) in (str, bool, int, float):
        return item

    return str(item)


def deepsort(obj: Any) -> Any:
    """
    Sort mappings by key, recursively.

    Arguments:
        obj: the object to sort.

    Returns:
        a sorted `dict` for mappings, a list of sorted items for other
        non-string iterables, else `obj` untouched.
    """
    if isinstance(obj, Mapping):
        return {key: deepsort(value) for key, value in sorted(obj.items())}

    if isinstance(obj, Iterable) and not isinstance(obj, str):
        return [deepsort(value) for value in obj]

    return obj
