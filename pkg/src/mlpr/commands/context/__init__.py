"""
Print the merged configuration.
"""

from .cli import cli

__all__ = [cli]
