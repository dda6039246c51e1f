"""
Select config files.
"""

from .cli import cli

__all__ = [cli]
