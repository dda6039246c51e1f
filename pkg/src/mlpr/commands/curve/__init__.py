"""
Trace the solution curve of an instance.
"""

from .cli import cli

__all__ = [cli]
