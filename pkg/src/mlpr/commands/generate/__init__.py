"""
Write random sparse tensors to tensor files.
"""

from .cli import cli

__all__ = [cli]
