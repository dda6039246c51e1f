"""
Solve a multilinear PageRank instance.
"""

from .cli import cli

__all__ = [cli]
