"""
Count failures and profile costs of the solvers on an ensemble.
"""

from .cli import cli

__all__ = [cli]
