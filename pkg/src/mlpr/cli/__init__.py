from .basis import mlpr
from .integration import context, unset

__all__ = [
    mlpr,
    context,
    unset,
]
