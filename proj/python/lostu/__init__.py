"""Uncertainty-aware non-iterative multi-view triangulation."""

from ._lostu import *  # noqa: F401,F403
from ._lostu import __version__  # noqa: F401
