"""Numerical checks for shifted moments of Hardy's Z-function."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
