"""Tactile-only grasp controller and simulation bindings."""

from tgrasp._core import *  # noqa: F401,F403
from tgrasp._core import __version__  # noqa: F401
