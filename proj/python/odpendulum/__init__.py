"""Overdamped driven pendulum: exact stability, asymptotics and applications."""

from ._core import *  # noqa: F401,F403
from ._core import __version__
