"""Partial-wave dynamics of 3D oscillator wave packets with spin-orbit coupling."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
