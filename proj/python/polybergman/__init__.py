"""Polynomial Bergman spaces, Berezin transforms, and planar equilibrium
potentials, backed by the C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
