"""Python bindings for the isospec C++ core."""
from _core import *  # noqa: F401,F403
