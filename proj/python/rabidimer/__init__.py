"""Rabi-dimer superradiant-transition numerics (bindings over the C++ core)."""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
