"""Bounds for the finite-state multiple-access wiretap channel with delayed feedback."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
