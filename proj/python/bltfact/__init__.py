"""Buffered linear Toeplitz factorizations for private prefix sums."""

from ._core import *  # noqa: F401,F403
