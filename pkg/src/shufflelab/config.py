"""Enumeration limits shared by the oracle code paths.

The limits are configuration rather than constants: callers may pass an
explicit cap to any enumerating function, or adjust ``LIMITS`` for a whole
session.
"""
from __future__ import annotations

import os
from dataclasses import dataclass


@dataclass
class Limits:
    symmetric: int = 7
    hyperoctahedral: int = 5
    syt: int = 14
    partitions: int = 40
    dense_spectrum: int = 5040


LIMITS = Limits()


class CapExceeded(ValueError):
    """Raised when an enumeration would exceed its configured cap."""


def thread_count(requested: int | None = None) -> int:
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("SHUFFLE_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1
