"""Thread-safe archives sharing the :class:`ConcurrentArchive` interface.

========  ==============================================================
``sync``  one lock around the sequential structure
``cas1``  per-level compare-and-set with full merges
``cas2``  ``cas1`` plus level time stamps enabling one-sided merges
``lock``  hand-over-hand level locks with deferred trimming
========  ==============================================================
"""

from __future__ import annotations

from ..core import UsageError
from .base import ArchiveStats, ConcurrentArchive
from .cas import CASArchive, TimestampCASArchive
from .global_lock import GlobalLockArchive
from .level_lock import LevelLockArchive

STRATEGIES: dict[str, type[ConcurrentArchive]] = {
    "sync": GlobalLockArchive,
    "cas1": CASArchive,
    "cas2": TimestampCASArchive,
    "lock": LevelLockArchive,
}


def make_archive(strategy: str, levels, **kwargs) -> ConcurrentArchive:
    try:
        cls = STRATEGIES[strategy]
    except KeyError:
        raise UsageError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}") from None
    return cls(levels, **kwargs)


__all__ = ["STRATEGIES", "ArchiveStats", "CASArchive", "ConcurrentArchive", "GlobalLockArchive",
           "LevelLockArchive", "TimestampCASArchive", "make_archive"]
