"""Atomic reference and counter.

CPython exposes no hardware compare-and-set, so both types guard their
read-modify-write with a private lock held for a handful of bytecodes.
Plain reads are lock-free: attribute loads are atomic in CPython.
"""

from __future__ import annotations

import threading
from typing import Generic, TypeVar

T = TypeVar("T")


class AtomicReference(Generic[T]):
    """A reference that can be replaced only if it still holds an expected object."""

    __slots__ = ("_value", "_lock")

    def __init__(self, value: T):
        self._value = value
        self._lock = threading.Lock()

    def get(self) -> T:
        return self._value

    def set(self, value: T) -> None:
        with self._lock:
            self._value = value

    def compare_and_set(self, expected: T, new: T) -> bool:
        """Store ``new`` iff the current value *is* ``expected`` (identity)."""
        with self._lock:
            if self._value is expected:
                self._value = new
                return True
            return False


class AtomicCounter:
    """Monotone integer shared between threads."""

    __slots__ = ("_value", "_lock")

    def __init__(self, value: int = 0):
        self._value = value
        self._lock = threading.Lock()

    @property
    def value(self) -> int:
        return self._value

    def increment_and_get(self, delta: int = 1) -> int:
        with self._lock:
            self._value += delta
            return self._value

    def get_and_increment(self) -> int:
        with self._lock:
            v = self._value
            self._value = v + 1
            return v
