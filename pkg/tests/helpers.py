"""Shared test helpers."""

import threading

import numpy as np
import pytest

WATCHDOG_SECONDS = 60


def run_threads(target, shares, timeout=WATCHDOG_SECONDS):
    """Run ``target(share)`` on one thread per share; fail if any hangs or raises."""
    errors = []

    def wrap(share):
        try:
            target(share)
        except BaseException as exc:
            errors.append(exc)

    ts = [threading.Thread(target=wrap, args=(s,), daemon=True) for s in shares]
    for t in ts:
        t.start()
    for t in ts:
        t.join(timeout)
        if t.is_alive():
            pytest.fail(f"worker still running after {timeout}s (deadlock or livelock)")
    if errors:
        raise errors[0]


def random_antichain(rng, n, k):
    """Points on the simplex-like surface sum(x) = 1 are mutually incomparable."""
    x = rng.random((n, k)) + 1e-9
    return x / x.sum(axis=1, keepdims=True)


def front_points(rng, n, k, spread=0.3):
    """Points scattered around a decreasing front, giving many levels."""
    x = rng.random((n, k))
    x[:, -1] = 1.0 - x[:, :-1].mean(axis=1) + spread * rng.random(n)
    return x
