"""ZDT and DTLZ test problems (minimization).

Every evaluator takes an (n, d) batch of decision vectors and returns the
(n, k) objectives; a single 1-D vector is accepted too.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import UsageError

ZDT_NAMES = ("ZDT1", "ZDT2", "ZDT3", "ZDT4", "ZDT6")
DTLZ_NAMES = ("DTLZ1", "DTLZ2", "DTLZ3", "DTLZ4", "DTLZ7")
PROBLEM_NAMES = ZDT_NAMES + DTLZ_NAMES
DTLZ_K = (3, 4, 6, 8, 10)
DTLZ4_ALPHA = 100.0


def _zdt_g_linear(x):
    return 1.0 + 9.0 * x[:, 1:].sum(axis=1) / (x.shape[1] - 1)


def _zdt1(x, k):
    f1 = x[:, 0]
    g = _zdt_g_linear(x)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


def _zdt2(x, k):
    f1 = x[:, 0]
    g = _zdt_g_linear(x)
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])


def _zdt3(x, k):
    f1 = x[:, 0]
    g = _zdt_g_linear(x)
    r = f1 / g
    return np.column_stack([f1, g * (1.0 - np.sqrt(r) - r * np.sin(10.0 * np.pi * f1))])


def _zdt4(x, k):
    f1 = x[:, 0]
    rest = x[:, 1:]
    g = 1.0 + 10.0 * rest.shape[1] + (rest**2 - 10.0 * np.cos(4.0 * np.pi * rest)).sum(axis=1)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


def _zdt6(x, k):
    x1 = x[:, 0]
    f1 = 1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6
    g = 1.0 + 9.0 * (x[:, 1:].sum(axis=1) / (x.shape[1] - 1)) ** 0.25
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])


def _g_rastrigin(xm):
    z = xm - 0.5
    return 100.0 * (xm.shape[1] + (z**2 - np.cos(20.0 * np.pi * z)).sum(axis=1))


def _g_sphere(xm):
    return ((xm - 0.5) ** 2).sum(axis=1)


def _linear_front(x, k, g):
    pos = x[:, :k - 1]
    f = np.empty((x.shape[0], k))
    for i in range(k):
        v = 0.5 * (1.0 + g) * np.prod(pos[:, :k - 1 - i], axis=1)
        if i > 0:
            v = v * (1.0 - pos[:, k - 1 - i])
        f[:, i] = v
    return f


def _spherical_front(x, k, g, alpha=1.0):
    theta = x[:, :k - 1] ** alpha * (np.pi / 2)
    c, s = np.cos(theta), np.sin(theta)
    f = np.empty((x.shape[0], k))
    for i in range(k):
        v = (1.0 + g) * np.prod(c[:, :k - 1 - i], axis=1)
        if i > 0:
            v = v * s[:, k - 1 - i]
        f[:, i] = v
    return f


def _dtlz1(x, k):
    return _linear_front(x, k, _g_rastrigin(x[:, k - 1:]))


def _dtlz2(x, k):
    return _spherical_front(x, k, _g_sphere(x[:, k - 1:]))


def _dtlz3(x, k):
    return _spherical_front(x, k, _g_rastrigin(x[:, k - 1:]))


def _dtlz4(x, k):
    return _spherical_front(x, k, _g_sphere(x[:, k - 1:]), DTLZ4_ALPHA)


def _dtlz7(x, k):
    xm = x[:, k - 1:]
    g = 1.0 + 9.0 * xm.sum(axis=1) / xm.shape[1]
    f = np.empty((x.shape[0], k))
    f[:, :k - 1] = x[:, :k - 1]
    fs = f[:, :k - 1]
    h = k - (fs / (1.0 + g)[:, None] * (1.0 + np.sin(3.0 * np.pi * fs))).sum(axis=1)
    f[:, k - 1] = (1.0 + g) * h
    return f


_EVAL: dict[str, Callable] = {
    "ZDT1": _zdt1, "ZDT2": _zdt2, "ZDT3": _zdt3, "ZDT4": _zdt4, "ZDT6": _zdt6,
    "DTLZ1": _dtlz1, "DTLZ2": _dtlz2, "DTLZ3": _dtlz3, "DTLZ4": _dtlz4, "DTLZ7": _dtlz7,
}

_DTLZ_TAIL = {"DTLZ1": 4, "DTLZ2": 9, "DTLZ3": 9, "DTLZ4": 9, "DTLZ7": 19}


@dataclass(frozen=True)
class Problem:
    """A benchmark problem instance with fixed objective count ``k``."""

    name: str
    k: int
    d: int
    lower: np.ndarray
    upper: np.ndarray

    def evaluate(self, x) -> np.ndarray:
        arr = np.asarray(x, dtype=np.float64)
        single = arr.ndim == 1
        arr = np.atleast_2d(arr)
        if arr.ndim != 2 or arr.shape[1] != self.d:
            raise UsageError(f"{self.name} expects {self.d} decision variables, got shape {np.shape(x)}")
        if not np.all(np.isfinite(arr)):
            raise UsageError("decision variables must be finite")
        if np.any(arr < self.lower) or np.any(arr > self.upper):
            raise UsageError(f"decision vector outside the bounds of {self.name}")
        f = _EVAL[self.name](arr, self.k)
        return f[0] if single else f

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` decision vectors drawn uniformly within the bounds."""
        return self.lower + rng.random((n, self.d)) * (self.upper - self.lower)


def get_problem(name: str, k: int) -> Problem:
    """Problem ``name`` with ``k`` objectives; ZDT requires k = 2."""
    key = name.upper()
    if key in ZDT_NAMES:
        if k != 2:
            raise UsageError(f"{key} has exactly 2 objectives, not {k}")
        d = 10 if key in ("ZDT4", "ZDT6") else 30
        lower, upper = np.zeros(d), np.ones(d)
        if key == "ZDT4":
            lower[1:], upper[1:] = -5.0, 5.0
    elif key in DTLZ_NAMES:
        if k not in DTLZ_K:
            raise UsageError(f"{key} supports k in {DTLZ_K}, not {k}")
        d = k + _DTLZ_TAIL[key]
        lower, upper = np.zeros(d), np.ones(d)
    else:
        raise UsageError(f"unknown problem {name!r}; choose from {', '.join(PROBLEM_NAMES)}")
    lower.setflags(write=False)
    upper.setflags(write=False)
    return Problem(key, k, d, lower, upper)
