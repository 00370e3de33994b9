"""Dataset synthesis with a steady-state NSGA-II."""

from __future__ import annotations

import numpy as np

from ..inds import RankedPopulation
from .dataset import Dataset
from .functions import Problem

INIT_SIZE = 5000
INSERTIONS = 1000
SBX_ETA = 15.0
SBX_PROB = 0.9
PM_ETA = 20.0


def sbx(rng: np.random.Generator, a: np.ndarray, b: np.ndarray, lower, upper,
        eta: float = SBX_ETA, prob: float = SBX_PROB) -> tuple[np.ndarray, np.ndarray]:
    """Bounded simulated binary crossover; returns both children."""
    c1, c2 = a.copy(), b.copy()
    if rng.random() > prob:
        return c1, c2
    d = a.size
    swap = rng.random(d)
    u = rng.random(d)
    for i in range(d):
        if swap[i] > 0.5 or abs(a[i] - b[i]) <= 1e-14:
            continue
        y1, y2 = min(a[i], b[i]), max(a[i], b[i])
        lo, hi = lower[i], upper[i]
        span = y2 - y1

        def spread(beta):
            alpha = 2.0 - beta ** -(eta + 1.0)
            if u[i] <= 1.0 / alpha:
                return (u[i] * alpha) ** (1.0 / (eta + 1.0))
            return (1.0 / (2.0 - u[i] * alpha)) ** (1.0 / (eta + 1.0))

        v1 = 0.5 * (y1 + y2 - spread(1.0 + 2.0 * (y1 - lo) / span) * span)
        v2 = 0.5 * (y1 + y2 + spread(1.0 + 2.0 * (hi - y2) / span) * span)
        v1, v2 = min(max(v1, lo), hi), min(max(v2, lo), hi)
        if rng.random() <= 0.5:
            v1, v2 = v2, v1
        c1[i], c2[i] = v1, v2
    return c1, c2


def polynomial_mutation(rng: np.random.Generator, x: np.ndarray, lower, upper,
                        eta: float = PM_ETA, prob: float | None = None) -> np.ndarray:
    """Bounded polynomial mutation, each variable with probability ``prob`` (default 1/d)."""
    y = x.copy()
    d = x.size
    p = 1.0 / d if prob is None else prob
    hit = rng.random(d) < p
    u = rng.random(d)
    power = 1.0 / (eta + 1.0)
    for i in np.flatnonzero(hit):
        lo, hi = lower[i], upper[i]
        span = hi - lo
        d1, d2 = (y[i] - lo) / span, (hi - y[i]) / span
        if u[i] < 0.5:
            val = 2.0 * u[i] + (1.0 - 2.0 * u[i]) * (1.0 - d1) ** (eta + 1.0)
            dq = val**power - 1.0
        else:
            val = 2.0 * (1.0 - u[i]) + 2.0 * (u[i] - 0.5) * (1.0 - d2) ** (eta + 1.0)
            dq = 1.0 - val**power
        y[i] = min(max(y[i] + dq * span, lo), hi)
    return y


def _tournament(rng, pop: RankedPopulation, size: int) -> int:
    i, j = rng.integers(size, size=2)
    a, b = pop.query(int(i)), pop.query(int(j))
    if (a.rank, -a.crowding) <= (b.rank, -b.crowding):
        return a.point.ordinal
    return b.point.ordinal


def synthesize(problem: Problem, seed: int, *, init: int = INIT_SIZE,
               insertions: int = INSERTIONS) -> Dataset:
    """Random initial population followed by ``insertions`` steady-state steps.

    Each step picks two parents by binary tournament on (rank, crowding),
    creates one offspring by crossover and mutation, records its objective
    vector, inserts it, and removes the worst point.
    """
    rng = np.random.default_rng(seed)
    lo, hi = problem.lower, problem.upper
    xs = problem.sample(rng, init)
    objs = problem.evaluate(xs)
    genomes = {i: xs[i] for i in range(init)}
    pop = RankedPopulation(objs)
    recorded = np.empty((insertions, problem.k))
    for step in range(insertions):
        pa = genomes[_tournament(rng, pop, init)]
        pb = genomes[_tournament(rng, pop, init)]
        child, _ = sbx(rng, pa, pb, lo, hi)
        child = polynomial_mutation(rng, child, lo, hi)
        f = problem.evaluate(child)
        recorded[step] = f
        ordinal = pop.insert(f)
        genomes[ordinal] = child
        del genomes[pop.remove_worst().ordinal]
    return Dataset(problem.k, objs, recorded, seed, problem.name)
