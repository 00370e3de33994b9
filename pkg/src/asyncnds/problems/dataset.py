"""Plain-text dataset files.

Layout::

    k <k> init <n_init> ins <n_ins> seed <seed>
    <n_init lines of k numbers>
    ---
    <n_ins lines of k numbers>

Numbers are written with 17 significant digits, which round-trips every
double exactly.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from ..core import UsageError

SEPARATOR = "---"
_HEADER = re.compile(r"k (\d+) init (\d+) ins (\d+) seed (-?\d+)")


class DatasetFormatError(UsageError):
    """Malformed dataset file; the message carries the line number."""


@dataclass(frozen=True, eq=False)
class Dataset:
    k: int
    initial: np.ndarray
    insertions: np.ndarray
    seed: int
    problem: str | None = None  # not stored in the file; inferred from its name

    def __post_init__(self):
        for name in ("initial", "insertions"):
            a = getattr(self, name)
            if a.ndim != 2 or a.shape[1] != self.k:
                raise UsageError(f"{name} must have shape (n, {self.k})")

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.k == other.k and self.seed == other.seed
                and np.array_equal(self.initial, other.initial)
                and np.array_equal(self.insertions, other.insertions))

    __hash__ = None


def _row(v: np.ndarray) -> str:
    return " ".join(format(float(x), ".17g") for x in v)


def save_dataset(ds: Dataset, path) -> None:
    lines = [f"k {ds.k} init {len(ds.initial)} ins {len(ds.insertions)} seed {ds.seed}"]
    lines.extend(_row(v) for v in ds.initial)
    lines.append(SEPARATOR)
    lines.extend(_row(v) for v in ds.insertions)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _problem_from_name(path) -> str | None:
    from .functions import PROBLEM_NAMES

    stem = os.path.basename(os.fspath(path)).upper()
    for name in PROBLEM_NAMES:
        if stem.startswith(name):
            return name
    return None


def load_dataset(path, problem: str | None = None) -> Dataset:
    """Parse a dataset file, raising :class:`DatasetFormatError` on any defect."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise DatasetFormatError(f"{path}: line 1: missing header")
    m = _HEADER.fullmatch(lines[0].strip())
    if m is None:
        raise DatasetFormatError(
            f"{path}: line 1: expected 'k <k> init <n> ins <m> seed <s>', got {lines[0]!r}")
    k, n_init, n_ins, seed = (int(g) for g in m.groups())
    if k < 2:
        raise DatasetFormatError(f"{path}: line 1: k must be at least 2")

    def block(start: int, count: int, section: str) -> np.ndarray:
        out = np.empty((count, k))
        for j in range(count):
            lineno = start + j + 1
            if start + j >= len(lines):
                raise DatasetFormatError(
                    f"{path}: line {lineno}: file truncated in {section} section "
                    f"after {j} of {count} rows")
            text = lines[start + j]
            if text.strip() == SEPARATOR:
                raise DatasetFormatError(
                    f"{path}: line {lineno}: {section} section has {j} rows, header says {count}")
            fields = text.split()
            if len(fields) != k:
                hint = " (file truncated?)" if start + j == len(lines) - 1 else ""
                raise DatasetFormatError(
                    f"{path}: line {lineno}: {section} row {j} has {len(fields)} values, "
                    f"expected k={k}{hint}")
            try:
                vals = [float(f) for f in fields]
            except ValueError:
                raise DatasetFormatError(f"{path}: line {lineno}: {section} row {j} is not numeric") from None
            if not all(np.isfinite(vals)):
                raise DatasetFormatError(f"{path}: line {lineno}: {section} row {j} is not finite")
            out[j] = vals
        return out

    initial = block(1, n_init, "initial")
    sep = 1 + n_init
    if sep >= len(lines):
        raise DatasetFormatError(f"{path}: line {sep + 1}: file truncated, missing '{SEPARATOR}' separator")
    if lines[sep].strip() != SEPARATOR:
        raise DatasetFormatError(f"{path}: line {sep + 1}: expected '{SEPARATOR}', got {lines[sep]!r}")
    insertions = block(sep + 1, n_ins, "insertion")
    extra = [i for i in range(sep + 1 + n_ins, len(lines)) if lines[i].strip()]
    if extra:
        raise DatasetFormatError(f"{path}: line {extra[0] + 1}: unexpected data after the insertion section")
    return Dataset(k, initial, insertions, seed, problem or _problem_from_name(path))
