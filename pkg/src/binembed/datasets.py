"""Plain-text point sets: one vector per line, comma- or whitespace-separated."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

_SPLIT = re.compile(r"[,\s]+")


class DatasetError(ValueError):
    """Malformed dataset; the message names the offending line."""


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray
    normalized: bool = False

    @property
    def N(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]


def parse_pointset(text: str, normalize: bool = False, source: str = "<input>") -> PointSet:
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in _SPLIT.split(line) if tok]
        except ValueError:
            raise DatasetError(f"{source}:{lineno}: not a list of decimal numbers: {raw!r}") from None
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise DatasetError(f"{source}:{lineno}: expected {width} columns, found {len(row)}")
        if not np.all(np.isfinite(row)):
            raise DatasetError(f"{source}:{lineno}: non-finite entry")
        if normalize and not any(row):
            raise DatasetError(f"{source}:{lineno}: zero row cannot be normalized")
        rows.append(row)
    if not rows:
        raise DatasetError(f"{source}: no data rows")
    X = np.array(rows, dtype=float)
    if normalize:
        X /= np.linalg.norm(X, axis=1, keepdims=True)
    return PointSet(X, normalize)


def load_pointset(path, normalize: bool = False) -> PointSet:
    with open(path, encoding="utf-8") as fh:
        return parse_pointset(fh.read(), normalize, str(path))


def save_pointset(path, X) -> None:
    np.savetxt(path, np.atleast_2d(X), delimiter=",", fmt="%.17g")
