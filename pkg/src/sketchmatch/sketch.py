"""Random-sign Johnson-Lindenstrauss projection.

Entries are drawn from numpy's PCG64 generator seeded with
``SeedSequence(seed)``; the same ``(s, d, seed)`` always rebuilds the same
matrix bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DimensionMismatch, EmptyDimension
from .market import check_vector

# constant in s = ceil(C * eps^-2 * ln(n / delta))
JL_CONSTANT = 8.0


@dataclass(frozen=True, eq=False)
class SketchMatrix:
    entries: np.ndarray  # (s, d), C-contiguous float64
    seed: int | None

    @property
    def s(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_array(cls, entries, seed=None) -> "SketchMatrix":
        """Wrap an explicit projection (used for identity test doubles)."""
        arr = np.ascontiguousarray(entries, dtype=np.float64)
        if arr.ndim != 2 or 0 in arr.shape:
            raise EmptyDimension("projection must be a non-empty 2-d array")
        arr.setflags(write=False)
        return cls(arr, seed)

    @classmethod
    def identity(cls, d: int) -> "SketchMatrix":
        return cls.from_array(np.eye(d))


@dataclass(frozen=True)
class SketchedPoint:
    id: int
    coords: np.ndarray


def build(s: int, d: int, seed: int) -> SketchMatrix:
    if s < 1 or d < 1:
        raise EmptyDimension(f"sketch needs s >= 1 and d >= 1, got s={s}, d={d}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    bits = rng.integers(0, 2, size=(s, d), dtype=np.int8)
    scale = 1.0 / math.sqrt(s)
    entries = np.where(bits == 1, scale, -scale)
    entries.setflags(write=False)
    return SketchMatrix(entries, seed)


def recommended_s(n: int, eps: float, delta: float, constant: float = JL_CONSTANT) -> int:
    if n < 2:
        raise BadParameter(f"n must be >= 2, got {n}")
    if not 0.0 < eps < 1.0:
        raise BadParameter(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise BadParameter(f"delta must lie in (0, 1), got {delta}")
    return max(1, math.ceil(constant * math.log(n / delta) / eps**2))


def apply(m: SketchMatrix, x, id: int = -1) -> SketchedPoint:
    x = check_vector(x)
    if x.shape[0] != m.d:
        raise DimensionMismatch(f"sketch expects length {m.d}, got {x.shape[0]}")
    return SketchedPoint(id, m.entries @ x)


def apply_rows(m: SketchMatrix, rows: np.ndarray) -> np.ndarray:
    """Sketch every row of ``rows``; returns an (n, s) array.

    Rows go through the same matrix-vector product as :func:`apply`, so a
    pre-sketched point and a later sketch of the same vector agree exactly.
    """
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != m.d:
        raise DimensionMismatch(f"sketch expects rows of length {m.d}")
    out = np.empty((rows.shape[0], m.s))
    for k in range(rows.shape[0]):
        out[k] = m.entries @ rows[k]
    return out


def approx_distance(p: SketchedPoint, q: SketchedPoint) -> float:
    if p.coords.shape != q.coords.shape:
        raise DimensionMismatch(
            f"sketched lengths differ: {p.coords.shape[0]} vs {q.coords.shape[0]}"
        )
    diff = p.coords - q.coords
    return float(np.sqrt(np.dot(diff, diff)))
