# ComplexTrees/core/grid.py

import logging
from typing import Iterable, Tuple

import numpy as np

from complextrees.errors import BudgetExceeded

logger = logging.getLogger(__name__)

# Half of the 3x3 neighbourhood; the other half is covered by symmetry.
_HALF_NEIGHBOURHOOD = ((0, 0), (1, -1), (1, 0), (1, 1), (0, 1))
_NEIGHBOURHOOD = tuple((dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1))

# Cell coordinates are clipped here before the int64 cast.
_CELL_LIMIT = float(2**62)

_SEED = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)


def _mix(h: np.ndarray) -> np.ndarray:
    h = (h ^ (h >> np.uint64(30))) * _MIX_A
    h = (h ^ (h >> np.uint64(27))) * _MIX_B
    return h ^ (h >> np.uint64(31))


def hash_columns(columns: Iterable[np.ndarray]) -> np.ndarray:
    """Element-wise 64-bit hash of integer key columns.

    Equal key tuples always hash alike; distinct tuples collide with
    negligible probability, so callers that need exactness recheck.
    """
    h = None
    with np.errstate(over="ignore"):
        for col in columns:
            v = np.atleast_1d(np.asarray(col)).astype(np.int64).astype(np.uint64)
            h = _mix(v ^ _SEED) if h is None else _mix((h * _MIX_A) ^ v)
    if h is None:
        raise ValueError("hash_columns needs at least one column")
    return h


def cell_coordinates(points: np.ndarray, cell: float) -> Tuple[np.ndarray, np.ndarray]:
    """Integer grid cell of every point; far coordinates share the clipped edge cells."""
    points = np.asarray(points, dtype=np.complex128).ravel()
    with np.errstate(invalid="ignore", over="ignore"):
        kx = np.clip(np.floor(points.real / cell), -_CELL_LIMIT, _CELL_LIMIT)
        ky = np.clip(np.floor(points.imag / cell), -_CELL_LIMIT, _CELL_LIMIT)
    kx = np.nan_to_num(kx, nan=0.0).astype(np.int64)
    ky = np.nan_to_num(ky, nan=0.0).astype(np.int64)
    return kx, ky


def _cell_keys(kx: np.ndarray, ky: np.ndarray, dx: int = 0, dy: int = 0) -> np.ndarray:
    with np.errstate(over="ignore"):
        return hash_columns((kx + dx, ky + dy))


def _expand(lo: np.ndarray, counts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Query index and sorted position of every (query, match) pair."""
    count = int(counts.sum())
    query = np.repeat(np.arange(lo.size), counts)
    within = np.arange(count) - np.repeat(np.cumsum(counts) - counts, counts)
    return query, np.repeat(lo, counts) + within


def candidate_pairs(
    points: np.ndarray, cell: float, limit: int = None
) -> Tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j), i ≠ j, of points lying in the same or adjacent grid cells.

    Every pair of points closer than ``cell`` is returned (plus some farther
    ones); each unordered pair appears once. Cells are addressed by a hash
    of their coordinates, so any cell size works and callers filter by
    distance.
    """
    points = np.asarray(points, dtype=np.complex128).ravel()
    size = points.size
    if size < 2:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    if not cell > 0:
        cell = 1.0
    kx, ky = cell_coordinates(points, cell)
    keys = _cell_keys(kx, ky)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]

    left_parts, right_parts = [], []
    total = 0
    for dx, dy in _HALF_NEIGHBOURHOOD:
        target = keys if (dx, dy) == (0, 0) else _cell_keys(kx, ky, dx, dy)
        lo = np.searchsorted(sorted_keys, target, side="left")
        hi = np.searchsorted(sorted_keys, target, side="right")
        counts = hi - lo
        total += int(counts.sum())
        if limit is not None and total > limit:
            raise BudgetExceeded(f"more than {limit} candidate pairs at cell size {cell:.3g}")
        if not counts.any():
            continue
        first, pos = _expand(lo, counts)
        second = order[pos]
        keep = first < second if (dx, dy) == (0, 0) else first != second
        left_parts.append(first[keep])
        right_parts.append(second[keep])

    if not left_parts:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    logger.debug("candidate_pairs: %d points, %d candidates", size, total)
    return np.concatenate(left_parts), np.concatenate(right_parts)


class CellIndex:
    """Growing point set with hashed grid cells for radius queries.

    Points are kept sorted by cell key; ``near`` only looks at the 3x3 block
    of cells around each query, so the radius must not exceed the cell.
    """

    def __init__(self, cell: float):
        if not cell > 0:
            raise ValueError(f"cell size must be positive, got {cell}")
        self.cell = float(cell)
        self.keys = np.zeros(0, dtype=np.uint64)
        self.points = np.zeros(0, dtype=np.complex128)

    def __len__(self) -> int:
        return int(self.points.size)

    def add(self, points: np.ndarray) -> None:
        points = np.asarray(points, dtype=np.complex128).ravel()
        if not points.size:
            return
        keys = _cell_keys(*cell_coordinates(points, self.cell))
        keys = np.concatenate([self.keys, keys])
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.points = np.concatenate([self.points, points])[order]

    def near(self, query: np.ndarray, radius: float = None) -> np.ndarray:
        """Mask of query points within ``radius`` of some stored point."""
        query = np.asarray(query, dtype=np.complex128).ravel()
        radius = self.cell if radius is None else float(radius)
        if radius > self.cell:
            raise ValueError(f"radius {radius} exceeds the cell size {self.cell}")
        hit = np.zeros(query.size, dtype=bool)
        if not query.size or not self.points.size:
            return hit
        kx, ky = cell_coordinates(query, self.cell)
        for dx, dy in _NEIGHBOURHOOD:
            target = _cell_keys(kx, ky, dx, dy)
            lo = np.searchsorted(self.keys, target, side="left")
            counts = np.searchsorted(self.keys, target, side="right") - lo
            if not counts.any():
                continue
            owner, pos = _expand(lo, counts)
            close = np.abs(query[owner] - self.points[pos]) <= radius
            hit[owner[close]] = True
        return hit
