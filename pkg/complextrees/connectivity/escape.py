# ComplexTrees/connectivity/escape.py

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from complextrees.config import resolve
from complextrees.core import Alphabet, FiniteWord
from complextrees.errors import InputError

from .certificate import Certificate, CertificateKind

logger = logging.getLogger(__name__)

EXCLUDED = 0
NOT_EXCLUDED = 1


@dataclass
class EscapeBatch:
    """Outcome of a batched escape test, one entry per alphabet."""

    outcome: np.ndarray
    depth: np.ndarray
    low_confidence: np.ndarray
    witnesses: Optional[List[Optional[FiniteWord]]] = None

    def __len__(self) -> int:
        return int(self.outcome.size)

    @property
    def not_excluded(self) -> np.ndarray:
        return self.outcome == NOT_EXCLUDED


def _bounding_radii(letters: np.ndarray) -> np.ndarray:
    r = np.abs(letters).max(axis=1)
    return r / (1.0 - r)


def _trace(history: List[Tuple[np.ndarray, np.ndarray]], level: int, index: int) -> FiniteWord:
    """Letters applied along the preimage path ending at ``index`` of frontier ``level``."""
    symbols = []
    for parent, letter in reversed(history[1 : level + 1]):
        symbols.append(int(letter[index]))
        index = int(parent[index])
    return FiniteWord(tuple(reversed(symbols)))


def escape_many(
    letters: np.ndarray,
    target=0.0,
    max_depth: int = None,
    frontier_cap: int = None,
    slack: float = None,
    cell: float = None,
    track: bool = False,
) -> EscapeBatch:
    """Backward-preimage escape test of ``target`` against many alphabets at once.

    ``letters`` has shape (B, n). Frontier points are replaced by their
    preimages (p − 1)/c_j; points leaving the bounding disk |p − 1| ≤ R + slack
    are dropped and near-equal points are merged on a grid of size ``cell``.
    An alphabet whose frontier empties at depth d is Excluded at d. One whose
    frontier outgrows the cap is reported NotExcluded with low confidence.
    With ``track`` the surviving preimage path of each NotExcluded alphabet
    is returned as a witness word w with f_w(p) = target.
    """
    max_depth = resolve("escape_max_depth", max_depth)
    frontier_cap = resolve("escape_frontier_cap", frontier_cap)
    slack = resolve("escape_slack", slack)
    cell = resolve("escape_dedupe_cell", cell)
    if max_depth < 1:
        raise InputError(f"max_depth must be at least 1, got {max_depth}")
    letters = np.atleast_2d(np.asarray(letters, dtype=np.complex128))
    batch, n = letters.shape
    limit = _bounding_radii(letters) + slack

    outcome = np.full(batch, NOT_EXCLUDED, dtype=np.int8)
    depth_reached = np.full(batch, max_depth, dtype=np.int64)
    low = np.zeros(batch, dtype=bool)
    undecided = np.ones(batch, dtype=bool)
    ends = {}

    owner = np.arange(batch, dtype=np.int64)
    points = np.broadcast_to(np.asarray(target, dtype=np.complex128), (batch,)).copy()
    parent = np.full(batch, -1, dtype=np.int64)
    letter = np.zeros(batch, dtype=np.int8)
    history: List[Tuple[np.ndarray, np.ndarray]] = []

    for depth in range(1, max_depth + 1):
        keep = np.abs(points - 1.0) <= limit[owner]
        owner, points, parent, letter = owner[keep], points[keep], parent[keep], letter[keep]
        if points.size:
            keys = np.stack(
                [
                    owner,
                    np.rint(points.real / cell).astype(np.int64),
                    np.rint(points.imag / cell).astype(np.int64),
                ],
                axis=1,
            )
            _, first = np.unique(keys, axis=0, return_index=True)
            first = np.sort(first)
            owner, points, parent, letter = owner[first], points[first], parent[first], letter[first]

        counts = np.bincount(owner, minlength=batch)
        emptied = undecided & (counts == 0)
        outcome[emptied] = EXCLUDED
        depth_reached[emptied] = depth
        over = undecided & (counts > frontier_cap)
        if over.any():
            logger.warning(
                "escape frontier exceeded %d points for %d alphabets at depth %d",
                frontier_cap,
                int(over.sum()),
                depth,
            )
            low[over] = True
            depth_reached[over] = depth
        undecided &= ~(emptied | over)
        finished = over | undecided if depth == max_depth else over

        if track:
            history.append((parent, letter))
            if finished.any():
                rows = np.nonzero(finished[owner])[0]
                _, pick = np.unique(owner[rows], return_index=True)
                for b, i in zip(owner[rows[pick]].tolist(), rows[pick].tolist()):
                    ends[b] = (depth - 1, i)

        alive = undecided[owner]
        kept = np.nonzero(alive)[0]
        owner, points = owner[alive], points[alive]
        if depth == max_depth or not owner.size:
            break
        count = points.size
        points = ((points[:, None] - 1.0) / letters[owner]).ravel()
        owner = np.repeat(owner, n)
        parent = np.repeat(kept, n)
        letter = np.tile(np.arange(1, n + 1, dtype=np.int8), count)

    witnesses = None
    if track:
        witnesses = [None] * batch
        for b, (level, i) in ends.items():
            witnesses[b] = _trace(history, level, i)
    logger.debug("escape_many: %d alphabets, %d excluded", batch, int((outcome == EXCLUDED).sum()))
    return EscapeBatch(outcome=outcome, depth=depth_reached, low_confidence=low, witnesses=witnesses)


def member_escape_test(
    alphabet: Alphabet,
    target: complex = 0.0,
    max_depth: int = None,
    frontier_cap: int = None,
) -> Certificate:
    """Decide λ ∉ F_A by backward iteration; for λ = 0 an Excluded result certifies z ∉ 𝓜₀.

    NotExcluded carries the surviving witness word; it is never a proof of membership.
    """
    result = escape_many(alphabet.values[None, :], target, max_depth, frontier_cap, track=True)
    depth = int(result.depth[0])
    if result.outcome[0] == EXCLUDED:
        return Certificate(CertificateKind.EXCLUDED, level=depth)
    low = bool(result.low_confidence[0])
    return Certificate(
        CertificateKind.NOT_EXCLUDED,
        level=depth,
        witness=result.witnesses[0],
        low_confidence=low,
        detail="frontier cap reached" if low else "",
    )


def wolfram_membership(
    alphabet: Alphabet, value: complex, max_depth: int = None, frontier_cap: int = None
) -> Certificate:
    """Escape test for λ ∈ F_A, i.e. the parameter of A in the set W_λ."""
    return member_escape_test(alphabet, value, max_depth, frontier_cap)
