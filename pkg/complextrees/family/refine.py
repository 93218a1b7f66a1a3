# ComplexTrees/family/refine.py

import logging
from typing import Iterable, Sequence

import numpy as np

from complextrees.core import Alphabet, Relation, phi_ep
from complextrees.errors import InputError, NonConvergence

logger = logging.getLogger(__name__)


def _defects(letters: np.ndarray, relations: Sequence[Relation]) -> np.ndarray:
    alphabet = Alphabet(tuple(letters))
    return np.array([phi_ep(rel.left, alphabet) - phi_ep(rel.right, alphabet) for rel in relations])


def refine_alphabet(
    alphabet: Alphabet,
    relations: Iterable[Relation],
    free: Sequence[int] = None,
    tol: float = 1e-14,
    max_iter: int = 50,
    step: float = 1e-7,
) -> Alphabet:
    """Newton-polish approximate letters so that every relation holds.

    Tip points are holomorphic in the letters, so the Jacobian is taken
    with complex forward differences. Over- or under-determined systems
    use least-squares (minimum-norm) steps. ``free`` lists the 1-based
    letters allowed to move; all of them by default.
    """
    relations = list(relations)
    if not relations:
        return alphabet
    free = list(range(1, alphabet.n + 1)) if free is None else list(free)
    if any(not 1 <= j <= alphabet.n for j in free):
        raise InputError(f"free letters {free} out of range 1..{alphabet.n}")
    idx = np.array(free) - 1
    letters = alphabet.values.copy()

    for iteration in range(max_iter):
        residual = _defects(letters, relations)
        if np.max(np.abs(residual)) <= tol:
            logger.debug("refine_alphabet converged after %d steps", iteration)
            return Alphabet(tuple(letters))
        jac = np.empty((len(relations), idx.size), dtype=np.complex128)
        for col, j in enumerate(idx):
            moved = letters.copy()
            moved[j] += step
            jac[:, col] = (_defects(moved, relations) - residual) / step
        delta, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        letters[idx] += delta

    residual = np.max(np.abs(_defects(letters, relations)))
    if residual <= 1e3 * tol:
        return Alphabet(tuple(letters))
    raise NonConvergence(f"refine_alphabet stalled at residual {residual:.3g} after {max_iter} steps")
