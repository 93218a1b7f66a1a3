# ComplexTrees/core/dynamics.py

import logging
from typing import FrozenSet, Iterable, Sequence, Set

import numpy as np

from complextrees.config import resolve
from complextrees.errors import InputError

from .alphabet import (
    Alphabet,
    default_tol,
    first_letters,
    letter_product,
    level_nodes,
    phi_ep,
    phi_finite,
    word_at,
)
from .grid import candidate_pairs
from .words import EPWord, FiniteWord, Relation

logger = logging.getLogger(__name__)


def shift(w: EPWord) -> EPWord:
    """One-sided shift σ: drop the first symbol."""
    return w.shift()


def shift_orbit(w: EPWord) -> FrozenSet[EPWord]:
    """{σ^m(w) : m ≥ 1}; at most |preamble| + |period| words."""
    seen = set()
    current = w.shift()
    while current not in seen:
        seen.add(current)
        current = current.shift()
    return frozenset(seen)


def post_critical_set(relations: Iterable[Relation]) -> FrozenSet[EPWord]:
    """Union of the shift orbits of every address occurring in the relations."""
    out: Set[EPWord] = set()
    for rel in relations:
        out |= shift_orbit(rel.left)
        out |= shift_orbit(rel.right)
    return frozenset(out)


def sorted_words(words: Iterable[EPWord]) -> list:
    return sorted(words, key=lambda w: (len(w.preamble), w.preamble, w.period))


def check_relation(rel: Relation, alphabet: Alphabet) -> float:
    """|φ(left) − φ(right)|; zero to tolerance when the relation holds."""
    alphabet.check_word(rel.left)
    alphabet.check_word(rel.right)
    return abs(phi_ep(rel.left, alphabet) - phi_ep(rel.right, alphabet))


def _check_pair(u: FiniteWord, v: FiniteWord) -> None:
    if not len(u) or not len(v):
        raise InputError("piece overlap needs nonempty words")
    if u.first == v.first:
        raise InputError(f"pieces {u} and {v} share their first letter")


def exact_piece_overlap(u: FiniteWord, v: FiniteWord, alphabet: Alphabet, tol: float = None) -> bool:
    """True when f_u = f_v to tolerance, which forces F_{uA} = F_{vA}."""
    _check_pair(u, v)
    tol = default_tol(tol)
    node_gap = abs(phi_finite(u, alphabet) - phi_finite(v, alphabet))
    scale_gap = abs(letter_product(u, alphabet) - letter_product(v, alphabet))
    return node_gap <= tol and scale_gap <= tol


def _pieces_coincide(u: FiniteWord, v: FiniteWord, alphabet: Alphabet, tol: float, depth: int) -> bool:
    if exact_piece_overlap(u, v, alphabet, tol):
        return True
    if depth <= 0:
        return False
    unused = list(range(1, alphabet.n + 1))
    for j in range(1, alphabet.n + 1):
        child = u + FiniteWord((j,))
        match = next(
            (k for k in unused if _pieces_coincide(child, v + FiniteWord((k,)), alphabet, tol, depth - 1)),
            None,
        )
        if match is None:
            return False
        unused.remove(match)
    return True


def children_overlap(
    u: FiniteWord, v: FiniteWord, alphabet: Alphabet, tol: float = None, depth: int = 1
) -> bool:
    """Certify F_{uA} = F_{vA} when the child pieces of u and v pair off exactly.

    F_{uA} is the union of its children F_{ujA}; if every child of u equals
    a distinct child of v (recursively, up to ``depth`` levels) the two
    pieces coincide even when f_u ≠ f_v.
    """
    _check_pair(u, v)
    return _pieces_coincide(u, v, alphabet, default_tol(tol), depth)


def observed_relations(
    alphabet: Alphabet,
    level: int,
    tails: Sequence[FiniteWord],
    tol: float = None,
    budget: int = None,
) -> Set[Relation]:
    """Relations u·t̄ ∼ v·s̄ with |u| = |v| = level that hold numerically at this alphabet."""
    if level < 1:
        raise InputError(f"relation level must be at least 1, got {level}")
    tol = default_tol(tol)
    tails = [FiniteWord(tuple(t)) for t in tails]
    if not tails:
        raise InputError("observed_relations needs at least one tail period")
    nodes, prods = level_nodes(alphabet, level, resolve("disk_budget", budget))
    count = nodes.size
    offsets = np.array([phi_ep(EPWord((), tuple(t)), alphabet) - 1.0 for t in tails])
    points = (nodes[None, :] + prods[None, :] * offsets[:, None]).ravel()
    letters = np.tile(first_letters(alphabet.n, level), len(tails))

    first, second = candidate_pairs(points, max(tol, 1e-15) * 2.0)
    keep = (np.abs(points[first] - points[second]) <= tol) & (letters[first] != letters[second])
    found: Set[Relation] = set()
    for a, b in zip(first[keep].tolist(), second[keep].tolist()):
        ta, ia = divmod(a, count)
        tb, ib = divmod(b, count)
        left = EPWord(tuple(word_at(ia, alphabet.n, level)), tuple(tails[ta]))
        right = EPWord(tuple(word_at(ib, alphabet.n, level)), tuple(tails[tb]))
        found.add(Relation(left, right))
    logger.debug("observed_relations: level %d, %d tails, %d relations", level, len(tails), len(found))
    return found
