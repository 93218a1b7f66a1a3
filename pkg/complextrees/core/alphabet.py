# ComplexTrees/core/alphabet.py

import logging
from dataclasses import dataclass
from typing import Annotated, Iterable, Tuple, Union

import numpy as np

from complextrees.config import get_config, resolve
from complextrees.errors import BudgetExceeded, InputError

from .words import EPWord, FiniteWord

logger = logging.getLogger(__name__)

Word = Union[FiniteWord, EPWord]


@dataclass(frozen=True)
class Alphabet:
    """The letters c_1..c_n of a complex tree T_A, with 0 < |c_j| < 1."""

    letters: Tuple[complex, ...]

    def __post_init__(self):
        letters = tuple(complex(c) for c in self.letters)
        if len(letters) < 2:
            raise InputError(f"an alphabet needs at least two letters, got {len(letters)}")
        for j, c in enumerate(letters, start=1):
            if not np.isfinite(c.real) or not np.isfinite(c.imag):
                raise InputError(f"letter c_{j} is not finite: {c}")
            if not 0.0 < abs(c) < 1.0:
                raise InputError(f"letter c_{j}={c} must satisfy 0 < |c_j| < 1")
        if len(set(letters)) != len(letters):
            raise InputError(f"letters must be pairwise distinct: {letters}")
        object.__setattr__(self, "letters", letters)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def r(self) -> float:
        """Contraction bound max_j |c_j|."""
        return max(abs(c) for c in self.letters)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.letters, dtype=np.complex128)

    def letter(self, j: int) -> complex:
        if not 1 <= j <= self.n:
            raise InputError(f"letter index {j} out of range 1..{self.n}")
        return self.letters[j - 1]

    def check_word(self, word: Word) -> None:
        top = word.max_letter()
        if top > self.n:
            raise InputError(f"word {word} uses letter {top} but the alphabet has {self.n}")

    def __str__(self) -> str:
        return "{" + ", ".join(f"{c.real:.6g}{c.imag:+.6g}i" for c in self.letters) + "}"


def _letters_of(symbols: Iterable[int], alphabet: Alphabet) -> list:
    out = []
    for s in symbols:
        if not 1 <= s <= alphabet.n:
            raise InputError(f"letter index {s} out of range 1..{alphabet.n}")
        out.append(alphabet.letters[s - 1])
    return out


def phi_finite(word: FiniteWord, alphabet: Alphabet) -> complex:
    """Node φ(v) = 1 + v_1 + v_1 v_2 + ... of a finite word; φ(e_0) = 1."""
    acc = 1.0 + 0.0j
    for c in reversed(_letters_of(word, alphabet)):
        acc = 1.0 + c * acc
    return acc


def letter_product(word: FiniteWord, alphabet: Alphabet) -> complex:
    """π(v), the complex product of the letters of v (1 for e_0)."""
    acc = 1.0 + 0.0j
    for c in _letters_of(word, alphabet):
        acc *= c
    return acc


def phi_ep(w: EPWord, alphabet: Alphabet) -> complex:
    """Closed form φ(u·v̄) = φ(u) + π(u)(φ(v) − 1)/(1 − π(v))."""
    u = FiniteWord(w.preamble)
    v = FiniteWord(w.period)
    pv = letter_product(v, alphabet)
    tail = (phi_finite(v, alphabet) - 1.0) / (1.0 - pv)
    return phi_finite(u, alphabet) + letter_product(u, alphabet) * tail


def phi(word: Word, alphabet: Alphabet) -> complex:
    if isinstance(word, EPWord):
        return phi_ep(word, alphabet)
    return phi_finite(word, alphabet)


def phi_partial(w: EPWord, alphabet: Alphabet, k: int) -> complex:
    """Partial sum S_K = Σ_{j=0..K} w_1···w_j of the defining series."""
    return phi_finite(w.prefix(k), alphabet)


def bounding_radius(alphabet: Alphabet) -> float:
    """Radius r/(1 − r) of the disk about φ(e_0) = 1 containing the tree."""
    r = alphabet.r
    return r / (1.0 - r)


def level_nodes(
    alphabet: Alphabet,
    k: Annotated[int, "word length"],
    budget: Annotated[int, "largest admissible n**k"] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes φ(v) and products π(v) for every v of length k.

    Words are enumerated lexicographically, so the word of index i has the
    base-n digits of i as its letters (see ``word_at``).
    """
    budget = resolve("disk_budget", budget)
    if k < 0:
        raise InputError(f"level must be nonnegative, got {k}")
    if alphabet.n**k > budget:
        raise BudgetExceeded(f"{alphabet.n}**{k} words exceed the budget of {budget}")
    c = alphabet.values
    nodes = np.ones(1, dtype=np.complex128)
    prods = np.ones(1, dtype=np.complex128)
    for _ in range(k):
        nodes = (nodes[:, None] + prods[:, None] * c[None, :]).ravel()
        prods = (prods[:, None] * c[None, :]).ravel()
    return nodes, prods


def word_at(index: int, n: int, k: int) -> FiniteWord:
    digits = []
    for _ in range(k):
        index, d = divmod(int(index), n)
        digits.append(d + 1)
    return FiniteWord(tuple(reversed(digits)))


def first_letters(n: int, k: int) -> np.ndarray:
    """First letter (1-based) of each lexicographically ordered word of length k."""
    return np.repeat(np.arange(1, n + 1), n ** (k - 1))


def default_tol(tol: float = None) -> float:
    return tol if tol is not None else get_config()["relation_tol"]
