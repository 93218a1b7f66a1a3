# ComplexTrees/core/words.py

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

from complextrees.config import get_config
from complextrees.errors import InputError


def _as_symbols(symbols: Iterable[int], what: str) -> Tuple[int, ...]:
    out = tuple(int(s) for s in symbols)
    if any(s < 1 for s in out):
        raise InputError(f"{what}: letter indices start at 1, got {out}")
    if len(out) > get_config()["max_word_length"]:
        raise InputError(f"{what}: length {len(out)} exceeds the word length limit")
    return out


@dataclass(frozen=True)
class FiniteWord:
    """A finite address v = v_1 v_2 ... v_m over the letters 1..n."""

    symbols: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", _as_symbols(self.symbols, "FiniteWord"))

    @classmethod
    def parse(cls, text: str) -> "FiniteWord":
        text = text.strip()
        if text in ("", "e", "e0"):
            return cls(())
        if not text.isdigit() or "0" in text:
            raise InputError(f"invalid finite word {text!r}: use digits 1..9")
        return cls(tuple(int(ch) for ch in text))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __add__(self, other: "FiniteWord") -> "FiniteWord":
        return FiniteWord(self.symbols + tuple(other))

    def __str__(self) -> str:
        return "".join(str(s) for s in self.symbols) or "e0"

    @property
    def first(self) -> int:
        if not self.symbols:
            raise InputError("the empty word has no first letter")
        return self.symbols[0]

    @property
    def parent(self) -> "FiniteWord":
        return FiniteWord(self.symbols[:-1])

    def max_letter(self) -> int:
        return max(self.symbols, default=0)


def _primitive(period: Tuple[int, ...]) -> Tuple[int, ...]:
    size = len(period)
    for p in range(1, size + 1):
        if size % p == 0 and period[:p] * (size // p) == period:
            return period[:p]
    return period


@dataclass(frozen=True)
class EPWord:
    """Eventually periodic address u·v̄ kept in canonical form.

    The period is primitive and the preamble is as short as possible, so two
    EPWords compare equal exactly when they encode the same infinite word.
    """

    preamble: Tuple[int, ...]
    period: Tuple[int, ...]

    def __post_init__(self):
        preamble = _as_symbols(self.preamble, "EPWord preamble")
        period = _as_symbols(self.period, "EPWord period")
        if not period:
            raise InputError("EPWord period must be nonempty")
        period = _primitive(period)
        while preamble and preamble[-1] == period[-1]:
            period = (preamble[-1],) + period[:-1]
            preamble = preamble[:-1]
        object.__setattr__(self, "preamble", preamble)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "EPWord":
        """Parse ``13~2`` (preamble 13, period 2) or ``~2``."""
        text = text.strip()
        if "~" not in text:
            raise InputError(f"invalid EPWord {text!r}: '~' must introduce the period")
        pre, per = text.split("~", 1)
        return cls(tuple(FiniteWord.parse(pre)), tuple(FiniteWord.parse(per)))

    def __str__(self) -> str:
        pre = "".join(str(s) for s in self.preamble)
        per = "".join(str(s) for s in self.period)
        return f"{pre}~{per}"

    @property
    def first(self) -> int:
        return self.preamble[0] if self.preamble else self.period[0]

    def shift(self) -> "EPWord":
        if self.preamble:
            return EPWord(self.preamble[1:], self.period)
        return EPWord((), self.period[1:] + self.period[:1])

    def prefix(self, k: int) -> FiniteWord:
        """First k letters of the infinite word."""
        head = list(self.preamble[:k])
        while len(head) < k:
            head.extend(self.period)
        return FiniteWord(tuple(head[:k]))

    def max_letter(self) -> int:
        return max(self.preamble + self.period)


@dataclass(frozen=True)
class Relation:
    """Tip-to-tip equivalence a ∼ b between addresses with a_1 ≠ b_1.

    Sides are stored with the smaller first letter on the left so that a ∼ b
    and b ∼ a are the same relation.
    """

    left: EPWord
    right: EPWord

    def __post_init__(self):
        if self.left.first == self.right.first:
            raise InputError(f"relation {self.left} ~ {self.right}: first letters must differ")
        if self.left.first > self.right.first:
            left, right = self.right, self.left
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)

    @classmethod
    def parse(cls, text: str) -> "Relation":
        """Parse ``13~2=21~2``."""
        if "=" not in text:
            raise InputError(f"invalid relation {text!r}: expected 'a=b'")
        left, right = text.split("=", 1)
        return cls(EPWord.parse(left), EPWord.parse(right))

    def __str__(self) -> str:
        return f"{self.left}={self.right}"

    @property
    def letters(self) -> Tuple[int, int]:
        return self.left.first, self.right.first

    def max_letter(self) -> int:
        return max(self.left.max_letter(), self.right.max_letter())
