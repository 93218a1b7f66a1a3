# ComplexTrees/family/loader.py

import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from complextrees.core import EPWord, Relation
from complextrees.errors import InputError

from .family import ParametricFamily
from .rational import RationalFunction

Coefficient = Tuple[float, float]


class WordModel(BaseModel):
    pre: List[int] = Field(default_factory=list)
    per: List[int]

    def to_word(self) -> EPWord:
        return EPWord(tuple(self.pre), tuple(self.per))


class RelationModel(BaseModel):
    left: WordModel
    right: WordModel

    def to_relation(self) -> Relation:
        return Relation(self.left.to_word(), self.right.to_word())


class LetterModel(BaseModel):
    num: List[Coefficient]
    den: List[Coefficient] = Field(default_factory=lambda: [(1.0, 0.0)])
    conjugate: bool = False


class FamilyFile(BaseModel):
    """On-disk family definition, coefficients as [re, im] pairs in ascending degree."""

    n: int
    letters: List[LetterModel]
    relations: List[RelationModel] = Field(default_factory=list)
    name: str = "custom"
    domain_label: str = ""
    bounds: Optional[Tuple[Coefficient, Coefficient]] = None

    @model_validator(mode="after")
    def _count_letters(self):
        if self.n != len(self.letters):
            raise ValueError(f"n={self.n} but {len(self.letters)} letters given")
        return self

    def to_family(self) -> ParametricFamily:
        letters = tuple(
            RationalFunction([complex(*c) for c in letter.num], [complex(*c) for c in letter.den])
            for letter in self.letters
        )
        extra = {}
        if self.bounds is not None:
            extra["bounds"] = tuple(complex(*corner) for corner in self.bounds)
        return ParametricFamily(
            name=self.name,
            letters=letters,
            declared_relations=frozenset(r.to_relation() for r in self.relations),
            domain_label=self.domain_label,
            conjugate_flags=tuple(letter.conjugate for letter in self.letters),
            **extra,
        )


def parse_family(data: Union[str, dict]) -> ParametricFamily:
    try:
        model = FamilyFile.model_validate_json(data) if isinstance(data, str) else FamilyFile.model_validate(data)
    except ValidationError as e:
        raise InputError(f"invalid family definition: {e.errors()[0]['msg']}") from e
    return model.to_family()


def load_family(path: Union[str, Path]) -> ParametricFamily:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read family file {path}: {e.strerror}") from e
    try:
        return parse_family(text)
    except InputError as e:
        raise InputError(f"{path}: {e}") from e


def dump_family(fam: ParametricFamily) -> dict:
    """Inverse of ``parse_family`` for symbolic and conjugate families."""

    def pairs(coeffs):
        return [[float(c.real), float(c.imag)] for c in coeffs]

    def word(w: EPWord):
        return {"pre": list(w.preamble), "per": list(w.period)}

    return {
        "n": fam.n,
        "name": fam.name,
        "domain_label": fam.domain_label,
        "letters": [
            {"num": pairs(c.num), "den": pairs(c.den), "conjugate": flag}
            for c, flag in zip(fam.letters, fam.conjugate_flags)
        ],
        "relations": [
            {"left": word(r.left), "right": word(r.right)} for r in sorted(fam.declared_relations, key=str)
        ],
        "bounds": [[fam.bounds[0].real, fam.bounds[0].imag], [fam.bounds[1].real, fam.bounds[1].imag]],
    }


def save_family(fam: ParametricFamily, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.write_text(json.dumps(dump_family(fam), indent=2), encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write family file {path}: {e.strerror}") from e
