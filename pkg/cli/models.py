from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, model_validator

from complextrees.errors import InputError


class ScanTest(str, Enum):
    M2 = "m2"
    M0 = "m0"
    DISCONNECT = "disconnect"


class CheckMode(str, Enum):
    VERDICT = "verdict"
    ESCAPE = "escape"
    DENDRITE = "dendrite"


SOURCE_FIELDS = ("preset", "alphabet", "family", "reference")


class RunConfig(BaseModel):
    """Everything one command needs; loadable from JSON with --config."""

    command: str = ""
    # Alphabet or family source
    preset: Optional[str] = None
    ngon: Optional[PositiveInt] = None
    alphabet: Optional[str] = None
    family: Optional[str] = None
    reference: Optional[str] = None
    z: Optional[str] = None
    # Words and relations
    word: Optional[str] = None
    relations: List[str] = Field(default_factory=list)
    tails: List[str] = Field(default_factory=list)
    # Numeric parameters
    depth: Optional[PositiveInt] = None
    level: Optional[PositiveInt] = None
    order: Optional[PositiveInt] = None
    max_k: Optional[PositiveInt] = None
    samples: PositiveInt = 100
    tol: Optional[PositiveFloat] = None
    budget: Optional[PositiveInt] = None
    # Rendering
    width: PositiveInt = 512
    height: PositiveInt = 512
    lower: Optional[str] = None
    upper: Optional[str] = None
    tests: List[ScanTest] = Field(default_factory=lambda: [ScanTest.M2])
    # Run control
    seed: int = Field(default=0, ge=0)
    workers: Optional[PositiveInt] = None
    output: Optional[str] = None
    output_dir: Optional[str] = None
    expect: Optional[str] = None
    verbose: bool = False

    @model_validator(mode="after")
    def _single_source(self):
        given = [name for name in SOURCE_FIELDS if getattr(self, name)]
        if len(given) > 1:
            raise ValueError(f"give exactly one alphabet/family source, got {', '.join(given)}")
        return self

    def source(self) -> str:
        given = [name for name in SOURCE_FIELDS if getattr(self, name)]
        if not given:
            raise InputError("no alphabet/family source: use --preset, --alphabet, --family or --reference")
        return given[0]
