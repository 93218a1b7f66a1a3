# ComplexTrees/connectivity/certificate.py

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from complextrees.core import EPWord, FiniteWord


class CertificateKind(str, Enum):
    DISCONNECTED = "Disconnected"
    CONNECTED = "Connected"
    EXCLUDED = "Excluded"
    NOT_EXCLUDED = "NotExcluded"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Certificate:
    """Outcome of a geometric test.

    ``level`` is the cover level k for disk certificates and the preimage
    depth for escape tests. A Disconnected certificate always carries a
    partition of the first-level letters into at least two groups.
    """

    kind: CertificateKind
    level: int = 0
    partition: List[List[int]] = field(default_factory=list)
    witness: Optional[Union[FiniteWord, EPWord]] = None
    low_confidence: bool = False
    detail: str = ""

    @property
    def is_disconnected(self) -> bool:
        return self.kind is CertificateKind.DISCONNECTED

    @property
    def is_excluded(self) -> bool:
        return self.kind is CertificateKind.EXCLUDED

    def to_dict(self) -> Dict[str, Any]:
        witness = None
        if isinstance(self.witness, EPWord):
            witness = {"pre": list(self.witness.preamble), "per": list(self.witness.period)}
        elif isinstance(self.witness, FiniteWord):
            witness = {"pre": list(self.witness.symbols), "per": []}
        out = {
            "kind": self.kind.value,
            "level": self.level,
            "partition": [list(g) for g in self.partition],
            "witness": witness,
        }
        if self.low_confidence:
            out["low_confidence"] = True
        if self.detail:
            out["detail"] = self.detail
        return out

    def __str__(self) -> str:
        text = f"{self.kind.value} (level {self.level})"
        if self.partition:
            text += " partition " + " | ".join(",".join(str(j) for j in g) for g in self.partition)
        if self.witness is not None:
            text += f" witness {self.witness}"
        if self.low_confidence:
            text += " [low confidence]"
        return text
