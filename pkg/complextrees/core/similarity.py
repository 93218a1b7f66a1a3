# ComplexTrees/core/similarity.py

from dataclasses import dataclass

import numpy as np

from complextrees.errors import InputError

from .alphabet import Alphabet, letter_product, phi_finite
from .words import FiniteWord


@dataclass(frozen=True)
class Similarity:
    """Affine map z ↦ node + scale·(z − 1).

    f_v for a finite word v is Similarity(φ(v), π(v)); the identity is
    Similarity(1, 1).
    """

    node: complex
    scale: complex

    def __post_init__(self):
        object.__setattr__(self, "node", complex(self.node))
        object.__setattr__(self, "scale", complex(self.scale))
        if self.scale == 0:
            raise InputError("a similarity needs a nonzero scale")

    @classmethod
    def identity(cls) -> "Similarity":
        return cls(1.0, 1.0)

    def __call__(self, z):
        if isinstance(z, np.ndarray):
            return self.node + self.scale * (z - 1.0)
        return self.node + self.scale * (complex(z) - 1.0)

    def compose(self, other: "Similarity") -> "Similarity":
        """self ∘ other."""
        return Similarity(self.node + self.scale * (other.node - 1.0), self.scale * other.scale)

    __matmul__ = compose

    def inverse(self) -> "Similarity":
        return Similarity(1.0 + (1.0 - self.node) / self.scale, 1.0 / self.scale)

    def distance_to(self, other: "Similarity") -> float:
        return max(abs(self.node - other.node), abs(self.scale - other.scale))

    def is_identity(self, tol: float = 1e-12) -> bool:
        return self.distance_to(Similarity.identity()) <= tol


def similarity_of(word: FiniteWord, alphabet: Alphabet) -> Similarity:
    return Similarity(phi_finite(word, alphabet), letter_product(word, alphabet))


def neighbor_map(u: FiniteWord, v: FiniteWord, alphabet: Alphabet) -> Similarity:
    """h_{u,v} = f_u⁻¹ ∘ f_v, the identity exactly when F_{uA} = F_{vA} as maps."""
    if not len(u) or not len(v):
        raise InputError("neighbor maps are defined for nonempty words")
    return similarity_of(u, alphabet).inverse() @ similarity_of(v, alphabet)
