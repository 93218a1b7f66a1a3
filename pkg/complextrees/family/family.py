# ComplexTrees/family/family.py

import logging
from dataclasses import dataclass, field
from typing import Annotated, FrozenSet, Optional, Sequence, Tuple

import numpy as np

from complextrees.config import resolve
from complextrees.core import (
    Alphabet,
    EPWord,
    FiniteWord,
    Relation,
    check_relation,
    observed_relations,
)
from complextrees.errors import (
    ConjugateFamilyUnsupported,
    DomainViolation,
    InputError,
    NoAdmissibleSamples,
)

from .rational import RationalFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParametricFamily:
    """One-parameter family T_A(z) with letters c_j(z) rational in z.

    A letter flagged in ``conjugate_flags`` is the complex conjugate of its
    rational expression, which makes the family numeric-only.
    """

    name: str
    letters: Tuple[RationalFunction, ...]
    declared_relations: FrozenSet[Relation] = frozenset()
    domain_label: str = ""
    conjugate_flags: Tuple[bool, ...] = ()
    bounds: Tuple[complex, complex] = (-1 - 1j, 1 + 1j)
    notes: str = field(default="", compare=False)

    def __post_init__(self):
        letters = tuple(RationalFunction.coerce(c) for c in self.letters)
        if len(letters) < 2:
            raise InputError(f"family {self.name!r} needs at least two letters")
        flags = tuple(bool(f) for f in self.conjugate_flags) or (False,) * len(letters)
        if len(flags) != len(letters):
            raise InputError(f"family {self.name!r}: {len(flags)} conjugate flags for {len(letters)} letters")
        for rel in self.declared_relations:
            if rel.max_letter() > len(letters):
                raise InputError(f"family {self.name!r}: relation {rel} uses a letter beyond c_{len(letters)}")
        lo, hi = (complex(b) for b in self.bounds)
        if not (hi.real > lo.real and hi.imag > lo.imag):
            raise InputError(f"family {self.name!r}: sampling rectangle {lo}..{hi} has no area")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "conjugate_flags", flags)
        object.__setattr__(self, "declared_relations", frozenset(self.declared_relations))
        object.__setattr__(self, "bounds", (lo, hi))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def is_symbolic(self) -> bool:
        return not any(self.conjugate_flags)

    def require_symbolic(self, operation: str) -> None:
        if not self.is_symbolic:
            raise ConjugateFamilyUnsupported(
                f"{operation} needs rational letters; family {self.name!r} has conjugated letters"
            )

    def letter_values(self, z) -> np.ndarray:
        """Array of shape (n, *z.shape) with c_j(z); conjugate letters applied."""
        zz = np.asarray(z, dtype=np.complex128)
        rows = []
        for letter, conj in zip(self.letters, self.conjugate_flags):
            value = np.asarray(letter(zz), dtype=np.complex128)
            rows.append(np.conj(value) if conj else value)
        return np.stack(rows)

    def admissible_mask(self, z) -> np.ndarray:
        """Vectorized membership of z in the admissible region 𝓡."""
        values = self.letter_values(z)
        with np.errstate(invalid="ignore"):
            moduli = np.abs(values)
            ok = np.all(np.isfinite(values), axis=0) & np.all((moduli > 0.0) & (moduli < 1.0), axis=0)
        for i in range(self.n):
            for j in range(i + 1, self.n):
                ok &= values[i] != values[j]
        return ok

    def __str__(self) -> str:
        return self.name


def eval_family(fam: ParametricFamily, z: complex) -> Alphabet:
    """The alphabet A(z); DomainViolation when z lies outside 𝓡."""
    z = complex(z)
    for j, letter in enumerate(fam.letters, start=1):
        if letter.denominator_at(z) == 0:
            raise DomainViolation(f"c_{j}(z) has a pole at z={z}", z)
    values = fam.letter_values(z)
    for j, c in enumerate(values, start=1):
        c = complex(c)
        if not (np.isfinite(c.real) and np.isfinite(c.imag)) or not 0.0 < abs(c) < 1.0:
            raise DomainViolation(f"|c_{j}({z})| = {abs(c):.6g} is outside (0, 1)", z)
    if len(set(complex(c) for c in values)) != fam.n:
        raise DomainViolation(f"letters coincide at z={z}", z)
    return Alphabet(tuple(complex(c) for c in values))


def _letter_symbols(fam: ParametricFamily, symbols: Sequence[int]):
    for s in symbols:
        if not 1 <= s <= fam.n:
            raise InputError(f"letter index {s} out of range 1..{fam.n}")
        yield fam.letters[s - 1]


def _phi_and_product(fam: ParametricFamily, symbols: Sequence[int]):
    """φ(v) and π(v) as rational functions, by Horner from the right."""
    phi = RationalFunction.constant(1.0)
    for letter in reversed(list(_letter_symbols(fam, symbols))):
        phi = 1.0 + letter * phi
    prod = RationalFunction.constant(1.0)
    for letter in _letter_symbols(fam, symbols):
        prod = prod * letter
    return phi, prod


def phi_ep_symbolic(w: EPWord, fam: ParametricFamily) -> RationalFunction:
    """φ(u·v̄) = φ(u) + π(u)·(φ(v) − 1)/(1 − π(v)) as a rational function of z."""
    fam.require_symbolic("phi_ep_symbolic")
    phi_u, prod_u = _phi_and_product(fam, w.preamble)
    phi_v, prod_v = _phi_and_product(fam, w.period)
    return phi_u + prod_u * ((phi_v - 1.0) / (1.0 - prod_v))


def relation_defect(rel: Relation, fam: ParametricFamily) -> RationalFunction:
    """φ(left) − φ(right); its admissible numerator roots are where the relation holds."""
    fam.require_symbolic("relation_defect")
    return phi_ep_symbolic(rel.left, fam) - phi_ep_symbolic(rel.right, fam)


def sample_admissible(
    fam: ParametricFamily,
    count: int,
    seed: int = None,
    attempts: int = None,
) -> np.ndarray:
    """Uniform rejection samples of 𝓡 inside the family's bounding rectangle."""
    seed = resolve("seed", seed)
    attempts = resolve("sample_attempts", attempts)
    rng = np.random.default_rng(seed)
    lo, hi = fam.bounds
    found = []
    drawn = 0
    batch = max(4 * count, 256)
    while sum(len(f) for f in found) < count and drawn < attempts:
        size = min(batch, attempts - drawn)
        z = rng.uniform(lo.real, hi.real, size) + 1j * rng.uniform(lo.imag, hi.imag, size)
        drawn += size
        found.append(z[fam.admissible_mask(z)])
    samples = np.concatenate(found) if found else np.zeros(0, dtype=np.complex128)
    if samples.size == 0:
        raise NoAdmissibleSamples(f"no admissible parameter for {fam.name!r} after {drawn} draws")
    if samples.size < count:
        logger.warning("only %d of %d admissible samples for %s", samples.size, count, fam.name)
    return samples[:count]


def verify_family_identity(
    fam: ParametricFamily,
    sample_count: Annotated[int, "admissible parameters to test"] = 100,
    seed: Annotated[Optional[int], "rng seed, config default when None"] = None,
) -> float:
    """Largest |φ(a) − φ(b)| over declared relations a ∼ b and sampled admissible z."""
    samples = sample_admissible(fam, sample_count, seed)
    worst = 0.0
    for z in samples:
        alphabet = eval_family(fam, z)
        for rel in fam.declared_relations:
            worst = max(worst, check_relation(rel, alphabet))
    logger.debug("verify_family_identity %s: %d samples, residual %.3g", fam.name, samples.size, worst)
    return worst


def default_tails(fam: ParametricFamily) -> list:
    """Periods occurring in the declared relations, else every single-letter period."""
    periods = {FiniteWord(w.period) for rel in fam.declared_relations for w in (rel.left, rel.right)}
    if not periods:
        return [FiniteWord((j,)) for j in range(1, fam.n + 1)]
    return sorted(periods, key=lambda p: (len(p), p.symbols))


def _is_family_identity(rel: Relation, fam: ParametricFamily, samples: np.ndarray, tol: float) -> bool:
    if fam.is_symbolic:
        return relation_defect(rel, fam).is_zero()
    return all(check_relation(rel, eval_family(fam, z)) <= tol for z in samples)


def unstable_witness(
    fam: ParametricFamily,
    z: complex,
    level: int,
    tails: Sequence[FiniteWord] = None,
    tol: float = None,
) -> Optional[Relation]:
    """A relation holding at z that does not hold across the family, or None.

    A witness puts z in the unstable set 𝓜 (Q_A(z) strictly larger than
    the family's generic Q_A) as seen at the given level.
    """
    alphabet = eval_family(fam, z)
    tails = default_tails(fam) if tails is None else tails
    observed = observed_relations(alphabet, level, tails, tol)
    extra = sorted(observed - fam.declared_relations, key=str)
    if not extra:
        return None
    samples = sample_admissible(fam, 8) if not fam.is_symbolic else None
    check_tol = resolve("relation_tol", tol)
    for rel in extra:
        if not _is_family_identity(rel, fam, samples, check_tol):
            return rel
    return None


def relations_empty(
    fam: ParametricFamily,
    z: complex,
    level: int,
    tails: Sequence[FiniteWord] = None,
    tol: float = None,
) -> bool:
    """Q_A(z) = ∅ among the relations visible at this level (the disconnected regime)."""
    alphabet = eval_family(fam, z)
    tails = default_tails(fam) if tails is None else tails
    return not observed_relations(alphabet, level, tails, tol)
