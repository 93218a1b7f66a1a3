# ComplexTrees/dimension/moran.py

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np

from complextrees.config import resolve
from complextrees.core import Alphabet, Relation, post_critical_set
from complextrees.errors import BracketFailure, InputError, NoSignChange
from complextrees.family import ParametricFamily, eval_family

logger = logging.getLogger(__name__)


@dataclass
class DimensionReport:
    """Solution α of Σ|c_j|^α = 1 with the final residual Σ|c_j|^α − 1."""

    alpha: float
    residual: float
    iterations: int

    def __float__(self) -> float:
        return self.alpha


def _bisect(
    func: Callable[[float], float], lo: float, hi: float, tol: float, width: float = 0.0
) -> Tuple[float, float, int]:
    """Root of a function changing sign on [lo, hi]; stops on |f| ≤ tol or a collapsed bracket."""
    max_iter = resolve("bisection_max_iter")
    f_lo = func(lo)
    mid, value = lo, f_lo
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        value = func(mid)
        if abs(value) <= tol or hi - lo <= width:
            return mid, value, it
        if (value > 0) == (f_lo > 0):
            lo, f_lo = mid, value
        else:
            hi = mid
        if hi - lo <= 4e-16 * max(abs(lo), abs(hi)):
            return mid, value, it
    return mid, value, max_iter


def similarity_dimension(alphabet: Alphabet, tol: float = None) -> DimensionReport:
    """The unique α > 0 with Σ|c_j|^α = 1, by bisection on the decreasing map α ↦ Σ|c_j|^α."""
    tol = resolve("dimension_tol", tol)
    lo, hi = resolve("dimension_bracket")
    moduli = np.abs(alphabet.values)

    def moran(alpha: float) -> float:
        return float(np.sum(moduli**alpha)) - 1.0

    if not (moran(lo) > 0.0 > moran(hi)):
        raise BracketFailure(f"Σ|c_j|^α − 1 does not change sign on [{lo}, {hi}] for {alphabet}")
    alpha, residual, iterations = _bisect(moran, lo, hi, tol)
    if abs(residual) > tol:
        logger.warning("similarity_dimension: residual %.3g above %.3g after %d steps", residual, tol, iterations)
    return DimensionReport(alpha=alpha, residual=residual, iterations=iterations)


def in_m2(fam: ParametricFamily, z: complex) -> bool:
    """True when Σ|c_j(z)|² > 1, so the similarity dimension exceeds 2."""
    alphabet = eval_family(fam, z)
    return float(np.sum(np.abs(alphabet.values) ** 2)) > 1.0


def post_critically_finite(relations: Iterable[Relation], alphabet: Optional[Alphabet] = None) -> bool:
    """Whether the shift orbits of the relation addresses close up into a finite set.

    Letters with Σ|c_j|² > 1 have similarity dimension above two, and such a
    tree is never p.c.f. whatever relations are declared for it.
    """
    relations = list(relations)
    if alphabet is not None and float(np.sum(np.abs(alphabet.values) ** 2)) > 1.0:
        return False
    bound = sum(len(w.preamble) + len(w.period) for rel in relations for w in (rel.left, rel.right))
    return len(post_critical_set(relations)) <= bound


def m2_mask(fam: ParametricFamily, z) -> np.ndarray:
    """Vectorized in_m2; inadmissible parameters map to False."""
    values = fam.letter_values(z)
    with np.errstate(invalid="ignore", over="ignore"):
        total = np.sum(np.abs(values) ** 2, axis=0)
    return fam.admissible_mask(z) & (total > 1.0)


def _moran_on_ray(fam: ParametricFamily, direction: complex, alpha: float) -> Callable:
    def moran(t):
        z = np.asarray(t, dtype=np.float64) * direction
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            total = np.sum(np.abs(fam.letter_values(z)) ** alpha, axis=0) - 1.0
        return np.where(fam.admissible_mask(z), total, np.nan)

    return moran


def alpha_loci_on_ray(
    fam: ParametricFamily, angle: float, alpha: float, tol: float = None
) -> List[float]:
    """Every modulus t on the ray z = t·e^{iθ} where Σ|c_j(z)|^alpha = 1, ascending.

    Crossings are located by sampling ``ray_samples`` admissible points of
    (0, ray_max_modulus] and refined by bisection.
    """
    if alpha <= 0:
        raise InputError(f"alpha must be positive, got {alpha}")
    tol = resolve("dimension_tol", tol)
    samples = resolve("ray_samples")
    top = resolve("ray_max_modulus")
    moran = _moran_on_ray(fam, complex(np.cos(angle), np.sin(angle)), alpha)

    t = np.linspace(0.0, top, samples + 1)[1:]
    g = moran(t)
    loci = [float(x) for x in t[g == 0.0]]
    brackets = np.nonzero(np.isfinite(g[:-1]) & np.isfinite(g[1:]) & (g[:-1] * g[1:] < 0.0))[0]
    for i in brackets:
        lo, hi = float(t[i]), float(t[i + 1])
        if not np.all(np.isfinite(moran(np.linspace(lo, hi, 9)))):
            logger.warning("alpha locus bracket [%.6g, %.6g] leaves the admissible region; skipped", lo, hi)
            continue
        root, _, _ = _bisect(lambda s: float(moran(s)), lo, hi, 0.0, width=tol)
        loci.append(root)
    return sorted(loci)


def alpha_locus_on_ray(
    fam: ParametricFamily,
    angle: float,
    alpha: float,
    tol: float = None,
    branch: str = "outer",
) -> float:
    """Modulus of the outer (largest) or inner (smallest) crossing of the α-locus with a ray."""
    if branch not in ("outer", "inner"):
        raise InputError(f"branch must be 'outer' or 'inner', got {branch!r}")
    loci = alpha_loci_on_ray(fam, angle, alpha, tol)
    if not loci:
        raise NoSignChange(f"the alpha={alpha} locus of {fam.name} does not cross the ray at angle {angle}")
    return loci[-1] if branch == "outer" else loci[0]
