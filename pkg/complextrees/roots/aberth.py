# ComplexTrees/roots/aberth.py

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from complextrees.config import get_config, resolve
from complextrees.errors import InputError, NonConvergence
from complextrees.family.rational import trim

logger = logging.getLogger(__name__)

# Rows per Aberth batch are limited so that rows * degree**2 stays near this.
_BATCH_ELEMENTS = 4_000_000


@dataclass
class RootReport:
    """Roots of one polynomial with backward-error residuals."""

    roots: np.ndarray
    residuals: np.ndarray
    sweeps: int
    degree: int
    clusters: List[Tuple[complex, int]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return int(self.roots.size)


def _horner(coeffs: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """p(x) and p'(x) for a batch; coeffs (B, d+1) ascending, x (B, d)."""
    p = np.repeat(coeffs[:, -1:], x.shape[1], axis=1)
    dp = np.zeros_like(x)
    for k in range(coeffs.shape[1] - 2, -1, -1):
        dp = dp * x + p
        p = p * x + coeffs[:, k : k + 1]
    return p, dp


def residual_bound(coeffs: np.ndarray, roots: np.ndarray, factor: float = None) -> np.ndarray:
    """1e-8 · max|coeff| · (1 + |root|)^deg, row-wise for a batch."""
    factor = resolve("root_residual_factor", factor)
    deg = coeffs.shape[1] - 1
    scale = np.max(np.abs(coeffs), axis=1, keepdims=True)
    with np.errstate(over="ignore"):
        return factor * scale * (1.0 + np.abs(roots)) ** deg


def aberth_batch(
    monic: np.ndarray,
    max_sweeps: int = None,
    factor: float = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Simultaneous Aberth iteration on a batch of monic polynomials of equal degree.

    Returns (roots, residuals, ok, sweeps); ``ok`` marks rows whose every
    residual is within the backward-error bound.
    """
    max_sweeps = resolve("aberth_max_sweeps", max_sweeps)
    monic = np.asarray(monic, dtype=np.complex128)
    rows, size = monic.shape
    deg = size - 1
    if deg < 1:
        raise InputError("aberth_batch needs degree >= 1")
    # Cauchy bound, then a circle with an irrational phase offset.
    radius = 1.0 + np.max(np.abs(monic[:, :-1]), axis=1, keepdims=True)
    angles = 2.0 * np.pi * np.arange(deg) / deg + 0.4
    x = radius * np.exp(1j * angles)[None, :]
    x = x.astype(np.complex128)

    active = np.ones(rows, dtype=bool)
    eye = np.eye(deg, dtype=bool)
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        xa = x[idx]
        p, dp = _horner(monic[idx], xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = xa[:, :, None] - xa[:, None, :]
            diff[:, eye] = np.inf
            repulsion = np.sum(1.0 / diff, axis=2)
            step = ratio / (1.0 - ratio * repulsion)
        bad = ~np.isfinite(step)
        if np.any(bad):
            # Stalled or colliding estimates get a small deterministic kick.
            step = np.where(bad, 1e-3 * (1.0 + np.abs(xa)) * np.exp(0.7j * sweeps), step)
        x[idx] = xa - step
        done = np.all(np.abs(step) <= 1e-14 * (1.0 + np.abs(xa)), axis=1) | np.all(p == 0, axis=1)
        active[idx[done]] = False

    p, _ = _horner(monic, x)
    residuals = np.abs(p)
    ok = np.all(residuals <= residual_bound(monic, x, factor), axis=1)
    return x, residuals, ok, sweeps


def cluster_roots(roots: np.ndarray, tol: float = None) -> List[Tuple[complex, int]]:
    """Merge roots closer than ``tol`` into (mean, multiplicity) clusters."""
    tol = resolve("root_cluster_tol", tol)
    remaining = list(range(roots.size))
    clusters = []
    while remaining:
        head = remaining.pop(0)
        members = [head] + [j for j in remaining if abs(roots[j] - roots[head]) <= tol]
        remaining = [j for j in remaining if j not in members]
        clusters.append((complex(np.mean(roots[members])), len(members)))
    return clusters


def _prepare(coeffs: Sequence[complex]) -> Tuple[np.ndarray, int]:
    """Trim, strip roots at zero and make monic; returns (monic, zero multiplicity)."""
    c = trim(np.atleast_1d(np.asarray(coeffs, dtype=np.complex128)), get_config()["polynomial_trim"])
    if c.size < 2:
        raise InputError(f"polynomial_roots needs degree >= 1 after trimming, got {c.size - 1}")
    nonzero = np.nonzero(c)[0]
    zeros = int(nonzero[0])
    c = c[zeros:]
    return c / c[-1], zeros


def polynomial_roots(coeffs: Sequence[complex], max_sweeps: int = None) -> RootReport:
    """All complex roots of a polynomial with ascending coefficients.

    Raises NonConvergence when the sweep budget runs out with some residual
    above 1e-8 · max|coeff| · (1 + |root|)^deg.
    """
    monic, zeros = _prepare(coeffs)
    roots = np.zeros(zeros, dtype=np.complex128)
    residuals = np.zeros(zeros)
    sweeps = 0
    if monic.size > 1:
        found, res, ok, sweeps = aberth_batch(monic[None, :], max_sweeps)
        if not ok[0]:
            raise NonConvergence(
                f"Aberth iteration did not converge in {sweeps} sweeps (max residual {res.max():.3g})"
            )
        roots = np.concatenate([roots, found[0]])
        residuals = np.concatenate([residuals, res[0]])
    return RootReport(
        roots=roots,
        residuals=residuals,
        sweeps=sweeps,
        degree=int(roots.size),
        clusters=cluster_roots(roots),
    )


def roots_block(
    rows: np.ndarray, max_sweeps: int = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Roots of every row of an ascending coefficient matrix, batched by degree.

    Returns ``(roots, residuals, owner, degrees, solved)``: the roots of the
    solved rows grouped by ``owner`` in row order, the trimmed degree of
    every row and the mask of rows whose roots passed the residual bound.
    Constant rows are never solved.
    """
    rows = np.asarray(rows, dtype=np.complex128)
    if rows.ndim != 2:
        raise InputError(f"roots_block needs a 2-D coefficient matrix, got shape {rows.shape}")
    count, width = rows.shape
    degrees = np.zeros(count, dtype=np.int64)
    low = np.zeros(count, dtype=np.int64)
    if width:
        mag = np.abs(rows)
        live = mag > get_config()["polynomial_trim"] * mag.max(axis=1, keepdims=True)
        degrees = np.where(live.any(axis=1), width - 1 - np.argmax(live[:, ::-1], axis=1), 0)
        low = np.argmax(rows != 0, axis=1)
    solved = degrees >= 1
    reduced = degrees - low

    zero_rows = np.nonzero(solved & (low > 0))[0]
    owners = [np.repeat(zero_rows, low[zero_rows])]
    found_parts = [np.zeros(owners[0].size, dtype=np.complex128)]
    residual_parts = [np.zeros(owners[0].size)]
    skipped = 0
    for deg in np.unique(reduced[solved & (reduced >= 1)]).tolist():
        idx = np.nonzero(solved & (reduced == deg))[0]
        step = max(1, _BATCH_ELEMENTS // (deg * deg))
        for start in range(0, idx.size, step):
            sub = idx[start : start + step]
            coeffs = rows[sub[:, None], low[sub][:, None] + np.arange(deg + 1)]
            found, res, ok, _ = aberth_batch(coeffs / coeffs[:, -1:], max_sweeps)
            solved[sub[~ok]] = False
            skipped += int((~ok).sum())
            owners.append(np.repeat(sub[ok], deg))
            found_parts.append(found[ok].ravel())
            residual_parts.append(res[ok].ravel())
    if skipped:
        logger.warning("skipped %d non-converging polynomials", skipped)

    owner = np.concatenate(owners)
    roots = np.concatenate(found_parts)
    residuals = np.concatenate(residual_parts)
    keep = solved[owner]
    order = np.argsort(owner[keep], kind="stable")
    return roots[keep][order], residuals[keep][order], owner[keep][order], degrees, solved


def roots_many(
    polys: Sequence[np.ndarray], max_sweeps: int = None
) -> List[Optional[Tuple[np.ndarray, np.ndarray]]]:
    """Roots and residuals for many polynomials, batched by degree.

    Entries whose iteration fails the residual bound, or that are constant,
    are None.
    """
    arrays = [np.atleast_1d(np.asarray(p, dtype=np.complex128)) for p in polys]
    if not arrays:
        return []
    rows = np.zeros((len(arrays), max(a.size for a in arrays)), dtype=np.complex128)
    for i, a in enumerate(arrays):
        rows[i, : a.size] = a
    roots, residuals, owner, _, solved = roots_block(rows, max_sweeps)
    bounds = np.searchsorted(owner, np.arange(len(arrays) + 1))
    return [
        (roots[bounds[i] : bounds[i + 1]], residuals[bounds[i] : bounds[i + 1]]) if solved[i] else None
        for i in range(len(arrays))
    ]
