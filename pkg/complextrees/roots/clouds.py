# ComplexTrees/roots/clouds.py

import logging
from collections import abc
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.polynomial import polynomial as P
from tqdm import tqdm

from complextrees.config import get_config, resolve
from complextrees.core import CellIndex, EPWord, FiniteWord, Relation, candidate_pairs, hash_columns, word_at
from complextrees.errors import BudgetExceeded, InputError
from complextrees.family import (
    ParametricFamily,
    default_tails,
    phi_ep_symbolic,
    poly_gcd,
    relation_defect,
    trim,
)

from .aberth import roots_block

logger = logging.getLogger(__name__)

FINGERPRINT_POINTS = 4

# Fingerprint ratios are rounded to 1e-7 before hashing.
_KEY_SCALE = 1e7
_KEY_LIMIT = float(2**62)


class Provenance(abc.Sequence):
    """Source label of every cloud point, rendered from an integer source id on access."""

    def __init__(self, ids: np.ndarray, render: Callable[[int], str]):
        self.ids = np.asarray(ids, dtype=np.int64).ravel()
        self.render = render

    def __len__(self) -> int:
        return int(self.ids.size)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self.render(int(i)) for i in self.ids[index]]
        return self.render(int(self.ids[index]))

    def __iter__(self):
        return (self.render(int(i)) for i in self.ids)

    def __eq__(self, other):
        if not isinstance(other, abc.Sequence) or isinstance(other, str):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self, other))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Provenance({len(self)} sources)"

    def take(self, indices) -> "Provenance":
        return Provenance(self.ids[np.asarray(indices, dtype=np.int64)], self.render)


def _take(sources: Sequence[str], indices: np.ndarray) -> Sequence[str]:
    if isinstance(sources, Provenance):
        return sources.take(indices)
    return [sources[i] for i in indices]


@dataclass
class RootCloud:
    """Admissible parameters found as roots, with per-point provenance."""

    points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.complex128))
    sources: Sequence[str] = field(default_factory=list)
    degrees: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    label: str = ""

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.complex128).ravel()
        self.degrees = np.asarray(self.degrees, dtype=np.int64).ravel()
        self.residuals = np.asarray(self.residuals, dtype=float).ravel()

    def __len__(self) -> int:
        return int(self.points.size)

    def __iter__(self):
        return iter(self.points)

    def nearest(self, z: complex) -> float:
        """Distance from z to the closest cloud point (inf when empty)."""
        if not len(self):
            return float("inf")
        return float(np.min(np.abs(self.points - complex(z))))

    def contains(self, z: complex, tol: float = 1e-8) -> bool:
        return self.nearest(z) <= tol

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "re": self.points.real,
                "im": self.points.imag,
                "degree": self.degrees,
                "residual": self.residuals,
                "provenance": list(self.sources),
            },
            columns=["re", "im", "degree", "residual", "provenance"],
        )


def _poly_lcm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    g = poly_gcd(a, b)
    return trim(P.polymul(a, P.polydiv(b, g)[0]))


def _exact_div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return trim(P.polydiv(a, b)[0])


def _mul_rows(rows: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Multiply every coefficient row by one polynomial."""
    out = np.zeros((rows.shape[0], rows.shape[1] + poly.size - 1), dtype=np.complex128)
    for k, c in enumerate(poly):
        if c != 0:
            out[:, k : k + rows.shape[1]] += c * rows
    return out


def _pad(rows: np.ndarray, width: int) -> np.ndarray:
    if rows.shape[1] >= width:
        return rows
    return np.pad(rows, ((0, 0), (0, width - rows.shape[1])))


class _Numerators:
    """Polynomial numerators of φ over whole word levels of a symbolic family.

    With L the lcm of the letter denominators and P_j = c_j·L, the level-ℓ
    rows hold G(u) = L^ℓ·φ(u) and Pr(u) = L^ℓ·π(u) in lexicographic word
    order. A tail period t contributes φ(u·t̄) = φ(u) + π(u)·A_t/B, and its
    numerator is G(u)·B + Pr(u)·A_t.
    """

    def __init__(self, fam: ParametricFamily, tails: Sequence[FiniteWord]):
        fam.require_symbolic("root clouds")
        self.fam = fam
        lcm = np.ones(1, dtype=np.complex128)
        for c in fam.letters:
            lcm = _poly_lcm(lcm, c.den)
        self.lcm = lcm
        self.letter_polys = [_exact_div(P.polymul(c.num, lcm), c.den) for c in fam.letters]

        self.tails = [FiniteWord(tuple(t)) for t in tails]
        offsets = [phi_ep_symbolic(EPWord((), tuple(t)), fam) - 1.0 for t in self.tails]
        common = np.ones(1, dtype=np.complex128)
        for off in offsets:
            common = _poly_lcm(common, off.den)
        self.tail_den = common
        self.tail_nums = [P.polymul(off.num, _exact_div(common, off.den)) for off in offsets]

        self.level = 0
        self.G = np.ones((1, 1), dtype=np.complex128)
        self.Pr = np.ones((1, 1), dtype=np.complex128)

    def advance(self) -> None:
        n = self.fam.n
        scaled = _mul_rows(self.G, self.lcm)
        branches = [_mul_rows(self.Pr, p) for p in self.letter_polys]
        width = max([scaled.shape[1]] + [b.shape[1] for b in branches])
        scaled = _pad(scaled, width)
        g = np.stack([scaled + _pad(b, width) for b in branches], axis=1)
        pr_width = max(b.shape[1] for b in branches)
        pr = np.stack([_pad(b, pr_width) for b in branches], axis=1)
        self.G = g.reshape(-1, width)
        self.Pr = pr.reshape(-1, pr_width)
        self.level += 1
        assert self.G.shape[0] == n**self.level

    def tip_rows(self, tail_index: int) -> np.ndarray:
        head = _mul_rows(self.G, self.tail_den)
        tail = _mul_rows(self.Pr, self.tail_nums[tail_index])
        width = max(head.shape[1], tail.shape[1])
        return _pad(head, width) + _pad(tail, width)


def _fingerprint_points(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed + 7919)
    radius = rng.uniform(0.3, 0.9, FINGERPRINT_POINTS)
    return radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, FINGERPRINT_POINTS))


def _evaluate(rows: np.ndarray, points: np.ndarray) -> np.ndarray:
    powers = points[None, :] ** np.arange(rows.shape[1])[:, None]
    return rows @ powers


def _keys(values: np.ndarray, scale: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Quantized projective fingerprints and a mask of identically zero differences."""
    zero = np.all(np.abs(values) <= 1e-9 * np.maximum(scale, 1e-300), axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = values[..., 1:] / values[..., :1]
    ratio = np.where(np.isfinite(ratio), ratio, 0.0)
    parts = np.concatenate([ratio.real, ratio.imag], axis=-1)
    keys = np.clip(np.round(parts * _KEY_SCALE), -_KEY_LIMIT, _KEY_LIMIT).astype(np.int64)
    return keys, zero


def _member(sorted_keys: np.ndarray, query: np.ndarray) -> np.ndarray:
    if not sorted_keys.size:
        return np.zeros(query.size, dtype=bool)
    pos = np.minimum(np.searchsorted(sorted_keys, query), sorted_keys.size - 1)
    return sorted_keys[pos] == query


class _Deduper:
    """Keeps the first polynomial of every proportionality class, in arrival order.

    Classes are remembered as 64-bit hashes of their fingerprints: a sorted
    array plus a few sorted runs that are merged into it now and then.
    """

    MAX_RUNS = 8

    def __init__(self, cap: int):
        self.cap = cap
        self.count = 0
        self.seen = np.zeros(0, dtype=np.uint64)
        self.runs: List[np.ndarray] = []

    def _known(self, hashes: np.ndarray) -> np.ndarray:
        known = _member(self.seen, hashes)
        for run in self.runs:
            known |= _member(run, hashes)
        return known

    def offer(self, keys: np.ndarray, zero: np.ndarray) -> np.ndarray:
        """Flat indices of the block's polynomials from classes not seen before."""
        keys = keys.reshape(-1, keys.shape[-1])
        live = np.nonzero(~zero.ravel())[0]
        if live.size == 0:
            return live
        hashes = hash_columns(keys[live].T)
        unique, first = np.unique(hashes, return_index=True)
        new = ~self._known(unique)
        picked = live[np.sort(first[new])]
        self.count += int(picked.size)
        if self.count > self.cap:
            raise BudgetExceeded(f"more than {self.cap} distinct defect polynomials")
        self.runs.append(unique[new])
        if len(self.runs) >= self.MAX_RUNS:
            self.seen = np.sort(np.concatenate([self.seen] + self.runs))
            self.runs = []
        return picked


def _first_arrivals(points: np.ndarray, radius: float) -> np.ndarray:
    """Mask of points with no earlier kept point within ``radius``, decided in index order."""
    keep = np.ones(points.size, dtype=bool)
    if points.size < 2:
        return keep
    first, second = candidate_pairs(points, radius)
    close = np.abs(points[first] - points[second]) <= radius
    lo = np.minimum(first[close], second[close])
    hi = np.maximum(first[close], second[close])
    # 1 kept, -1 dropped, 0 undecided; the lowest undecided index settles every round.
    status = np.ones(points.size, dtype=np.int8)
    status[hi] = 0
    while (status == 0).any():
        status[hi[(status[lo] == 1) & (status[hi] == 0)]] = -1
        blocked = np.zeros(points.size, dtype=bool)
        blocked[hi[status[lo] != -1]] = True
        status[(status == 0) & ~blocked] = 1
    return status == 1


class _CloudBuilder:
    """Roots row batches and keeps the admissible roots that are new, in arrival order.

    A root is new when no kept root lies within the dedupe radius. Each
    batch is split across worker threads and merged back in row order, so
    the cloud does not depend on the worker count.
    """

    def __init__(
        self,
        fam: ParametricFamily,
        label: str,
        workers: int = None,
        progress: bool = False,
        total: int = None,
    ):
        self.fam = fam
        self.label = label
        self.workers = max(1, resolve("workers", workers))
        self.batch_rows = max(1, resolve("root_batch_rows"))
        self.radius = resolve("cloud_dedupe_radius")
        self.index = CellIndex(self.radius)
        self.parts: List[Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]] = []
        self.bar = tqdm(total=total, desc=label, unit="poly", disable=not progress)
        self.pool: Optional[ThreadPoolExecutor] = None

    def __enter__(self) -> "_CloudBuilder":
        if self.workers > 1:
            self.pool = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, *exc) -> None:
        if self.pool is not None:
            self.pool.shutdown()
        self.bar.close()

    def _roots(self, rows: np.ndarray):
        if self.pool is None or rows.shape[0] < 2 * self.workers:
            return roots_block(rows)
        pieces = np.array_split(np.arange(rows.shape[0]), self.workers)
        results = list(self.pool.map(lambda ix: roots_block(rows[ix]), pieces))
        return (
            np.concatenate([r[0] for r in results]),
            np.concatenate([r[1] for r in results]),
            np.concatenate([r[2] + ix[0] for r, ix in zip(results, pieces)]),
            np.concatenate([r[3] for r in results]),
            np.concatenate([r[4] for r in results]),
        )

    def _flush(self, rows: np.ndarray, ids: np.ndarray) -> None:
        roots, residuals, owner, degrees, _ = self._roots(rows)
        self.bar.update(rows.shape[0])
        if not roots.size:
            return
        keep = self.fam.admissible_mask(roots)
        keep[keep] = ~self.index.near(roots[keep], self.radius)
        roots, residuals, owner = roots[keep], residuals[keep], owner[keep]
        keep = _first_arrivals(roots, self.radius)
        roots, residuals, owner = roots[keep], residuals[keep], owner[keep]
        if roots.size:
            self.index.add(roots)
            self.parts.append((roots, ids[owner], degrees[owner], residuals))

    def solve(self, rows: np.ndarray, ids: np.ndarray) -> None:
        """Root coefficient ``rows`` whose points carry the source ``ids``."""
        rows = np.atleast_2d(rows)
        for start in range(0, rows.shape[0], self.batch_rows):
            self._flush(rows[start : start + self.batch_rows], ids[start : start + self.batch_rows])

    def cloud(self, render: Callable[[int], str]) -> RootCloud:
        if not self.parts:
            return RootCloud(sources=Provenance(np.zeros(0), render), label=self.label)
        points, ids, degrees, residuals = (np.concatenate(col) for col in zip(*self.parts))
        logger.debug("%s: %d points", self.label, points.size)
        return RootCloud(points, Provenance(ids, render), degrees, residuals, self.label)


def dedupe_cloud(cloud: RootCloud, radius: float = None) -> RootCloud:
    """Drop points within ``radius`` of an earlier kept point, keeping arrival order."""
    radius = resolve("cloud_dedupe_radius", radius)
    if len(cloud) < 2:
        return cloud
    keep = np.nonzero(_first_arrivals(cloud.points, radius))[0]
    return RootCloud(
        cloud.points[keep],
        _take(cloud.sources, keep),
        cloud.degrees[keep],
        cloud.residuals[keep],
        cloud.label,
    )


def tail_rotations(tails: Iterable[FiniteWord]) -> List[FiniteWord]:
    """Every cyclic shift of every tail period, each infinite word once."""
    out, seen = [], set()
    for t in tails:
        symbols = tuple(t)
        for k in range(len(symbols)):
            rotated = symbols[k:] + symbols[:k]
            key = EPWord((), rotated)
            if key not in seen:
                seen.add(key)
                out.append(FiniteWord(rotated))
    return out


def _check_tails(fam: ParametricFamily, tails) -> List[FiniteWord]:
    tails = default_tails(fam) if tails is None else [FiniteWord(tuple(t)) for t in tails]
    if not tails:
        raise InputError("root clouds need at least one tail period")
    for t in tails:
        if not len(t) or t.max_letter() > fam.n:
            raise InputError(f"tail period {t} is not a word over 1..{fam.n}")
    return tail_rotations(tails)


def _word_index(word: FiniteWord, n: int) -> int:
    index = 0
    for s in word:
        index = index * n + (s - 1)
    return index


def _tag_keys(table: np.ndarray, words: int, tails: int) -> np.ndarray:
    u, ti, v, si = table.T
    return ((u * tails + ti) * words + v) * tails + si


def _declared_keys(fam: ParametricFamily, level: int, tails: Sequence[FiniteWord]) -> List[int]:
    """Pair keys (u, t, v, s) that spell one of the family's declared relations."""
    words = fam.n**level

    def options(side: EPWord):
        head = side.prefix(level)
        return [
            (_word_index(head, fam.n), ti)
            for ti, t in enumerate(tails)
            if EPWord(tuple(head), tuple(t)) == side
        ]

    keys = []
    for rel in fam.declared_relations:
        for u, ti in options(rel.left):
            for v, si in options(rel.right):
                keys.append(((u * len(tails) + ti) * words + v) * len(tails) + si)
    return keys


def m_root_cloud(
    fam: ParametricFamily,
    level: int,
    tails: Optional[Iterable[FiniteWord]] = None,
    exclude_declared: bool = True,
    workers: int = None,
    progress: bool = False,
) -> RootCloud:
    """Admissible roots of the defects of u·t̄ ∼ v·s̄, |u| = |v| = level, u₁ < v₁.

    Each root adds a relation to Q_A, so the cloud approximates the unstable
    set 𝓜. Every tail is used with all of its cyclic shifts, so each pair
    of eventually periodic words with preamble at most ``level`` and one of
    the given periods is covered. Defects that vanish identically carry no
    roots and are skipped. With ``exclude_declared`` the family's declared
    relations are dropped even when their defect is not identically zero
    (a wrong declaration).
    """
    if level < 1:
        raise InputError(f"cloud level must be at least 1, got {level}")
    cfg = get_config()
    tails = _check_tails(fam, tails)
    numerators = _Numerators(fam, tails)
    n = fam.n
    block = n ** (level - 1)
    raw = len(tails) ** 2 * (n * (n - 1) // 2) * block * block
    if raw > cfg["raw_pair_cap"]:
        raise BudgetExceeded(f"{raw} raw word pairs exceed raw_pair_cap={cfg['raw_pair_cap']}")
    if n**level > cfg["disk_budget"]:
        raise BudgetExceeded(f"{n}**{level} words exceed the word budget")
    for _ in range(level):
        numerators.advance()

    tip = [numerators.tip_rows(i) for i in range(len(tails))]
    width = max(r.shape[1] for r in tip)
    tip = np.stack([_pad(r, width) for r in tip])
    pts = _fingerprint_points(cfg["seed"])
    values = np.stack([_evaluate(r, pts) for r in tip])
    scales = np.stack([_evaluate(np.abs(r), np.abs(pts)) for r in tip])

    dedupe = _Deduper(cfg["word_pair_cap"])
    chunk_rows = max(1, cfg["pair_chunk_rows"] // block)
    v_block = np.arange(block)
    tags = []
    for ti in range(len(tails)):
        for si in range(len(tails)):
            for a in range(n):
                for b in range(a + 1, n):
                    v_ids = b * block + v_block
                    for start in range(0, block, chunk_rows):
                        us = a * block + np.arange(start, min(block, start + chunk_rows))
                        diff = values[ti, us][:, None, :] - values[si, v_ids][None, :, :]
                        scale = scales[ti, us][:, None, :] + scales[si, v_ids][None, :, :]
                        picked = dedupe.offer(*_keys(diff, scale))
                        row, col = np.divmod(picked, block)
                        tags.append(
                            np.stack(np.broadcast_arrays(us[row], ti, v_ids[col], si), axis=-1)
                        )
    table = np.concatenate(tags) if tags else np.zeros((0, 4), dtype=np.int64)

    def render(i: int) -> str:
        u, ti, v, si = table[i].tolist()
        left = EPWord(tuple(word_at(u, n, level)), tuple(tails[ti]))
        right = EPWord(tuple(word_at(v, n, level)), tuple(tails[si]))
        return str(Relation(left, right))

    if exclude_declared and table.size:
        wrong = np.isin(_tag_keys(table, n**level, len(tails)), _declared_keys(fam, level, tails))
        for i in np.nonzero(wrong)[0].tolist():
            logger.warning("declared relation %s does not hold identically on %s", render(i), fam.name)
        table = table[~wrong]

    logger.info("m_root_cloud %s level %d: %d distinct defect polynomials", fam.name, level, len(table))
    with _CloudBuilder(fam, f"M({fam.name}, m={level})", workers, progress, total=len(table)) as builder:
        for start in range(0, len(table), builder.batch_rows):
            part = table[start : start + builder.batch_rows]
            rows = tip[part[:, 1], part[:, 0]] - tip[part[:, 3], part[:, 2]]
            builder.solve(rows, np.arange(start, start + len(part)))
        return builder.cloud(render)


def m0_root_cloud(
    fam: ParametricFamily,
    order: int,
    tails: Optional[Iterable[FiniteWord]] = None,
    workers: int = None,
    progress: bool = False,
) -> RootCloud:
    """Admissible roots of φ(v)(z) = 0 over 1 ≤ |v| ≤ order.

    φ(v) = 0 means φ(jv) = 1 for every letter j, so the
    tipset is root-connected at each root. With ``tails`` the
    tip equations φ(v·t̄) = 0 for the same words are added.
    """
    if order < 1:
        raise InputError(f"order must be at least 1, got {order}")
    cfg = get_config()
    tails = [] if tails is None else _check_tails(fam, tails)
    numerators = _Numerators(fam, tails or [FiniteWord((1,))])
    total = sum(fam.n**k for k in range(1, order + 1))
    if total * (1 + len(tails)) > cfg["raw_pair_cap"] or fam.n**order > cfg["disk_budget"]:
        raise BudgetExceeded(f"{total} node words at order {order} exceed the budget")
    pts = _fingerprint_points(cfg["seed"])
    dedupe = _Deduper(cfg["word_pair_cap"])
    tags = []
    count = 0

    with _CloudBuilder(fam, f"M0({fam.name}, m={order})", workers, progress) as builder:
        for level in range(1, order + 1):
            numerators.advance()
            blocks = [(-1, numerators.G)] + [(ti, numerators.tip_rows(ti)) for ti in range(len(tails))]
            for ti, rows in blocks:
                keys, zero = _keys(_evaluate(rows, pts), _evaluate(np.abs(rows), np.abs(pts)))
                picked = dedupe.offer(keys, zero)
                tags.append(np.stack(np.broadcast_arrays(picked, level, ti), axis=-1))
                builder.solve(rows[picked], np.arange(count, count + picked.size))
                count += picked.size
        table = np.concatenate(tags)

        def render(i: int) -> str:
            idx, level, ti = table[i].tolist()
            word = word_at(idx, fam.n, level)
            if ti < 0:
                return f"phi({word})=0"
            return f"phi({EPWord(tuple(word), tuple(tails[ti]))})=0"

        logger.info("m0_root_cloud %s order %d: %d distinct equations", fam.name, order, count)
        return builder.cloud(render)


def _single_cloud(fam: ParametricFamily, coeffs: np.ndarray, label: str) -> RootCloud:
    with _CloudBuilder(fam, label, workers=1) as builder:
        builder.solve(np.atleast_2d(np.asarray(coeffs, dtype=np.complex128)), np.zeros(1, dtype=np.int64))
        return builder.cloud(lambda _: label)


def tip_zero_roots(fam: ParametricFamily, w: EPWord) -> RootCloud:
    """Admissible roots of φ(w)(z) = 0 for a single address."""
    return _single_cloud(fam, phi_ep_symbolic(w, fam).num, f"phi({w})=0")


def relation_roots(fam: ParametricFamily, rel: Relation) -> RootCloud:
    """Admissible parameters where one relation holds."""
    defect = relation_defect(rel, fam)
    if defect.is_zero():
        return RootCloud(label=str(rel))
    return _single_cloud(fam, defect.num, str(rel))


def merge_clouds(clouds: Sequence[RootCloud], label: str = "") -> RootCloud:
    if not clouds:
        return RootCloud(label=label)
    merged = RootCloud(
        np.concatenate([c.points for c in clouds]),
        [s for c in clouds for s in c.sources],
        np.concatenate([c.degrees for c in clouds]),
        np.concatenate([c.residuals for c in clouds]),
        label,
    )
    return dedupe_cloud(merged)
