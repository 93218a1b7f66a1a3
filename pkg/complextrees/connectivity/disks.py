# ComplexTrees/connectivity/disks.py

import logging
from dataclasses import dataclass
from typing import Annotated, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from complextrees.config import resolve
from complextrees.core import (
    Alphabet,
    FiniteWord,
    Relation,
    bounding_radius,
    candidate_pairs,
    first_letters,
    level_nodes,
    word_at,
)
from complextrees.errors import InputError

from .certificate import Certificate, CertificateKind
from .unionfind import UnionFind, connected_labels

logger = logging.getLogger(__name__)

# Pair blocks in the exhaustive partition check stay near this many elements.
_PAIR_BLOCK = 4_000_000


@dataclass
class DiskCover:
    """The bounding set D^k: disks f_v(D) for every word v of length k.

    Disk i belongs to the i-th word in lexicographic order; its center is
    φ(v) and its radius |π(v)|·R.
    """

    level: int
    centers: np.ndarray
    radii: np.ndarray
    alphabet: Alphabet

    def __len__(self) -> int:
        return int(self.centers.size)

    def word(self, i: int) -> FiniteWord:
        return word_at(i, self.alphabet.n, self.level)

    @property
    def letters(self) -> np.ndarray:
        """First letter of each disk's word."""
        return first_letters(self.alphabet.n, self.level)

    @property
    def max_diameter(self) -> float:
        return 2.0 * float(self.radii.max())

    def disks(self) -> Iterator[Tuple[complex, float, FiniteWord]]:
        for i in range(len(self)):
            yield complex(self.centers[i]), float(self.radii[i]), self.word(i)

    def block(self, j: int) -> slice:
        """Disk indices whose word starts with letter j."""
        size = self.alphabet.n ** (self.level - 1)
        return slice((j - 1) * size, j * size)


def disk_cover(
    alphabet: Alphabet,
    k: Annotated[int, "cover level, at least 1"],
    budget: int = None,
) -> DiskCover:
    if k < 1:
        raise InputError(f"disk cover level must be at least 1, got {k}")
    nodes, prods = level_nodes(alphabet, k, resolve("disk_budget", budget))
    radii = np.abs(prods) * bounding_radius(alphabet)
    return DiskCover(level=k, centers=nodes, radii=radii, alphabet=alphabet)


def intersection_edges(centers: np.ndarray, radii: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Pairs of disks whose closed disks meet, found through a spatial hash."""
    if centers.size < 2:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    first, second = candidate_pairs(centers, 2.0 * float(radii.max()))
    meet = np.abs(centers[first] - centers[second]) <= radii[first] + radii[second]
    return first[meet], second[meet]


def _letter_groups(n: int, labels: np.ndarray, letters: np.ndarray) -> List[List[int]]:
    """Letters 1..n grouped by the disk components they share."""
    keys = np.unique(labels * n + (letters - 1))
    comp, letter = np.divmod(keys, n)
    same = comp[1:] == comp[:-1]
    groups = UnionFind(n)
    groups.union_pairs(zip(letter[:-1][same].tolist(), letter[1:][same].tolist()))
    return [[j + 1 for j in g] for g in groups.groups()]


def certify_disconnected(
    alphabet: Alphabet,
    max_k: Annotated[int, "largest cover level tried"],
    budget: int = None,
) -> Certificate:
    """Refine D^k for k = 1..max_k until the first-level pieces split apart.

    Every disk holds a nonempty piece of the tipset, so two letter groups
    whose disk unions never meet certify that F_A is disconnected.
    """
    if max_k < 1:
        raise InputError(f"max_k must be at least 1, got {max_k}")
    for k in range(1, max_k + 1):
        cover = disk_cover(alphabet, k, budget)
        first, second = intersection_edges(cover.centers, cover.radii)
        labels = connected_labels(len(cover), first, second)
        partition = _letter_groups(alphabet.n, labels, cover.letters)
        logger.debug("certify_disconnected: level %d, %d disks, %d letter groups", k, len(cover), len(partition))
        if len(partition) >= 2:
            return Certificate(CertificateKind.DISCONNECTED, level=k, partition=partition)
    return Certificate(
        CertificateKind.INCONCLUSIVE,
        level=max_k,
        detail=f"first-level pieces remain linked up to level {max_k}",
    )


def verify_partition(alphabet: Alphabet, level: int, partition: Sequence[Sequence[int]]) -> float:
    """Smallest gap between disks of different groups at ``level``, by exhaustive scan.

    A positive value confirms a Disconnected certificate without the spatial hash.
    """
    flat = sorted(j for g in partition for j in g)
    if flat != list(range(1, alphabet.n + 1)) or len(partition) < 2:
        raise InputError(f"partition {partition} must split letters 1..{alphabet.n} into at least two groups")
    group_of = np.zeros(alphabet.n + 1, dtype=np.int64)
    for g, members in enumerate(partition):
        group_of[list(members)] = g
    cover = disk_cover(alphabet, level)
    groups = group_of[cover.letters]
    size = len(cover)
    step = max(1, _PAIR_BLOCK // size)
    gap = np.inf
    for start in range(0, size, step):
        rows = slice(start, start + step)
        dist = np.abs(cover.centers[rows, None] - cover.centers[None, :])
        dist -= cover.radii[rows, None] + cover.radii[None, :]
        across = groups[rows, None] != groups[None, :]
        if across.any():
            gap = min(gap, float(dist[across].min()))
    return gap


def letter_graph_connected(n: int, relations: Iterable[Relation]) -> bool:
    """Connectivity of the letter graph with an edge (a_1, b_1) per relation."""
    graph = UnionFind(n)
    for rel in relations:
        a, b = rel.letters
        if max(a, b) > n:
            raise InputError(f"relation {rel} uses a letter beyond {n}")
        graph.union(a - 1, b - 1)
    return graph.count() == 1


def overlap_points(
    cover: DiskCover, j: int, k: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Disk indices (v, w) with v_1 = j, w_1 = k whose disks meet, and a point of each lens."""
    n = cover.alphabet.n
    if j == k or not (1 <= j <= n and 1 <= k <= n):
        raise InputError(f"overlap needs two distinct letters in 1..{n}, got {j} and {k}")
    left = np.arange(len(cover))[cover.block(j)]
    right = np.arange(len(cover))[cover.block(k)]
    index = np.concatenate([left, right])
    first, second = intersection_edges(cover.centers[index], cover.radii[index])
    first, second = index[first], index[second]
    swap = cover.letters[first] == k
    first, second = np.where(swap, second, first), np.where(swap, first, second)
    cross = (cover.letters[first] == j) & (cover.letters[second] == k)
    first, second = first[cross], second[cross]
    order = np.lexsort((second, first))
    first, second = first[order], second[order]
    ca, cb = cover.centers[first], cover.centers[second]
    ra, rb = cover.radii[first], cover.radii[second]
    mids = ca + (cb - ca) * (ra / (ra + rb))
    return first, second, mids


def overlap_localization(
    alphabet: Alphabet, j: int, k: int, m: int, budget: int = None
) -> List[Tuple[FiniteWord, FiniteWord, complex]]:
    """Level-m disk pairs localizing F_{jA} ∩ F_{kA}; empty output certifies the pieces are disjoint."""
    cover = disk_cover(alphabet, m, budget)
    first, second, mids = overlap_points(cover, j, k)
    return [
        (cover.word(a), cover.word(b), complex(x))
        for a, b, x in zip(first.tolist(), second.tolist(), mids.tolist())
    ]
