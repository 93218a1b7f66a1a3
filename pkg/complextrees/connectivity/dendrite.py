# ComplexTrees/connectivity/dendrite.py

import logging
from itertools import combinations
from typing import Iterable

import numpy as np

from complextrees.core import Alphabet, Relation, candidate_pairs, check_relation, default_tol, phi_ep

from .certificate import Certificate, CertificateKind
from .disks import DiskCover, disk_cover, intersection_edges, letter_graph_connected, overlap_points
from .unionfind import connected_labels

logger = logging.getLogger(__name__)


def _inconclusive(level: int, detail: str) -> Certificate:
    logger.info("dendrite check inconclusive: %s", detail)
    return Certificate(CertificateKind.INCONCLUSIVE, level=level, detail=detail)


def _cluster_count(points: np.ndarray, eps: float) -> int:
    first, second = candidate_pairs(points, eps)
    near = np.abs(points[first] - points[second]) <= eps
    labels = connected_labels(points.size, first[near], second[near])
    return int(np.unique(labels).size)


def _splits_at(cover: DiskCover, x: complex, eps: float) -> bool:
    """True when removing the disks that meet B(x, eps) leaves at least two components."""
    rest = np.abs(cover.centers - x) > cover.radii + eps
    centers, radii = cover.centers[rest], cover.radii[rest]
    if centers.size < 2:
        return False
    first, second = intersection_edges(centers, radii)
    labels = connected_labels(centers.size, first, second)
    return np.unique(labels).size >= 2


def dendrite_heuristic(
    alphabet: Alphabet, relations: Iterable[Relation], m: int, tol: float = None
) -> Certificate:
    """Semi-decision for a fractal dendrite at cover level m.

    Every localized overlap of two first-level pieces must sit within ε of a
    tip point claimed by the relations, and the cover must split at each of
    those tips. ε is twice the largest disk diameter. A positive answer is
    consistency evidence only.
    """
    relations = list(relations)
    tol = default_tol(tol)
    if not relations:
        return _inconclusive(m, "no relations given")
    failing = [rel for rel in relations if check_relation(rel, alphabet) > tol]
    if failing:
        return _inconclusive(m, f"relation {failing[0]} does not hold")
    if not letter_graph_connected(alphabet.n, relations):
        return _inconclusive(m, "letter graph is disconnected")

    cover = disk_cover(alphabet, m)
    eps = 2.0 * cover.max_diameter
    tips = np.unique(np.array([phi_ep(rel.left, alphabet) for rel in relations]))

    clusters = 0
    for j, k in combinations(range(1, alphabet.n + 1), 2):
        _, _, mids = overlap_points(cover, j, k)
        if not mids.size:
            continue
        gap = np.abs(mids[:, None] - tips[None, :]).min(axis=1)
        if gap.max() > eps:
            far = mids[int(gap.argmax())]
            return _inconclusive(
                m, f"pieces {j} and {k} overlap near {far:.6g}, away from every claimed tip"
            )
        clusters += _cluster_count(mids, eps)

    for x in tips:
        if not _splits_at(cover, x, eps):
            return _inconclusive(m, f"the cover does not split at the tip {x:.6g}")
    return Certificate(
        CertificateKind.CONNECTED,
        level=m,
        detail=f"dendrite-consistent: {clusters} overlap clusters at {tips.size} tip points",
    )
