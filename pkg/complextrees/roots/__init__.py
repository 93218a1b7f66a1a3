# ComplexTrees/roots/__init__.py

from .aberth import RootReport, polynomial_roots, roots_block, roots_many, aberth_batch, cluster_roots
from .clouds import (
    Provenance,
    RootCloud,
    m_root_cloud,
    m0_root_cloud,
    tail_rotations,
    tip_zero_roots,
    relation_roots,
    merge_clouds,
    dedupe_cloud,
)

__all__ = [
    "RootReport",
    "polynomial_roots",
    "roots_block",
    "roots_many",
    "aberth_batch",
    "cluster_roots",
    "Provenance",
    "RootCloud",
    "m_root_cloud",
    "m0_root_cloud",
    "tail_rotations",
    "tip_zero_roots",
    "relation_roots",
    "merge_clouds",
    "dedupe_cloud",
]
