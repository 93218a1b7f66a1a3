# ComplexTrees/connectivity/__init__.py

from .unionfind import UnionFind, connected_labels
from .certificate import Certificate, CertificateKind
from .disks import (
    DiskCover,
    disk_cover,
    intersection_edges,
    certify_disconnected,
    verify_partition,
    letter_graph_connected,
    overlap_points,
    overlap_localization,
)
from .escape import EscapeBatch, escape_many, member_escape_test, wolfram_membership
from .dendrite import dendrite_heuristic
from .verdict import connectivity_verdict

__all__ = [
    "UnionFind",
    "connected_labels",
    "Certificate",
    "CertificateKind",
    "DiskCover",
    "disk_cover",
    "intersection_edges",
    "certify_disconnected",
    "verify_partition",
    "letter_graph_connected",
    "overlap_points",
    "overlap_localization",
    "EscapeBatch",
    "escape_many",
    "member_escape_test",
    "wolfram_membership",
    "dendrite_heuristic",
    "connectivity_verdict",
]
