# ComplexTrees/connectivity/verdict.py

import logging
from typing import Iterable

from complextrees.core import Alphabet, Relation, check_relation, default_tol

from .certificate import Certificate, CertificateKind
from .disks import certify_disconnected, letter_graph_connected

logger = logging.getLogger(__name__)


def connectivity_verdict(
    alphabet: Alphabet, relations: Iterable[Relation], max_k: int = 12, tol: float = None
) -> Certificate:
    """Connected when every relation holds and links all letters; otherwise try the disk cover."""
    relations = list(relations)
    tol = default_tol(tol)
    defects = {rel: check_relation(rel, alphabet) for rel in relations}
    failing = [rel for rel, d in defects.items() if d > tol]
    if relations and not failing and letter_graph_connected(alphabet.n, relations):
        return Certificate(
            CertificateKind.CONNECTED,
            detail=f"{len(relations)} relations verified; letter graph connected",
        )
    if failing:
        logger.info("%d of %d relations fail at this alphabet", len(failing), len(relations))
    cert = certify_disconnected(alphabet, max_k)
    if cert.kind is CertificateKind.INCONCLUSIVE and failing:
        cert.detail = f"relation {failing[0]} fails by {defects[failing[0]]:.3g}; " + cert.detail
    return cert
