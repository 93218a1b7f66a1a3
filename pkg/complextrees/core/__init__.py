# ComplexTrees/core/__init__.py

from .words import FiniteWord, EPWord, Relation
from .alphabet import (
    Alphabet,
    phi,
    phi_finite,
    phi_ep,
    phi_partial,
    letter_product,
    bounding_radius,
    level_nodes,
    word_at,
    first_letters,
    default_tol,
)
from .similarity import Similarity, similarity_of, neighbor_map
from .dynamics import (
    shift,
    shift_orbit,
    post_critical_set,
    sorted_words,
    check_relation,
    exact_piece_overlap,
    children_overlap,
    observed_relations,
)
from .grid import CellIndex, candidate_pairs, hash_columns

__all__ = [
    "FiniteWord",
    "EPWord",
    "Relation",
    "Alphabet",
    "phi",
    "phi_finite",
    "phi_ep",
    "phi_partial",
    "letter_product",
    "bounding_radius",
    "level_nodes",
    "word_at",
    "first_letters",
    "default_tol",
    "Similarity",
    "similarity_of",
    "neighbor_map",
    "shift",
    "shift_orbit",
    "post_critical_set",
    "sorted_words",
    "check_relation",
    "exact_piece_overlap",
    "children_overlap",
    "observed_relations",
    "candidate_pairs",
    "CellIndex",
    "hash_columns",
]
