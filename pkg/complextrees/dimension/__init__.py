# ComplexTrees/dimension/__init__.py

from .moran import (
    DimensionReport,
    similarity_dimension,
    in_m2,
    post_critically_finite,
    m2_mask,
    alpha_loci_on_ray,
    alpha_locus_on_ray,
)

__all__ = [
    "DimensionReport",
    "similarity_dimension",
    "in_m2",
    "post_critically_finite",
    "m2_mask",
    "alpha_loci_on_ray",
    "alpha_locus_on_ray",
]
