# ComplexTrees/render/__init__.py

from .image import (
    PALETTE,
    Raster,
    ImageGrid,
    default_viewport,
    tree_segments,
    render_tree,
    tipset_points,
    render_tipset,
    overlay_cloud,
)
from .scan import M2, M0, DISCONNECTED, DOMAIN, SCAN_COLORS, SCAN_TESTS, LabelGrid, scan_grid
from .writers import ppm_bytes, write_image, write_cloud, write_table, write_json

__all__ = [
    "PALETTE",
    "Raster",
    "ImageGrid",
    "default_viewport",
    "tree_segments",
    "render_tree",
    "tipset_points",
    "render_tipset",
    "overlay_cloud",
    "M2",
    "M0",
    "DISCONNECTED",
    "DOMAIN",
    "SCAN_COLORS",
    "SCAN_TESTS",
    "LabelGrid",
    "scan_grid",
    "ppm_bytes",
    "write_image",
    "write_cloud",
    "write_table",
    "write_json",
]
