# ComplexTrees/render/image.py

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from complextrees.config import resolve
from complextrees.core import Alphabet, bounding_radius, first_letters, level_nodes
from complextrees.errors import BudgetExceeded, InputError

logger = logging.getLogger(__name__)

# Colors indexed by letter - 1; letters beyond the table wrap around.
PALETTE = np.array(
    [
        (200, 30, 45),
        (30, 110, 200),
        (40, 160, 70),
        (235, 150, 20),
        (130, 60, 170),
        (20, 170, 170),
        (190, 60, 140),
        (120, 90, 50),
        (90, 90, 90),
    ],
    dtype=np.uint8,
)
WHITE = (255, 255, 255)
TRUNK_COLOR = (60, 40, 20)


@dataclass
class Raster:
    """Pixel geometry over the rectangle lower..upper of the complex plane.

    Pixel (0, 0) is the top-left cell; rows run downward in imaginary part.
    Cells are half-open: [re_min + c·dx, re_min + (c+1)·dx) by
    (im_max − (r+1)·dy, im_max − r·dy].
    """

    width: int
    height: int
    lower: complex
    upper: complex

    def __post_init__(self):
        self.width, self.height = int(self.width), int(self.height)
        self.lower, self.upper = complex(self.lower), complex(self.upper)
        if self.width < 1 or self.height < 1:
            raise InputError(f"raster size must be at least 1x1, got {self.width}x{self.height}")
        if not (self.upper.real > self.lower.real and self.upper.imag > self.lower.imag):
            raise InputError(f"viewport {self.lower}..{self.upper} has no area")

    @property
    def dx(self) -> float:
        return (self.upper.real - self.lower.real) / self.width

    @property
    def dy(self) -> float:
        return (self.upper.imag - self.lower.imag) / self.height

    def pixel_center(self, row, col):
        re = self.lower.real + (np.asarray(col) + 0.5) * self.dx
        im = self.upper.imag - (np.asarray(row) + 0.5) * self.dy
        return re + 1j * im

    def centers(self, rows: Optional[slice] = None) -> np.ndarray:
        """Complex pixel centers with shape (rows, width)."""
        r = np.arange(self.height)[rows if rows is not None else slice(None)]
        return self.pixel_center(r[:, None], np.arange(self.width)[None, :])

    def to_pixel(self, z) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(row, col, inside) of the cells containing z."""
        z = np.asarray(z, dtype=np.complex128)
        with np.errstate(invalid="ignore"):
            col = np.floor((z.real - self.lower.real) / self.dx)
            row = np.floor((self.upper.imag - z.imag) / self.dy)
        inside = (col >= 0) & (col < self.width) & (row >= 0) & (row < self.height)
        col = np.where(inside, col, 0).astype(np.int64)
        row = np.where(inside, row, 0).astype(np.int64)
        return row, col, inside


@dataclass
class ImageGrid(Raster):
    """8-bit RGB image, row-major with shape (height, width, 3)."""

    pixels: Optional[np.ndarray] = None

    def __post_init__(self):
        super().__post_init__()
        if self.pixels is None:
            self.pixels = np.zeros((self.height, self.width, 3), dtype=np.uint8)
        elif self.pixels.shape != (self.height, self.width, 3):
            raise InputError(f"pixel buffer shape {self.pixels.shape} does not match {self.width}x{self.height}")

    @classmethod
    def blank(cls, width: int, height: int, lower: complex, upper: complex, background=WHITE) -> "ImageGrid":
        img = cls(width, height, lower, upper)
        img.pixels[:] = np.asarray(background, dtype=np.uint8)
        return img

    def plot(self, z, colors) -> int:
        """Paint the cells containing z; returns the number of points inside the viewport."""
        z = np.asarray(z, dtype=np.complex128).ravel()
        colors = np.asarray(colors, dtype=np.uint8)
        if colors.ndim == 1:
            colors = np.broadcast_to(colors, (z.size, 3))
        row, col, inside = self.to_pixel(z)
        self.pixels[row[inside], col[inside]] = colors[inside]
        return int(inside.sum())

    def draw_segments(self, starts, ends, colors) -> None:
        """Rasterize segments by sampling each at roughly one point per pixel of length."""
        starts = np.asarray(starts, dtype=np.complex128).ravel()
        ends = np.asarray(ends, dtype=np.complex128).ravel()
        colors = np.asarray(colors, dtype=np.uint8)
        if colors.ndim == 1:
            colors = np.broadcast_to(colors, (starts.size, 3))
        if not starts.size:
            return
        delta = ends - starts
        length = np.hypot(delta.real / self.dx, delta.imag / self.dy)
        counts = np.minimum(np.ceil(length).astype(np.int64), 4 * (self.width + self.height)) + 2
        owner = np.repeat(np.arange(starts.size), counts)
        offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        t = offset / (counts[owner] - 1)
        self.plot(starts[owner] + t * delta[owner], colors[owner])


def default_viewport(alphabet: Alphabet, include_origin: bool = False, margin: float = 0.05) -> Tuple[complex, complex]:
    """Square around the bounding disk |z − 1| ≤ R, widened to show 0 when asked."""
    half = bounding_radius(alphabet) * (1.0 + margin)
    lower, upper = complex(1.0 - half, -half), complex(1.0 + half, half)
    if include_origin and lower.real > -margin * half:
        lower = complex(-margin * half, lower.imag)
    return lower, upper


def tree_segments(
    alphabet: Alphabet, depth: int, budget: int = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Branches φ(v') → φ(v) for every word v with 1 ≤ |v| ≤ depth, with the last letter of v."""
    budget = resolve("segment_budget", budget)
    if depth < 1:
        raise InputError(f"tree depth must be at least 1, got {depth}")
    n = alphabet.n
    total = sum(n**k for k in range(1, depth + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} tree segments exceed the budget of {budget}")
    starts, ends, last = [], [], []
    parents = np.ones(1, dtype=np.complex128)
    for k in range(1, depth + 1):
        nodes, _ = level_nodes(alphabet, k, budget)
        starts.append(np.repeat(parents, n))
        ends.append(nodes)
        last.append(np.tile(np.arange(1, n + 1), n ** (k - 1)))
        parents = nodes
    return np.concatenate(starts), np.concatenate(ends), np.concatenate(last)


def render_tree(
    alphabet: Alphabet,
    depth: int,
    width: int = 512,
    height: int = 512,
    lower: complex = None,
    upper: complex = None,
    trunk: bool = False,
    budget: int = None,
) -> ImageGrid:
    """The complex tree T_A to ``depth``, branches colored by their last letter."""
    starts, ends, last = tree_segments(alphabet, depth, budget)
    if lower is None or upper is None:
        lower, upper = default_viewport(alphabet, include_origin=trunk)
    img = ImageGrid.blank(width, height, lower, upper)
    if trunk:
        img.draw_segments([0.0], [1.0], np.asarray(TRUNK_COLOR, dtype=np.uint8))
    img.draw_segments(starts, ends, PALETTE[(last - 1) % len(PALETTE)])
    logger.debug("render_tree: %d segments at depth %d", starts.size, depth)
    return img


def tipset_points(alphabet: Alphabet, depth: int, budget: int = None) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes φ(v) for all v of length ``depth`` with the first letter of each v."""
    budget = resolve("point_budget", budget)
    if depth < 1:
        raise InputError(f"tipset depth must be at least 1, got {depth}")
    if alphabet.n**depth > budget:
        raise BudgetExceeded(f"{alphabet.n}**{depth} tipset points exceed the budget of {budget}")
    nodes, _ = level_nodes(alphabet, depth, budget)
    return nodes, first_letters(alphabet.n, depth)


def render_tipset(
    alphabet: Alphabet,
    depth: int,
    width: int = 512,
    height: int = 512,
    lower: complex = None,
    upper: complex = None,
    by_piece: bool = True,
    budget: int = None,
) -> ImageGrid:
    """Depth-limited address sample of the tipset F_A, colored by first-level piece."""
    points, first = tipset_points(alphabet, depth, budget)
    if lower is None or upper is None:
        lower, upper = default_viewport(alphabet)
    img = ImageGrid.blank(width, height, lower, upper)
    colors = PALETTE[(first - 1) % len(PALETTE)] if by_piece else np.zeros(3, dtype=np.uint8)
    img.plot(points, colors)
    return img


def overlay_cloud(img: Raster, cloud, color: Sequence[int] = (220, 0, 0)) -> ImageGrid:
    """Paint root-cloud points onto an image (a LabelGrid is converted first)."""
    if not isinstance(img, ImageGrid):
        img = img.to_image()
    img.plot(np.asarray(cloud.points, dtype=np.complex128), np.asarray(color, dtype=np.uint8))
    return img
