# ComplexTrees/render/scan.py

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from complextrees.config import resolve
from complextrees.connectivity import certify_disconnected, escape_many
from complextrees.core import Alphabet
from complextrees.dimension import m2_mask
from complextrees.errors import BudgetExceeded, InputError
from complextrees.family import ParametricFamily

from .image import ImageGrid, Raster

logger = logging.getLogger(__name__)

M2 = 1
M0 = 2
DISCONNECTED = 4
DOMAIN = 8

LABEL_NAMES = {M2: "m2", M0: "m0_not_excluded", DISCONNECTED: "disconnected", DOMAIN: "domain_violation"}
SCAN_TESTS = ("m2", "m0", "disconnect")

# m0 is drawn over disconnected, which is drawn over m2.
SCAN_COLORS = {
    "m0": (0, 0, 0),
    "disconnected": (255, 255, 255),
    "m2": (200, 200, 200),
    "none": (128, 128, 128),
    "domain": (40, 40, 90),
}


@dataclass
class LabelGrid(Raster):
    """Per-pixel bit set of M2, M0, DISCONNECTED and DOMAIN labels."""

    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        super().__post_init__()
        if self.labels is None:
            self.labels = np.zeros((self.height, self.width), dtype=np.uint8)

    def has(self, label: int) -> np.ndarray:
        return (self.labels & label) != 0

    def to_image(self) -> ImageGrid:
        img = ImageGrid(self.width, self.height, self.lower, self.upper)
        img.pixels[:] = SCAN_COLORS["none"]
        img.pixels[self.has(M2)] = SCAN_COLORS["m2"]
        img.pixels[self.has(DISCONNECTED)] = SCAN_COLORS["disconnected"]
        img.pixels[self.has(M0)] = SCAN_COLORS["m0"]
        img.pixels[self.has(DOMAIN)] = SCAN_COLORS["domain"]
        return img

    def summary(self) -> pd.DataFrame:
        total = self.labels.size
        rows = []
        for bit, name in LABEL_NAMES.items():
            count = int(self.has(bit).sum())
            rows.append({"label": name, "pixels": count, "fraction": count / total})
        count = int((self.labels == 0).sum())
        rows.append({"label": "none", "pixels": count, "fraction": count / total})
        return pd.DataFrame(rows, columns=["label", "pixels", "fraction"])


def _check_tests(tests: Iterable[str]) -> frozenset:
    tests = frozenset(t.strip().lower() for t in tests if t.strip())
    unknown = tests - set(SCAN_TESTS)
    if unknown:
        raise InputError(f"unknown scan tests {sorted(unknown)}; choose from {', '.join(SCAN_TESTS)}")
    if not tests:
        raise InputError("scan needs at least one test")
    return tests


def _label_block(
    fam: ParametricFamily,
    z: np.ndarray,
    tests: frozenset,
    max_depth: int,
    frontier_cap: int,
    disconnect_k: int,
) -> np.ndarray:
    labels = np.zeros(z.shape, dtype=np.uint8)
    admissible = fam.admissible_mask(z)
    labels[~admissible] = DOMAIN
    if "m2" in tests:
        labels[m2_mask(fam, z)] |= M2
    if not admissible.any() or not ({"m0", "disconnect"} & tests):
        return labels
    letters = np.moveaxis(fam.letter_values(z[admissible]), 0, -1)
    sub = np.zeros(letters.shape[0], dtype=np.uint8)
    if "m0" in tests:
        batch = escape_many(letters, 0.0, max_depth, frontier_cap)
        m0 = batch.not_excluded
        # Pixels that outgrew the scan cap are decided by the full escape test.
        capped = np.nonzero(batch.low_confidence)[0]
        for i in capped.tolist():
            m0[i] = escape_many(letters[i : i + 1], 0.0, max_depth).not_excluded[0]
        if capped.size:
            logger.debug("rechecked %d capped pixels with the full frontier cap", capped.size)
        sub[m0] |= M0
    if "disconnect" in tests:
        for i, row in enumerate(letters):
            try:
                cert = certify_disconnected(Alphabet(tuple(row)), disconnect_k)
            except (BudgetExceeded, InputError):
                continue
            if cert.is_disconnected:
                sub[i] |= DISCONNECTED
    labels[admissible] |= sub
    return labels


def scan_grid(
    fam: ParametricFamily,
    tests: Iterable[str],
    width: int = 256,
    height: int = 256,
    lower: complex = None,
    upper: complex = None,
    workers: int = None,
    progress: bool = False,
    max_depth: int = None,
    frontier_cap: int = None,
    disconnect_k: int = None,
) -> LabelGrid:
    """Classify every pixel center z of the viewport for the requested tests.

    Rows are labelled in independent blocks, so the result does not depend
    on the worker count. The m0 label agrees with ``member_escape_test`` at
    the scan depth: the batched pass runs with ``scan_frontier_cap`` and
    pixels that outgrow it are rerun with ``escape_frontier_cap``.
    """
    tests = _check_tests(tests)
    max_depth = resolve("scan_max_depth", max_depth)
    frontier_cap = resolve("scan_frontier_cap", frontier_cap)
    disconnect_k = resolve("scan_disconnect_k", disconnect_k)
    workers = resolve("workers", workers)
    block = resolve("scan_block_rows")
    if lower is None or upper is None:
        lower, upper = fam.bounds
    grid = LabelGrid(width, height, lower, upper)
    blocks = [slice(start, min(start + block, grid.height)) for start in range(0, grid.height, block)]

    def work(rows: slice) -> np.ndarray:
        return _label_block(fam, grid.centers(rows), tests, max_depth, frontier_cap, disconnect_k)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = pool.map(work, blocks)
        if progress:
            results = tqdm(results, total=len(blocks), desc=f"scan {fam.name}", unit="block")
        for rows, labels in zip(blocks, results):
            grid.labels[rows] = labels
    logger.info("scan_grid: %s %dx%d tests=%s", fam.name, grid.width, grid.height, ",".join(sorted(tests)))
    return grid
