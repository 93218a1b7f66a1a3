# ComplexTrees/render/writers.py

import json
import logging
import os
from pathlib import Path
from typing import Union

import numpy as np

from complextrees.errors import OutputError

from .image import ImageGrid

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def ppm_bytes(img: ImageGrid) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes()


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create directory for {path}: {exc}") from exc
    return path


def write_image(img: ImageGrid, path: PathLike) -> Path:
    """Binary PPM: header ``P6\\n<w> <h>\\n255\\n`` then RGB bytes row by row."""
    path = _prepare(path)
    try:
        path.write_bytes(ppm_bytes(img))
    except OSError as exc:
        raise OutputError(f"cannot write image {path}: {exc}") from exc
    logger.info("wrote %dx%d image to %s", img.width, img.height, path)
    return path


def write_cloud(cloud, path: PathLike) -> Path:
    """RootCloud as CSV (re, im, degree, residual, provenance) or, for a .json path, JSON records."""
    path = _prepare(path)
    frame = cloud.to_frame()
    try:
        if path.suffix.lower() == ".json":
            payload = {"label": cloud.label, "points": frame.to_dict(orient="records")}
            path.write_text(json.dumps(payload, indent=2))
        else:
            frame.to_csv(path, index=False)
    except OSError as exc:
        raise OutputError(f"cannot write cloud {path}: {exc}") from exc
    logger.info("wrote %d cloud points to %s", len(cloud), path)
    return path


def write_table(frame, path: PathLike) -> Path:
    path = _prepare(path)
    try:
        frame.to_csv(path, index=False)
    except OSError as exc:
        raise OutputError(f"cannot write table {path}: {exc}") from exc
    return path


def write_json(payload, path: PathLike) -> Path:
    """JSON document (certificates, summaries) with two-space indentation."""
    path = _prepare(path)
    try:
        path.write_text(json.dumps(payload, indent=2))
    except (OSError, TypeError, ValueError) as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
    logger.info("wrote %s", path)
    return path
