"""File formats: CSV point clouds and metrics, JSON documents, barcode text.

Floats are written with ``repr`` so every value reads back bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .geometry import PointCloud


class FormatError(ValueError):
    """A file was readable but its contents are malformed."""


def _num(x: float) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def write_cloud(path, cloud) -> None:
    P = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    with open(path, "w", newline="") as fh:
        for row in P:
            fh.write(",".join(_num(v) for v in row) + "\n")


def read_cloud(path) -> PointCloud:
    """One point per line, comma separated.  Blank lines and ``#`` comments are skipped."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a row of numbers") from None
    if not rows:
        raise FormatError(f"{path}: no points")
    if len({len(r) for r in rows}) != 1:
        raise FormatError(f"{path}: rows have different lengths")
    P = np.array(rows, dtype=float)
    if not np.all(np.isfinite(P)):
        raise FormatError(f"{path}: coordinates must be finite")
    return PointCloud(P)


def write_metric(path, M: np.ndarray) -> None:
    with open(path, "w") as fh:
        for row in np.asarray(M, dtype=float):
            fh.write(",".join(_num(v) for v in row) + "\n")


def read_metric(path) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row:
                continue
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a row of numbers") from None
    if any(len(r) != len(rows) for r in rows):
        raise FormatError(f"{path}: metric must be a square matrix")
    M = np.array(rows, dtype=float).reshape(len(rows), len(rows))
    if np.any(np.isnan(M)):
        raise FormatError(f"{path}: metric entries must be numbers or inf")
    return M


def write_json(path, obj) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True, allow_nan=False)
    Path(path).write_text(text + "\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def write_lines(path, lines) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines))
