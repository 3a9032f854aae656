"""Point clouds and Euclidean distance primitives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError(f"a point must be a flat coordinate vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


class PointCloud:
    """An ordered, nonempty set of points in R^N.

    Vertex ids used by every complex built on the cloud are the row indices
    of :attr:`points`, so the order is part of the contract.
    """

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("a point cloud needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        self.points = pts

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, dim={self.dim})"

    def distance_matrix(self) -> np.ndarray:
        return pairwise_distances(self.points)


def as_cloud(obj) -> PointCloud:
    return obj if isinstance(obj, PointCloud) else PointCloud(obj)


def euclidean_distance(a, b) -> float:
    a, b = as_point(a), as_point(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Symmetric Euclidean distance matrix with an exact zero diagonal.

    Entry (i, j) is computed by the same expression as (j, i), so the result
    is bitwise symmetric.
    """
    pts = np.asarray(points, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d


def _directed_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    dist, _ = cKDTree(b).query(a)
    return float(np.max(dist))


def hausdorff_distance(A, B) -> float:
    """Hausdorff distance between two finite point sets."""
    A, B = as_cloud(A), as_cloud(B)
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    return max(_directed_hausdorff(A.points, B.points), _directed_hausdorff(B.points, A.points))


def nearest_sample_point(S, x) -> int:
    """Index of the point of ``S`` closest to ``x``; ties go to the smallest index."""
    S = as_cloud(S)
    x = as_point(x)
    d = np.sqrt(np.sum((S.points - x) ** 2, axis=1))
    # argmin returns the first minimiser, which is the tie-break we want
    return int(np.argmin(d))


def nearest_sample_points(S, X) -> np.ndarray:
    """Vectorised :func:`nearest_sample_point` over the rows of ``X``."""
    S = as_cloud(S)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = np.empty(len(X), dtype=int)
    for lo in range(0, len(X), 512):
        chunk = X[lo:lo + 512]
        d = np.sum((chunk[:, None, :] - S.points[None, :, :]) ** 2, axis=2)
        out[lo:lo + 512] = np.argmin(d, axis=1)
    return out


@dataclass(frozen=True)
class NoiseModel:
    """Bounded noise: every point moves by at most ``magnitude``.

    Directions are uniform on the sphere and radii uniform in
    ``[0, magnitude]``; the draw is fully determined by ``seed``.
    """

    magnitude: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.magnitude >= 0 and np.isfinite(self.magnitude)):
            raise ValueError("noise magnitude must be a finite non-negative number")

    def displace(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if self.magnitude == 0:
            return pts.copy()
        rng = np.random.default_rng(self.seed)
        n, dim = pts.shape
        direction = rng.standard_normal((n, dim))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        direction /= norms
        radius = rng.uniform(0.0, self.magnitude, size=(n, 1))
        step = direction * radius
        # guard against rounding pushing a displacement past the bound
        lengths = np.linalg.norm(step, axis=1, keepdims=True)
        over = lengths > self.magnitude
        if np.any(over):
            step[over[:, 0]] *= self.magnitude / lengths[over[:, 0]]
        return pts + step


def stack(clouds: Iterable) -> PointCloud:
    """Concatenate clouds, preserving order."""
    arrs: Sequence[np.ndarray] = [as_cloud(c).points for c in clouds]
    return PointCloud(np.vstack(arrs))
