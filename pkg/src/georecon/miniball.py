"""Smallest enclosing balls in R^N (Welzl's move-to-front scheme)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    def contains(self, p, slack: float = 1e-9) -> bool:
        return float(np.linalg.norm(np.asarray(p, dtype=float) - self.center)) <= self.radius + slack


def circumball(P: np.ndarray) -> Ball | None:
    """Smallest ball with all of ``P`` on its boundary, inside their affine hull.

    Returns None when the points are affinely dependent.
    """
    P = np.asarray(P, dtype=float)
    p0 = P[0]
    if len(P) == 1:
        return Ball(p0.copy(), 0.0)
    A = P[1:] - p0
    G = A @ A.T
    rhs = 0.5 * np.diag(G)
    try:
        lam = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(lam)):
        return None
    # a near-singular Gram matrix gives a huge, meaningless circumcentre
    if np.linalg.cond(G) > 1e12:
        return None
    offset = lam @ A
    center = p0 + offset
    radius = float(max(np.linalg.norm(P - center, axis=1)))
    return Ball(center, radius)


def _inside(p: np.ndarray, ball: Ball) -> bool:
    # relative slack keeps boundary points from re-entering the support set
    tol = 1e-12 * max(1.0, ball.radius)
    return float(np.linalg.norm(p - ball.center)) <= ball.radius + tol


def _support_ball(P: np.ndarray, support: list[int]) -> Ball:
    if not support:
        return Ball(np.full(P.shape[1], np.nan), -0.0)
    ball = circumball(P[support])
    if ball is not None:
        return ball
    # degenerate support from rounding: take the best valid sub-support
    return _brute_force(P[support])


def _mtf(P: np.ndarray, order: list[int], n: int, support: list[int]) -> Ball | None:
    ball = _support_ball(P, support) if support else None
    if len(support) == P.shape[1] + 1:
        return ball
    for pos in range(n):
        i = order[pos]
        if ball is None or not _inside(P[i], ball):
            ball = _mtf(P, order, pos, support + [i])
            # move to front so later passes see it early
            order.insert(0, order.pop(pos))
    return ball


def minimal_enclosing_ball(points) -> Ball:
    """The unique smallest closed ball containing every point."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[0] == 0 or P.size == 0:
        raise ValueError("minimal_enclosing_ball needs at least one point")
    if P.shape[0] == 1:
        return Ball(P[0].copy(), 0.0)
    if P.shape[0] == 2:
        center = 0.5 * (P[0] + P[1])
        return Ball(center, 0.5 * float(np.linalg.norm(P[0] - P[1])))
    order = list(range(len(P)))
    ball = _mtf(P, order, len(P), [])
    assert ball is not None
    return ball


def _brute_force(P: np.ndarray) -> Ball:
    best: Ball | None = None
    for k in range(1, min(len(P), P.shape[1] + 1) + 1):
        for idx in combinations(range(len(P)), k):
            b = circumball(P[list(idx)])
            if b is None:
                continue
            if best is not None and b.radius >= best.radius:
                continue
            if np.all(np.linalg.norm(P - b.center, axis=1) <= b.radius * (1 + 1e-12) + 1e-15):
                best = b
    assert best is not None
    return best


def meb_radius(points) -> float:
    return minimal_enclosing_ball(points).radius
