"""Geometric reconstruction of planar embedded graphs from a noisy sample.

The output region is the shadow (union of convex hulls) of the Rips complex
of the sample in the d_eps metric at scale 5 * delta * eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import Voronoi, cKDTree

from .complex import SimplicialComplex, _bits, _upper_neighbours
from .geometry import as_cloud
from .homology import sparse_gf2_rank
from .intrinsic import IntrinsicMetric, d_eps_metric
from .shapes import SamplingCheck, ShapeSpec, dense_reference, verify_sampling_condition


@dataclass
class ShadowComplex:
    points: np.ndarray
    segments: np.ndarray  # (m, 2) vertex ids, i < j, lexicographic
    triangles: np.ndarray  # (t, 3) vertex ids, i < j < k, lexicographic
    eps: float
    delta: float
    metric: IntrinsicMetric | None = field(default=None, repr=False)

    @property
    def threshold(self) -> float:
        return 5 * self.delta * self.eps

    @property
    def scales(self) -> tuple[float, float]:
        return self.eps, self.threshold

    def as_complex(self) -> SimplicialComplex:
        simp = [(i,) for i in range(len(self.points))]
        simp += [tuple(s) for s in self.segments.tolist()]
        simp += [tuple(t) for t in self.triangles.tolist()]
        return SimplicialComplex(simp, 2)

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "segments": self.segments.tolist(),
                "triangles": self.triangles.tolist(), "eps": self.eps, "delta": self.delta}

    @classmethod
    def from_dict(cls, d: dict) -> "ShadowComplex":
        return cls(np.asarray(d["points"], dtype=float),
                   np.asarray(d["segments"], dtype=int).reshape(-1, 2),
                   np.asarray(d["triangles"], dtype=int).reshape(-1, 3),
                   float(d["eps"]), float(d["delta"]))


def reconstruct_graph(S, eps: float, delta: float, metric: IntrinsicMetric | None = None) -> ShadowComplex:
    """Cells of the shadow: every vertex, and every pair and triple whose
    pairwise d_eps distances are all below 5 * delta * eps."""
    P = as_cloud(S)
    if P.dim != 2:
        raise ValueError("graph reconstruction needs a planar sample")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not delta >= 1:
        raise ValueError("delta must be >= 1")
    m = metric if metric is not None else d_eps_metric(P, eps)
    thr = 5 * delta * eps
    adj = m.matrix < thr
    np.fill_diagonal(adj, False)
    up = _upper_neighbours(adj)
    segs, tris = [], []
    for i in range(len(P)):
        for j in _bits(up[i]):
            segs.append((i, j))
            for k in _bits(up[i] & up[j]):
                tris.append((i, j, k))
    segs_a = np.array(sorted(segs), dtype=int).reshape(-1, 2)
    tris_a = np.array(sorted(tris), dtype=int).reshape(-1, 3)
    return ShadowComplex(P.points.copy(), segs_a, tris_a, float(eps), float(delta), m)


def shadow_betti(S, eps: float, delta: float, shadow: ShadowComplex | None = None) -> tuple[int, int]:
    """(beta_0, beta_1) of the shadow's simplicial complex.

    beta_1 = #edges - (#vertices - beta_0) - rank d_2.  Edges and triangles
    are ordered by d_eps diameter before reducing d_2, which keeps almost
    every column an immediate pivot.
    """
    if shadow is None:
        shadow = reconstruct_graph(S, eps, delta)
    n = len(shadow.points)
    segs, tris = shadow.segments, shadow.triangles
    E = len(segs)
    if E:
        G = csr_matrix((np.ones(E), (segs[:, 0], segs[:, 1])), shape=(n, n))
        b0 = int(connected_components(G, directed=False)[0])
    else:
        b0 = n
    if not len(tris):
        return b0, E - (n - b0)
    M = shadow.metric.matrix if shadow.metric is not None else d_eps_metric(shadow.points, shadow.eps).matrix
    ev = M[segs[:, 0], segs[:, 1]]
    eorder = np.lexsort((segs[:, 1], segs[:, 0], ev))
    rank_of = np.empty(E, dtype=np.int64)
    rank_of[eorder] = np.arange(E)
    keys = segs[:, 0].astype(np.int64) * n + segs[:, 1]
    ksort = np.argsort(keys)

    def edge_rank(i, j):
        pos = ksort[np.searchsorted(keys, i.astype(np.int64) * n + j, sorter=ksort)]
        return rank_of[pos]

    i, j, k = tris[:, 0], tris[:, 1], tris[:, 2]
    cols = np.stack([edge_rank(i, j), edge_rank(i, k), edge_rank(j, k)], axis=1)
    tv = cols.max(axis=1)
    tri_order = np.lexsort((k, j, i, tv))
    r2 = sparse_gf2_rank(cols[tri_order].tolist())
    return b0, E - (n - b0) - r2


# --------------------------------------------------------------------------
# Hausdorff distance between the shadow region and the true graph


def _point_segment_dist(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = b - a
    dd = np.einsum("ij,ij->i", d, d)
    u = np.einsum("ij,ij->i", p - a, d) / np.where(dd > 0, dd, 1.0)
    u = np.clip(u, 0.0, 1.0)
    q = a + u[:, None] * d
    return np.linalg.norm(p - q, axis=1)


def _in_triangles(p: np.ndarray, A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Closed point-in-triangle test, row by row."""
    def cross(o, x, y):
        return (x[:, 0] - o[:, 0]) * (y[:, 1] - o[:, 1]) - (x[:, 1] - o[:, 1]) * (y[:, 0] - o[:, 0])

    p = np.broadcast_to(p, A.shape)
    d1, d2, d3 = cross(A, B, p), cross(B, C, p), cross(C, A, p)
    neg = (d1 < 0) | (d2 < 0) | (d3 < 0)
    pos = (d1 > 0) | (d2 > 0) | (d3 > 0)
    return ~(neg & pos)


class _CellIndex:
    """Cells grouped by their lowest vertex, for point-in-shadow queries."""

    def __init__(self, shadow: ShadowComplex):
        P = self.P = shadow.points
        self.tree = cKDTree(P)
        self.segs, self.tris = shadow.segments, shadow.triangles
        self.reach = float(np.max(np.linalg.norm(P[self.segs[:, 0]] - P[self.segs[:, 1]], axis=1))) \
            if len(self.segs) else 0.0
        n = len(P)
        # sorted lexicographically, each lowest vertex owns a slice
        self.segs = self.segs[np.lexsort(self.segs.T[::-1])] if len(self.segs) else self.segs
        self.tris = self.tris[np.lexsort(self.tris.T[::-1])] if len(self.tris) else self.tris
        self.tri_start = np.searchsorted(self.tris[:, 0], np.arange(n + 1))
        self.seg_start = np.searchsorted(self.segs[:, 0], np.arange(n + 1))
        self.A, self.B, self.C = (P[self.tris[:, k]] for k in range(3))

    def _ids(self, start: np.ndarray, verts) -> np.ndarray:
        if not len(verts):
            return np.zeros(0, dtype=int)
        v = np.asarray(verts, dtype=int)
        lo, hi = start[v], start[v + 1]
        return np.concatenate([np.arange(a, b) for a, b in zip(lo, hi)])

    def inside(self, x: np.ndarray, near=None) -> bool:
        # a triangle containing x has every vertex within ``reach`` of x
        if near is None:
            near = self.tree.query_ball_point(x, self.reach)
        tid = self._ids(self.tri_start, near)
        if not len(tid):
            return False
        return bool(np.any(_in_triangles(x[None, :], self.A[tid], self.B[tid], self.C[tid])))

    def distance(self, x: np.ndarray, r0: float) -> float:
        """Distance from x to the shadow, given its distance r0 to the nearest vertex."""
        near = self.tree.query_ball_point(x, r0 + self.reach)
        if self.inside(x, near):
            return 0.0
        sid = self._ids(self.seg_start, near)
        if not len(sid):
            return r0
        S = self.segs[sid]
        d = _point_segment_dist(np.broadcast_to(x, (len(S), 2)), self.P[S[:, 0]], self.P[S[:, 1]])
        return min(r0, float(d.min()))


def _sup_on_segments(f, A: np.ndarray, B: np.ndarray, tol: float, best: float) -> float:
    """sup of a 1-Lipschitz ``f`` over segments [A_i, B_i], to within ``tol``.

    Bisection with pruning: an interval of half-length r centred at m is
    dropped once f(m) + r <= best + tol, and not split below r = tol.
    """
    while len(A):
        m = 0.5 * (A + B)
        r = 0.5 * np.linalg.norm(B - A, axis=1)
        fm = f(m)
        best = max(best, float(fm.max()))
        keep = (fm + r > best + tol) & (r > tol)
        A, B, m = A[keep], B[keep], m[keep]
        A, B = np.concatenate([A, m]), np.concatenate([m, B])
    return best


def _shadow_to_graph(shadow: ShadowComplex, Q: np.ndarray, tol: float, index: _CellIndex) -> float:
    """sup over the shadow region of the distance to the point set Q, within ``tol``.

    On a convex cell the distance to Q peaks at a cell vertex, where a cell
    edge crosses a Voronoi edge of Q, or at a Voronoi vertex inside the cell.
    Every triangle edge is a shadow segment, so searching vertices, segments
    and interior Voronoi vertices covers all three.
    """
    qtree = cKDTree(Q)

    def f(x):
        return qtree.query(x)[0]

    P = shadow.points
    best = float(f(P).max())
    if len(shadow.segments):
        best = _sup_on_segments(f, P[shadow.segments[:, 0]], P[shadow.segments[:, 1]], tol, best)
    if len(shadow.triangles) and len(Q) >= 4:
        W = Voronoi(Q).vertices
        W = W[np.all(np.isfinite(W), axis=1)]
        val = f(W)
        dS, _ = index.tree.query(W)
        cand = (val > best) & (dS <= index.reach / math.sqrt(3))
        W, val = W[cand], val[cand]
        for k in np.argsort(-val, kind="stable"):
            if index.inside(W[k]):
                best = max(best, float(val[k]))
                break
    return best


def shadow_hausdorff(shadow: ShadowComplex, spec: ShapeSpec, resolution: float) -> float:
    """Hausdorff distance between the shadow region and the true graph, within ``resolution``.

    The graph is replaced by a reference sample Q with arc gaps at most h,
    which moves distances to it by at most h/2.  The supremum over the shadow
    is then located to within h/4, and distances from Q to the shadow are exact.
    """
    h = float(resolution)
    if not h > 0:
        raise ValueError("resolution must be positive")
    Q = dense_reference(spec, h)
    index = _CellIndex(shadow)
    forward = _shadow_to_graph(shadow, Q, 0.25 * h, index)
    r0, _ = index.tree.query(Q)
    # the distance from q to the shadow is at most r0, so only large r0 can matter
    todo = np.flatnonzero(r0 > forward)
    back = max((index.distance(Q[k], float(r0[k])) for k in todo), default=0.0)
    return max(forward, back)


# --------------------------------------------------------------------------


# --------------------------------------------------------------------------
# end-to-end run and report


@dataclass
class ReconstructionReport:
    beta0: int
    beta1: int
    eps: float
    delta: float
    threshold: float
    hausdorff_bound: float
    hausdorff_estimate: float | None = None
    resolution: float | None = None
    expected_betti: tuple | None = None
    check: SamplingCheck | None = None
    n_points: int = 0
    n_segments: int = 0
    n_triangles: int = 0

    @property
    def betti_ok(self) -> bool | None:
        if self.expected_betti is None:
            return None
        return (self.beta0, self.beta1) == tuple(self.expected_betti)

    @property
    def hausdorff_ok(self) -> bool | None:
        if self.hausdorff_estimate is None:
            return None
        return self.hausdorff_estimate < self.hausdorff_bound

    def to_dict(self) -> dict:
        d = {
            "beta0": self.beta0, "beta1": self.beta1, "eps": self.eps, "delta": self.delta,
            "scales": [self.eps, self.threshold], "hausdorff_bound": self.hausdorff_bound,
            "hausdorff_estimate": self.hausdorff_estimate, "resolution": self.resolution,
            "n_points": self.n_points, "n_segments": self.n_segments, "n_triangles": self.n_triangles,
        }
        if self.expected_betti is not None:
            d["expected_betti"] = list(self.expected_betti)
            d["betti_ok"] = self.betti_ok
        if self.hausdorff_estimate is not None:
            d["hausdorff_ok"] = self.hausdorff_ok
        if self.check is not None:
            d["sampling_condition"] = {"passed": self.check.passed, "dh": self.check.dh,
                                       "eps/3": self.check.scaled_eps, "bound": self.check.bound,
                                       "failure": self.check.failure}
        return d


def run_reconstruction(S, eps: float, delta: float, spec: ShapeSpec | None = None,
                       dh: float | None = None, resolution: float | None = None
                       ) -> tuple[ShadowComplex, ReconstructionReport]:
    """Build the shadow, count its holes, and check both against the true shape when it is known."""
    check = None
    if spec is not None and dh is not None:
        check = verify_sampling_condition(spec, dh, eps, "graph")
    shadow = reconstruct_graph(S, eps, delta)
    b0, b1 = shadow_betti(S, eps, delta, shadow)
    report = ReconstructionReport(
        b0, b1, float(eps), float(delta), shadow.threshold, (5 * delta + 1 / 3) * eps,
        check=check, n_points=len(shadow.points), n_segments=len(shadow.segments),
        n_triangles=len(shadow.triangles))
    if spec is not None:
        h = resolution if resolution is not None else eps / 10
        report.hausdorff_estimate = shadow_hausdorff(shadow, spec, h)
        report.resolution = h
        report.expected_betti = spec.betti()
    return shadow, report


# --------------------------------------------------------------------------
# SVG


def _svg_number(x: float) -> str:
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def export_svg(shadow: ShadowComplex, spec: ShapeSpec | None = None, path=None,
               size: int = 600, margin: float = 20.0) -> str:
    """Render the shadow: triangles filled, segments stroked, the true shape on top."""
    P = shadow.points
    ref = dense_reference(spec, spec.length / 2000) if spec is not None else np.zeros((0, 2))
    allpts = np.vstack([P, ref]) if len(ref) else P
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    scale = (size - 2 * margin) / span
    height = int(math.ceil((hi[1] - lo[1]) * scale + 2 * margin))

    def xy(p):
        # flip y so the picture has the usual orientation
        return _svg_number((p[0] - lo[0]) * scale + margin), _svg_number((hi[1] - p[1]) * scale + margin)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
           f'viewBox="0 0 {size} {height}">']
    out.append('<g fill="#7fc97f" fill-opacity="0.5" stroke="none">')
    for t in shadow.triangles.tolist():
        pts = " ".join(",".join(xy(P[v])) for v in t)
        out.append(f'<polygon points="{pts}"/>')
    out.append("</g>")
    out.append('<g stroke="#1b7837" stroke-width="0.6" stroke-opacity="0.6">')
    for i, j in shadow.segments.tolist():
        (x1, y1), (x2, y2) = xy(P[i]), xy(P[j])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    if spec is not None:
        g = spec.graph
        out.append('<g fill="none" stroke="#2166ac" stroke-width="1.5">')
        for k, e in enumerate(g.edges):
            offs = np.linspace(0.0, e.length, max(2, int(e.length / spec.length * 2000)))
            pts = " ".join(",".join(xy(g.position(k, o))) for o in offs)
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
    out.append('<g fill="#333333">')
    for p in P:
        x, y = xy(p)
        out.append(f'<circle cx="{x}" cy="{y}" r="1.5"/>')
    out.append("</g>")
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
