"""The eps-neighbourhood graph of a sample and its shortest-path metric d_eps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .complex import DEFAULT_CAP, SimplicialComplex, rips_complex
from .geometry import as_cloud, nearest_sample_points

INF = math.inf


@dataclass(frozen=True)
class EpsGraph:
    """One-skeleton of Rips_eps(S) with Euclidean edge lengths."""

    n: int
    eps: float
    edges: tuple  # (i, j, weight) with i < j, sorted
    adjacency: tuple  # adjacency[i] = ((j, weight), ...) sorted by j

    def weight_matrix(self) -> np.ndarray:
        W = np.full((self.n, self.n), INF)
        np.fill_diagonal(W, 0.0)
        for i, j, w in self.edges:
            W[i, j] = W[j, i] = w
        return W

    def components(self) -> int:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j, _ in self.edges:
            parent[find(i)] = find(j)
        return len({find(i) for i in range(self.n)})


@dataclass(frozen=True)
class IntrinsicMetric:
    """All-pairs d_eps.  ``matrix`` is symmetrised; ``raw`` holds per-source results."""

    matrix: np.ndarray
    raw: np.ndarray
    predecessors: np.ndarray
    eps: float

    def path(self, i: int, j: int) -> list[int]:
        """Vertices of a shortest path from i to j (empty if disconnected)."""
        if not math.isfinite(self.raw[i, j]):
            return []
        out = [j]
        while out[-1] != i:
            out.append(int(self.predecessors[i, out[-1]]))
        return out[::-1]


def build_eps_graph(S, eps: float) -> EpsGraph:
    """Pairs of sample points at Euclidean distance <= eps."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    P = as_cloud(S).points
    n = len(P)
    # generous radius for the tree, exact test below
    cand = cKDTree(P).query_pairs(eps * (1 + 1e-9), output_type="ndarray")
    edges = []
    if len(cand):
        cand = cand[np.lexsort((cand[:, 1], cand[:, 0]))]
        diff = P[cand[:, 0]] - P[cand[:, 1]]
        w = np.sqrt(np.sum(diff * diff, axis=1))
        keep = w <= eps
        edges = [(int(i), int(j), float(x)) for (i, j), x in zip(cand[keep], w[keep])]
    adj: list[list] = [[] for _ in range(n)]
    for i, j, w in edges:
        adj[i].append((j, w))
        adj[j].append((i, w))
    return EpsGraph(n, float(eps), tuple(edges), tuple(tuple(sorted(a)) for a in adj))


def compute_d_eps(g: EpsGraph) -> IntrinsicMetric:
    """Shortest-path distances in G_eps by Dijkstra from every source."""
    if g.edges:
        i, j, w = (np.array(c) for c in zip(*g.edges))
    else:
        i = j = np.zeros(0, dtype=int)
        w = np.zeros(0)
    # explicit zeros (coincident points) stay edges in a csr matrix built this way
    W = csr_matrix((np.r_[w, w], (np.r_[i, j], np.r_[j, i])), shape=(g.n, g.n))
    raw, pred = dijkstra(W, directed=True, return_predecessors=True)
    pred[np.arange(g.n), np.arange(g.n)] = np.arange(g.n)
    # d(i, j) and d(j, i) sum the same path in opposite orders
    sym = np.minimum(raw, raw.T)
    return IntrinsicMetric(sym, raw, pred, g.eps)


def relaxation_apsp(g: EpsGraph) -> np.ndarray:
    """Dense repeated relaxation D[s, v] <- min(D[s, v], D[s, u] + W[u, v]).

    Sums are accumulated from the source outward, the same association
    Dijkstra uses, so the two agree bit for bit.
    """
    W = g.weight_matrix()
    D = W.copy()
    with np.errstate(invalid="ignore"):
        while True:
            step = np.min(D[:, :, None] + W[None, :, :], axis=1)
            new = np.minimum(D, step)
            if np.array_equal(new, D):
                return D
            D = new


def d_eps_metric(S, eps: float) -> IntrinsicMetric:
    return compute_d_eps(build_eps_graph(S, eps))


def intrinsic_rips(S, m: IntrinsicMetric, alpha: float, dim_cap: int = DEFAULT_CAP,
                   strict: bool = False) -> SimplicialComplex:
    """Rips complex of the sample in the d_eps metric; infinite pairs never share a simplex."""
    if len(as_cloud(S)) != len(m.matrix):
        raise ValueError("metric and sample sizes differ")
    return rips_complex(m.matrix, alpha, dim_cap, strict=strict)


@dataclass(frozen=True)
class PathCoveringReport:
    trials: int
    worst_ratio: float
    worst_pair: tuple
    max_hop: float
    violations: int
    flagged: int
    eps: float

    @property
    def passed(self) -> bool:
        return self.violations == 0 and self.max_hop < self.eps


def path_covering_check(spec, S, eps: float, trials: int = 500, seed: int = 0,
                        dh_bound: float | None = None, slack: float = 0.0,
                        metric: IntrinsicMetric | None = None) -> PathCoveringReport:
    """Compare d_eps between nearest sample points with the geodesic distance.

    For random on-shape pairs (x, y), with a and b the sample points nearest
    to x and y, checks d_eps(a, b) < 3 d_L(x, y) + slack * eps and that every
    hop of the shortest path is shorter than eps.  Ratios above 2.99 are
    counted as flagged.
    """
    from .shapes import random_locations

    if dh_bound is None:
        raise ValueError("a certified Hausdorff bound of the sample is required")
    if not dh_bound < eps / 3:
        raise ValueError(f"precondition dH < eps/3 fails: {dh_bound} >= {eps / 3}")
    S = as_cloud(S)
    if metric is None:
        metric = d_eps_metric(S, eps)
    pts, locs = random_locations(spec, 2 * trials, seed)
    g = spec.graph
    near = nearest_sample_points(S, pts)
    worst, worst_pair, max_hop = 0.0, (), 0.0
    violations = flagged = 0
    for k in range(trials):
        x, y = 2 * k, 2 * k + 1
        a, b = int(near[x]), int(near[y])
        dl = g.distance_between(locs[x], locs[y])
        de = float(metric.matrix[a, b])
        if not de < 3 * dl + slack * eps:
            violations += 1
        if a != b:
            path = metric.path(a, b)
            for u, v in zip(path, path[1:]):
                max_hop = max(max_hop, float(np.linalg.norm(S.points[u] - S.points[v])))
        if dl > 0:
            ratio = de / dl
            if ratio > 2.99:
                flagged += 1
            if ratio > worst:
                worst, worst_pair = ratio, (a, b)
    return PathCoveringReport(trials, worst, worst_pair, max_hop, violations, flagged, float(eps))


def metric_to_csv_rows(M: np.ndarray) -> list[str]:
    return [",".join("inf" if not math.isfinite(v) else repr(float(v)) for v in row) for row in M]
