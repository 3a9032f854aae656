"""Vietoris-Rips and Cech complexes and their filtrations.

Conventions (fixed everywhere in the package):

* Rips scale is a diameter with a closed test: a simplex is in Rips(alpha)
  when every pairwise distance is ``<= alpha``.
* Cech scale is a ball radius with an open test: a simplex is in
  Cech(alpha) when the smallest enclosing ball of its vertices has radius
  ``< alpha``.

Simplices are sorted tuples of vertex ids.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .geometry import as_cloud
from .miniball import meb_radius

Simplex = tuple

DEFAULT_CAP = 2


def check_metric(M, tol: float = 1e-9, triangle: bool = False) -> np.ndarray:
    """Validate a distance matrix (symmetric, zero diagonal, entries >= 0 or inf)."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("metric must be a square matrix")
    if np.any(np.isnan(M)) or np.any(M < 0):
        raise ValueError("metric entries must be non-negative")
    if np.any(np.diag(M) != 0):
        raise ValueError("metric diagonal must be zero")
    if not np.array_equal(M, M.T):
        raise ValueError("metric must be symmetric")
    if triangle:
        n = len(M)
        for k in range(n):
            via = M[:, k:k + 1] + M[k:k + 1, :]
            if np.any(M > via + tol):
                raise ValueError("metric violates the triangle inequality")
    return M


class SimplicialComplex:
    """A finite abstract simplicial complex, closed under taking faces."""

    def __init__(self, simplices: Iterable[Sequence[int]], cap: int | None = None):
        simp = set()
        for s in simplices:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t) or not t:
                raise ValueError(f"bad simplex {s!r}")
            simp.add(t)
        self.simplices = frozenset(simp)
        top = max((len(s) - 1 for s in simp), default=0)
        self.cap = top if cap is None else int(cap)
        if top > self.cap:
            raise ValueError("simplex dimension exceeds cap")

    @classmethod
    def closure(cls, simplices: Iterable[Sequence[int]], cap: int | None = None) -> "SimplicialComplex":
        out = set()
        for s in simplices:
            t = tuple(sorted(s))
            for k in range(1, len(t) + 1):
                out.update(combinations(t, k))
        return cls(out, cap)

    def __contains__(self, s) -> bool:
        return tuple(sorted(s)) in self.simplices

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.sorted())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __repr__(self) -> str:
        counts = [len(self.of_dim(k)) for k in range(self.dimension + 1)]
        return f"SimplicialComplex(counts={counts}, cap={self.cap})"

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def of_dim(self, k: int) -> list[Simplex]:
        return sorted(s for s in self.simplices if len(s) == k + 1)

    def sorted(self) -> list[Simplex]:
        return sorted(self.simplices, key=lambda s: (len(s), s))

    def vertices(self) -> list[int]:
        return [s[0] for s in self.of_dim(0)]

    def is_closed(self) -> bool:
        return all(f in self.simplices for s in self.simplices if len(s) > 1
                   for f in combinations(s, len(s) - 1))

    def to_dict(self) -> dict:
        return {"cap": self.cap, "simplices": [list(s) for s in self.sorted()]}

    @classmethod
    def from_dict(cls, d: dict) -> "SimplicialComplex":
        return cls(d["simplices"], d.get("cap"))


class Filtration:
    """Simplices with filtration values, in reduction order.

    Order is (value, dimension, vertex ids).  ``closed`` records the
    threshold convention: the complex at scale a is {value <= a} when
    closed (Rips) and {value < a} when open (Cech).
    """

    def __init__(self, entries: Iterable[tuple[Sequence[int], float]], cap: int,
                 alpha_max: float, closed: bool = True, validate: bool = True):
        items = [(tuple(sorted(int(v) for v in s)), float(val)) for s, val in entries]
        items.sort(key=lambda sv: (sv[1], len(sv[0]), sv[0]))
        self.simplices: list[Simplex] = [s for s, _ in items]
        self.values = np.array([v for _, v in items], dtype=float)
        self.cap = int(cap)
        self.alpha_max = float(alpha_max)
        self.closed = bool(closed)
        if validate:
            self.validate()

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(zip(self.simplices, self.values))

    def __repr__(self) -> str:
        return f"Filtration(n={len(self)}, cap={self.cap}, alpha_max={self.alpha_max})"

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.simplices)}

    def validate(self) -> None:
        if np.any(self.values < 0) or np.any(np.diff(self.values) < 0):
            raise ValueError("filtration values must be non-negative and non-decreasing")
        pos = self.index()
        if len(pos) != len(self.simplices):
            raise ValueError("duplicate simplex in filtration")
        for i, s in enumerate(self.simplices):
            if len(s) - 1 > self.cap:
                raise ValueError("simplex dimension exceeds cap")
            if len(s) == 1:
                continue
            for f in combinations(s, len(s) - 1):
                j = pos.get(f)
                if j is None or j >= i:
                    raise ValueError(f"face {f} of {s} missing or after its coface")

    def complex_at(self, alpha: float) -> SimplicialComplex:
        if self.closed:
            keep = self.values <= alpha
        else:
            keep = self.values < alpha
        return SimplicialComplex([s for s, k in zip(self.simplices, keep) if k], self.cap)

    def to_dict(self) -> dict:
        return {"cap": self.cap, "simplices": [list(s) for s in self.simplices],
                "values": [float(v) for v in self.values], "alpha_max": self.alpha_max,
                "closed": self.closed}

    @classmethod
    def from_dict(cls, d: dict) -> "Filtration":
        return cls(zip(d["simplices"], d["values"]), d["cap"], d.get("alpha_max", max(d["values"], default=0.0)),
                   d.get("closed", True))


# --------------------------------------------------------------------------
# clique expansion


def _upper_neighbours(adj: np.ndarray) -> list[int]:
    """Bitmask of higher-indexed neighbours for each vertex."""
    n = len(adj)
    masks = []
    for i in range(n):
        row = np.flatnonzero(adj[i, i + 1:]) + i + 1
        m = 0
        for j in row.tolist():
            m |= 1 << j
        masks.append(m)
    return masks


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def cliques(adj: np.ndarray, cap: int, accept: Callable[[tuple], bool] | None = None) -> Iterator[Simplex]:
    """All cliques of the graph with at most cap+1 vertices, in lexicographic DFS order.

    ``accept`` prunes a clique (and with it every superset) when it returns False.
    """
    n = len(adj)
    up = _upper_neighbours(adj)

    def expand(simplex: tuple, cand: int):
        yield simplex
        if len(simplex) > cap:
            return
        for v in _bits(cand):
            s = simplex + (v,)
            if accept is not None and not accept(s):
                continue
            yield from expand(s, cand & up[v])

    for v in range(n):
        yield from expand((v,), up[v])


def rips_complex(metric, alpha: float, dim_cap: int = DEFAULT_CAP, strict: bool = False) -> SimplicialComplex:
    """Simplices of diameter at most ``alpha`` (or below it when ``strict``)."""
    M = check_metric(metric)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    adj = (M < alpha) if strict else (M <= alpha)
    return SimplicialComplex(cliques(adj, dim_cap), dim_cap)


def _rips_entries(M: np.ndarray, adj: np.ndarray, dim_cap: int) -> list:
    # value(s + v) = max(value(s), max_u M[u, v]), carried down the clique tree
    up = _upper_neighbours(adj)
    out = []

    def expand(simplex, val, cand):
        out.append((simplex, val))
        if len(simplex) > dim_cap:
            return
        for v in _bits(cand):
            nv = max(val, max(float(M[u, v]) for u in simplex))
            expand(simplex + (v,), nv, cand & up[v])

    for v in range(len(M)):
        expand((v,), 0.0, up[v])
    return out


def rips_filtration(metric, alpha_max: float, dim_cap: int = DEFAULT_CAP) -> Filtration:
    """Rips filtration up to diameter ``alpha_max``; a simplex's value is its diameter."""
    M = check_metric(metric)
    if alpha_max < 0:
        raise ValueError("alpha_max must be non-negative")
    return Filtration(_rips_entries(M, M <= alpha_max, dim_cap), dim_cap, alpha_max,
                      closed=True, validate=False)


def cech_complex(cloud, alpha: float, dim_cap: int = DEFAULT_CAP) -> SimplicialComplex:
    """Nerve of the open ``alpha``-balls around the points."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    P = as_cloud(cloud).points
    D = as_cloud(cloud).distance_matrix()
    adj = D < 2 * alpha

    def accept(s):
        return len(s) <= 2 or meb_radius(P[list(s)]) < alpha

    return SimplicialComplex(cliques(adj, dim_cap, accept), dim_cap)


def cech_filtration(cloud, alpha_max: float, dim_cap: int = DEFAULT_CAP) -> Filtration:
    """Cech filtration; a simplex's value is its enclosing-ball radius.

    Values are made monotone under faces explicitly so that rounding in the
    ball computation can never put a coface before a face.
    """
    P = as_cloud(cloud).points
    D = as_cloud(cloud).distance_matrix()
    adj = D <= 2 * alpha_max
    up = _upper_neighbours(adj)
    entries = []
    value: dict[tuple, float] = {}

    def radius(simplex) -> float:
        r = value.get(simplex)
        if r is not None:
            return r
        if len(simplex) == 1:
            r = 0.0
        elif len(simplex) == 2:
            r = 0.5 * float(D[simplex[0], simplex[1]])
        else:
            r = meb_radius(P[list(simplex)])
            r = max([r] + [radius(f) for f in combinations(simplex, len(simplex) - 1)])
        value[simplex] = r
        return r

    def expand(simplex, cand):
        r = radius(simplex)
        if r > alpha_max:
            return
        entries.append((simplex, r))
        if len(simplex) > dim_cap:
            return
        for v in _bits(cand):
            expand(simplex + (v,), cand & up[v])

    for v in range(len(P)):
        expand((v,), up[v])
    return Filtration(entries, dim_cap, alpha_max, closed=False, validate=False)


def is_subcomplex(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    return K.simplices <= L.simplices


def simplicial_map_defects(K: SimplicialComplex, L: SimplicialComplex, vertex_map) -> list[Simplex]:
    """Simplices of K whose image under ``vertex_map`` is not a simplex of L.

    An empty result means the vertex map extends to a simplicial map K -> L.
    """
    f = vertex_map
    bad = []
    for s in K.simplices:
        image = tuple(sorted({int(f[v]) for v in s}))
        if image not in L.simplices:
            bad.append(s)
    return sorted(bad, key=lambda s: (len(s), s))


# --------------------------------------------------------------------------
# complexes in the intrinsic metric of a known shape


def intrinsic_rips_on_shape(spec, A, alpha: float, dim_cap: int = DEFAULT_CAP) -> SimplicialComplex:
    """Rips complex of on-shape points under the shape's geodesic distance."""
    from .shapes import geodesic_matrix

    return rips_complex(geodesic_matrix(spec, as_cloud(A).points), alpha, dim_cap)


def intrinsic_cech_on_shape(spec, A, alpha: float, dim_cap: int = DEFAULT_CAP,
                            witness_spacing: float | None = None) -> SimplicialComplex:
    """Intrinsic Cech complex of on-shape points, witnessed on a dense grid.

    A simplex is present when some witness point of the shape lies within
    geodesic distance < ``alpha`` of all its vertices.  The witnesses are a
    dense arc-length grid plus the points of ``A`` themselves, so this is an
    inner approximation of the true nerve that becomes exact as the grid
    refines.
    """
    from .shapes import dense_reference, geodesic_matrix

    A = as_cloud(A).points
    if witness_spacing is None:
        witness_spacing = spec.length / 2000
    W = np.vstack([A, dense_reference(spec, witness_spacing)])
    D = geodesic_matrix(spec, W)[:, : len(A)]
    found = set()
    for row in D:
        near = tuple(np.flatnonzero(row < alpha).tolist())
        if not near:
            continue
        for k in range(1, min(len(near), dim_cap + 1) + 1):
            found.update(combinations(near, k))
    return SimplicialComplex(found, dim_cap)


def diameter(metric, simplex: Sequence[int]) -> float:
    M = np.asarray(metric)
    idx = list(simplex)
    return 0.0 if len(idx) < 2 else float(M[np.ix_(idx, idx)].max())
