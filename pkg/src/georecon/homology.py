"""Z/2 homology and persistence of finite simplicial complexes.

Chains are stored as Python ints used as bit vectors (bit i set means the
simplex with row index i is in the chain), so addition over Z/2 is XOR and
the lowest nonzero entry of a column is ``bit_length() - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .complex import (
    DEFAULT_CAP,
    Filtration,
    SimplicialComplex,
    cech_filtration,
    is_subcomplex,
    rips_filtration,
)
from .geometry import as_cloud
from .shapes import SamplingCheck, check_sampling

INF = math.inf


@dataclass(frozen=True, order=True)
class Interval:
    dim: int
    birth: float
    death: float

    @property
    def persistence(self) -> float:
        return self.death - self.birth


@dataclass
class PersistenceDiagram:
    """Barcode of a filtration, in dimensions below its cap.

    ``closed`` carries the filtration's threshold convention so that
    :meth:`betti` reads the barcode the same way the complexes were cut.
    """

    intervals: list[Interval]
    alpha_max: float
    closed: bool = True
    cap: int = DEFAULT_CAP
    pairs: list[tuple[int, int]] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.intervals = sorted(self.intervals)

    def in_dim(self, k: int) -> list[Interval]:
        return [iv for iv in self.intervals if iv.dim == k]

    def betti(self, k: int, s: float, t: float) -> int:
        return persistent_betti(self, k, s, t)

    def essential(self, k: int) -> int:
        return sum(1 for iv in self.in_dim(k) if iv.death == INF)

    def to_lines(self) -> list[str]:
        return [f"{iv.dim} {fmt(iv.birth)} {fmt(iv.death)}" for iv in self.intervals]

    def to_dict(self) -> dict:
        return {"alpha_max": self.alpha_max, "closed": self.closed, "cap": self.cap,
                "intervals": [[iv.dim, iv.birth, "inf" if iv.death == INF else iv.death]
                              for iv in self.intervals]}

    @classmethod
    def from_dict(cls, d: dict) -> "PersistenceDiagram":
        ivs = [Interval(int(k), float(b), INF if e == "inf" else float(e)) for k, b, e in d["intervals"]]
        return cls(ivs, float(d["alpha_max"]), bool(d.get("closed", True)), int(d.get("cap", DEFAULT_CAP)))


def fmt(x: float) -> str:
    """Shortest round-trip decimal form; ``inf`` for infinity."""
    x = float(x)
    if x == INF:
        return "inf"
    return repr(x)


# --------------------------------------------------------------------------
# persistence by column reduction


def boundary_columns(f: Filtration) -> list[int]:
    pos = f.index()
    cols = []
    for j, s in enumerate(f.simplices):
        c = 0
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                i = pos.get(face)
                if i is None or i >= j:
                    raise ValueError(f"malformed filtration: face {face} of {s} is not earlier")
                c |= 1 << i
        cols.append(c)
    return cols


def reduce_boundary(f: Filtration, clearing: bool = True) -> dict[int, int]:
    """Standard column reduction; returns {column: low row} for nonzero reduced columns.

    With ``clearing``, dimensions are processed from the top and any column
    already known to be a pivot row is skipped (it reduces to zero anyway),
    which leaves the pairing unchanged.
    """
    cols = boundary_columns(f)
    dims = [len(s) - 1 for s in f.simplices]
    low_to_col: dict[int, int] = {}
    reduced: dict[int, int] = {}
    order = range(len(cols))
    if clearing:
        by_dim: dict[int, list[int]] = {}
        for j in order:
            by_dim.setdefault(dims[j], []).append(j)
        order = [j for d in sorted(by_dim, reverse=True) for j in by_dim[d]]
    cleared = set()
    for j in order:
        if j in cleared:
            continue
        c = cols[j]
        while c:
            low = c.bit_length() - 1
            k = low_to_col.get(low)
            if k is None:
                break
            c ^= reduced[k]
        if c:
            low = c.bit_length() - 1
            low_to_col[low] = j
            reduced[j] = c
            if clearing:
                cleared.add(low)
    return {j: c.bit_length() - 1 for j, c in reduced.items()}


def compute_persistence(f: Filtration, clearing: bool = True, keep_empty: bool = False) -> PersistenceDiagram:
    """Barcode of ``f`` over Z/2 in dimensions 0 .. cap-1.

    Top-dimensional simplices only kill classes.  Intervals of zero length
    are dropped unless ``keep_empty``.
    """
    lows = reduce_boundary(f, clearing)
    vals = f.values
    dims = [len(s) - 1 for s in f.simplices]
    paired = set(lows.values())
    intervals, pairs = [], []
    for j, i in sorted(lows.items()):
        pairs.append((i, j))
        if dims[i] >= f.cap:
            continue
        if vals[i] == vals[j] and not keep_empty:
            continue
        intervals.append(Interval(dims[i], float(vals[i]), float(vals[j])))
    for j in range(len(f)):
        if j in lows or j in paired or dims[j] >= f.cap:
            continue
        intervals.append(Interval(dims[j], float(vals[j]), INF))
    return PersistenceDiagram(intervals, f.alpha_max, f.closed, f.cap, sorted(pairs))


def persistent_betti(d: PersistenceDiagram, k: int, s: float, t: float) -> int:
    """Rank of H_k(K_s) -> H_k(K_t)."""
    if s > t:
        raise ValueError("need s <= t")
    if t > d.alpha_max:
        raise ValueError(f"query scale {t} beyond the computed range {d.alpha_max}")
    if k >= d.cap:
        raise ValueError(f"dimension {k} not computed (cap {d.cap})")
    if d.closed:
        return sum(1 for iv in d.intervals if iv.dim == k and iv.birth <= s and iv.death > t)
    return sum(1 for iv in d.intervals if iv.dim == k and iv.birth < s and iv.death >= t)


# --------------------------------------------------------------------------
# Betti numbers of a single complex


def _boundary_ints(K: SimplicialComplex, k: int) -> list[int]:
    rows = {s: i for i, s in enumerate(K.of_dim(k - 1))}
    out = []
    for s in K.of_dim(k):
        c = 0
        for face in combinations(s, k):
            c |= 1 << rows[face]
        out.append(c)
    return out


def gf2_rank(columns: Iterable[int]) -> int:
    basis: dict[int, int] = {}
    for c in columns:
        while c:
            p = c.bit_length() - 1
            b = basis.get(p)
            if b is None:
                basis[p] = c
                break
            c ^= b
    return len(basis)


def sparse_gf2_rank(columns: Iterable[Sequence[int]]) -> int:
    """Rank of a Z/2 matrix given as columns of row indices, reduced in the given order.

    Sets instead of bit-vectors keep memory proportional to the nonzeros,
    which matters for very wide boundary matrices.
    """
    basis: dict[int, frozenset] = {}
    for col in columns:
        p = max(col, default=-1)
        b = basis.get(p)
        if b is None:
            if p >= 0:
                basis[p] = frozenset(col)
            continue
        c = set(col)
        while True:
            c ^= b
            if not c:
                break
            p = max(c)
            b = basis.get(p)
            if b is None:
                basis[p] = frozenset(c)
                break
    return len(basis)


def betti(K: SimplicialComplex, k: int) -> int:
    """dim_Z/2 of ker d_k / im d_k+1 for the complex exactly as given."""
    if k < 0 or k > K.cap:
        raise ValueError(f"dimension {k} outside 0..{K.cap}")
    n_k = len(K.of_dim(k))
    rank_k = gf2_rank(_boundary_ints(K, k)) if k > 0 else 0
    rank_k1 = gf2_rank(_boundary_ints(K, k + 1)) if k + 1 <= K.dimension else 0
    return n_k - rank_k - rank_k1


def betti_numbers(K: SimplicialComplex, dims: Sequence[int] = (0, 1)) -> tuple[int, ...]:
    return tuple(betti(K, k) for k in dims)


# --------------------------------------------------------------------------
# independent oracle for the rank of an inclusion on homology
#
# Dense uint8 matrices over Z/2 and textbook row reduction, deliberately
# sharing nothing with the bit-vector code above.


def _rref_gf2(A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    A = (A.copy() % 2).astype(np.uint8)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hit = np.flatnonzero(A[r:, c])
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] ^= A[r]
        pivots.append(c)
        r += 1
    return A, pivots


def _rank_gf2(A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(_rref_gf2(A)[1])


def _nullspace_gf2(A: np.ndarray) -> np.ndarray:
    """Basis of {x : A x = 0} as rows."""
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.uint8)
    R, piv = _rref_gf2(A) if rows else (np.zeros((0, cols), np.uint8), [])
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fcol in free:
        x = np.zeros(cols, dtype=np.uint8)
        x[fcol] = 1
        for r, pc in enumerate(piv):
            x[pc] = R[r, fcol]
        basis.append(x)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), cols)


def _boundary_dense(rows: list, cols: list) -> np.ndarray:
    index = {s: i for i, s in enumerate(rows)}
    B = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    for j, s in enumerate(cols):
        if len(s) == 1:
            continue
        for face in combinations(s, len(s) - 1):
            B[index[face], j] = 1
    return B


def image_rank_oracle(K: SimplicialComplex, L: SimplicialComplex, k: int) -> int:
    """Rank of H_k(K) -> H_k(L) for K a subcomplex of L, by direct elimination.

    The cycles of K are written in L's k-chain coordinates; the answer is
    dim span(cycles(K) + boundaries(L)) - dim boundaries(L).
    """
    if not is_subcomplex(K, L):
        raise ValueError("K is not a subcomplex of L")
    Lk = sorted(s for s in L.simplices if len(s) == k + 1)
    Kk = sorted(s for s in K.simplices if len(s) == k + 1)
    Lk1 = sorted(s for s in L.simplices if len(s) == k + 2)
    col_of = {s: i for i, s in enumerate(Lk)}
    if k == 0:
        Z = np.eye(len(Kk), dtype=np.uint8)
    else:
        Km1 = sorted(s for s in K.simplices if len(s) == k)
        Z = _nullspace_gf2(_boundary_dense(Km1, Kk))
    # embed K-cycles into L coordinates
    Zl = np.zeros((Z.shape[0], len(Lk)), dtype=np.uint8)
    for j, s in enumerate(Kk):
        Zl[:, col_of[s]] = Z[:, j] if Z.shape[0] else 0
    B = _boundary_dense(Lk, Lk1).T  # rows are boundaries
    both = np.vstack([B, Zl]) if B.size or Zl.size else np.zeros((0, len(Lk)), np.uint8)
    return _rank_gf2(both) - _rank_gf2(B)


# --------------------------------------------------------------------------
# homology of the hidden shape from a sample


@dataclass(frozen=True)
class HomologyReconstruction:
    method: str
    eps: float
    target: float
    betti: dict
    check: SamplingCheck | None
    diagram: PersistenceDiagram = field(repr=False)


def theorem_scales(method: str, eps: float, delta: float) -> tuple[float, float]:
    """Scale pair whose inclusion image recovers the shape's homology.

    Rips (diameter): (eps, (3 delta + 1) eps / 2); Cech (radius): (eps, (4 delta + 1) eps).
    """
    if method == "rips":
        return eps, 0.5 * (3 * delta + 1) * eps
    if method == "cech":
        return eps, (4 * delta + 1) * eps
    raise ValueError(f"unknown method {method!r}")


def reconstruct_homology(cloud, eps: float, delta: float, rho: float | None = None,
                         dh: float | None = None, method: str = "rips",
                         dims: Sequence[int] = (0, 1), dim_cap: int = DEFAULT_CAP,
                         require_conditions: bool = True) -> HomologyReconstruction:
    """Persistent Betti numbers of the sample at the theorem's scale pair.

    When ``dh`` and ``rho`` are given the sampling condition is checked
    first; with ``require_conditions`` a failed check raises before any
    complex is built.
    """
    check = None
    if dh is not None and rho is not None:
        check = check_sampling(method, dh, eps, delta, rho)
        if require_conditions and not check.passed:
            raise ValueError(f"sampling condition fails: {check.failure}")
    s, t = theorem_scales(method, eps, delta)
    P = as_cloud(cloud)
    if method == "rips":
        f = rips_filtration(P.distance_matrix(), t, dim_cap)
    else:
        f = cech_filtration(P, t, dim_cap)
    diagram = compute_persistence(f)
    out = {k: persistent_betti(diagram, k, s, t) for k in dims}
    return HomologyReconstruction(method, eps, t, out, check, diagram)
