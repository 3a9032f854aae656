"""Ground-truth shapes: parametric curves and straight-line embedded graphs.

Every shape is turned into a :class:`MetricGraph` (nodes joined by edges of
known length), which is enough to answer intrinsic distance queries, sample
by arc length and read off the shortest cycle and first Betti number.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicHermiteSpline
from scipy.spatial import cKDTree

from .geometry import NoiseModel, PointCloud, as_point

ON_SHAPE_TOL = 1e-9
CROSSING_TOL = 1e-6

SHAPE_KINDS = ("circle", "lemniscate", "lissajous", "embedded_graph")


# --------------------------------------------------------------------------
# parametric closed curves


class Curve:
    """A closed regular curve t -> gamma(t), t in [0, period)."""

    period: float = 2 * math.pi
    table_size: int = 1 << 16

    def point(self, t) -> np.ndarray:
        raise NotImplementedError

    def deriv(self, t) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def _arc_table(self):
        t = np.linspace(0.0, self.period, self.table_size + 1)
        speed = np.linalg.norm(self.deriv(t), axis=1)
        if np.any(speed <= 0):
            raise ValueError("curve parameterisation is not regular")
        s = cumulative_simpson(speed, x=t, initial=0.0)
        return t, s, speed

    @cached_property
    def length(self) -> float:
        return float(self._arc_table[1][-1])

    @cached_property
    def _s_of_t(self):
        t, s, speed = self._arc_table
        return CubicHermiteSpline(t, s, speed)

    @cached_property
    def _t_of_s(self):
        t, s, speed = self._arc_table
        return CubicHermiteSpline(s, t, 1.0 / speed)

    def arclength(self, t) -> np.ndarray:
        t = np.mod(np.asarray(t, dtype=float), self.period)
        return self._s_of_t(t)

    def param_at(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), self.length)
        t = self._t_of_s(s)
        # one Newton step on s(t) = s tightens the spline inverse
        t = t - (self._s_of_t(t) - s) / np.linalg.norm(self.deriv(t), axis=-1)
        return np.mod(t, self.period)

    @cached_property
    def _locator(self):
        t = np.linspace(0.0, self.period, 1 << 14, endpoint=False)
        return t, cKDTree(self.point(t))

    def locate(self, x, tol: float = ON_SHAPE_TOL) -> float:
        """Parameter of the point ``x`` on the curve (error if it is off the curve)."""
        x = as_point(x)
        grid, tree = self._locator
        _, idx = tree.query(x, k=4)
        best_t, best_r = None, math.inf
        for t in np.atleast_1d(grid[idx]):
            t = float(t)
            for _ in range(60):
                g = self.point(t)
                d = self.deriv(t)
                step = float(np.dot(d, g - x) / np.dot(d, d))
                t -= step
                if abs(step) < 1e-15:
                    break
            r = float(np.linalg.norm(self.point(t) - x))
            if r < best_r:
                best_t, best_r = t % self.period, r
        if best_r > tol * max(1.0, self.scale):
            raise ValueError(f"point {x.tolist()} is not on the curve (residual {best_r:.3g})")
        return best_t

    @property
    def scale(self) -> float:
        return 1.0


class CircleCurve(Curve):
    def __init__(self, radius: float = 1.0, center=(0.0, 0.0)):
        if radius <= 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)
        self.center = np.asarray(center, dtype=float)

    @property
    def scale(self) -> float:
        return self.radius

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.center + self.radius * np.stack([np.cos(t), np.sin(t)], axis=-1)

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return self.radius * np.stack([-np.sin(t), np.cos(t)], axis=-1)

    # exact arc length, no table needed
    @cached_property
    def length(self) -> float:
        return 2 * math.pi * self.radius

    def arclength(self, t):
        return np.mod(np.asarray(t, dtype=float), self.period) * self.radius

    def param_at(self, s):
        return np.mod(np.asarray(s, dtype=float), self.length) / self.radius

    def locate(self, x, tol: float = ON_SHAPE_TOL) -> float:
        x = as_point(x)
        v = x - self.center
        r = float(np.hypot(v[0], v[1]))
        if abs(r - self.radius) > tol * max(1.0, self.radius):
            raise ValueError(f"point {x.tolist()} is not on the circle")
        return math.atan2(v[1], v[0]) % self.period


class LemniscateCurve(Curve):
    """Lemniscate of Bernoulli with half-width ``a``; crosses itself at the origin."""

    def __init__(self, a: float = 1.0):
        if a <= 0:
            raise ValueError("lemniscate size must be positive")
        self.a = float(a)

    @property
    def scale(self) -> float:
        return self.a

    def point(self, t):
        t = np.asarray(t, dtype=float)
        s, c = np.sin(t), np.cos(t)
        den = 1 + s * s
        return self.a * np.stack([c / den, s * c / den], axis=-1)

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        s, c = np.sin(t), np.cos(t)
        den = 1 + s * s
        dden = 2 * s * c
        dx = (-s * den - c * dden) / den**2
        dy = ((c * c - s * s) * den - s * c * dden) / den**2
        return self.a * np.stack([dx, dy], axis=-1)


class LissajousCurve(Curve):
    """x = A sin(p t + phase), y = A sin(q t) with coprime frequencies p, q."""

    def __init__(self, p: int = 3, q: int = 2, phase: float = math.pi / 2, amplitude: float = 1.0):
        if math.gcd(int(p), int(q)) != 1:
            raise ValueError("Lissajous frequencies must be coprime")
        self.p, self.q = int(p), int(q)
        self.phase = float(phase)
        self.amplitude = float(amplitude)

    @property
    def scale(self) -> float:
        return self.amplitude

    def point(self, t):
        t = np.asarray(t, dtype=float)
        A = self.amplitude
        return A * np.stack([np.sin(self.p * t + self.phase), np.sin(self.q * t)], axis=-1)

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        A = self.amplitude
        return A * np.stack(
            [self.p * np.cos(self.p * t + self.phase), self.q * np.cos(self.q * t)], axis=-1
        )


@dataclass(frozen=True)
class Crossing:
    t1: float
    t2: float
    point: np.ndarray
    angle: float  # angle between the two tangent lines, in (0, pi/2]


def _segments_intersect(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    return (o1 * o2 <= 0) and (o3 * o4 <= 0)


def curve_crossings(curve: Curve, resolution: float = CROSSING_TOL, samples: int = 1 << 14) -> list[Crossing]:
    """Transverse self-intersections of a closed planar curve.

    A dense polyline gives candidate segment pairs, each refined by Newton's
    method on gamma(t1) = gamma(t2); crossings closer than ``resolution``
    are merged.
    """
    T = curve.period
    t = np.linspace(0.0, T, samples, endpoint=False)
    P = curve.point(t)
    Q = np.roll(P, -1, axis=0)
    mids = 0.5 * (P + Q)
    seglen = np.linalg.norm(Q - P, axis=1)
    pairs = cKDTree(mids).query_pairs(float(seglen.max()) * 1.01, output_type="ndarray")
    found: list[Crossing] = []
    for i, j in pairs:
        gap = abs(int(i) - int(j))
        if min(gap, samples - gap) <= 2:
            continue
        if not _segments_intersect(P[i], Q[i], P[j], Q[j]):
            continue
        t1, t2 = float(t[i]), float(t[j])
        for _ in range(50):
            F = curve.point(t1) - curve.point(t2)
            J = np.column_stack([curve.deriv(t1), -curve.deriv(t2)])
            step = np.linalg.solve(J, F)
            t1 -= step[0]
            t2 -= step[1]
            if np.max(np.abs(step)) < 1e-15:
                break
        t1, t2 = t1 % T, t2 % T
        x = curve.point(t1)
        if np.linalg.norm(x - curve.point(t2)) > resolution:
            continue
        if min(abs(t1 - t2), T - abs(t1 - t2)) < 1e-6:
            continue
        if any(np.linalg.norm(c.point - x) < resolution for c in found):
            continue
        d1, d2 = curve.deriv(t1), curve.deriv(t2)
        cosang = abs(float(np.dot(d1, d2) / (np.linalg.norm(d1) * np.linalg.norm(d2))))
        angle = math.acos(min(1.0, cosang))
        if angle < 1e-6:
            raise ValueError("tangential self-intersection; curve is not generic")
        a, b = sorted((t1, t2))
        found.append(Crossing(a, b, x, angle))
    found.sort(key=lambda c: c.t1)
    return found


def crossing_betti1(curve: Curve) -> int:
    """First Betti number of a closed curve with c transverse double points.

    The crossings make the curve a 4-valent graph with c vertices and 2c
    edges (a single loop when c = 0), so beta_1 = 2c - c + 1 = c + 1.
    """
    c = len(curve_crossings(curve))
    return c + 1


# --------------------------------------------------------------------------
# metric graphs


@dataclass
class _Edge:
    u: int
    v: int
    length: float
    # straight segment: endpoints; curve arc: start arc length on the curve
    a: np.ndarray | None = None
    b: np.ndarray | None = None
    s0: float = 0.0


class MetricGraph:
    """A finite graph whose edges are straight segments or arcs of one curve."""

    def __init__(self, nodes: np.ndarray, edges: list[_Edge], curve: Curve | None = None,
                 breaks: Sequence[float] = ()):
        self.nodes = np.asarray(nodes, dtype=float)
        self.edges = edges
        self.curve = curve
        # sorted curve parameters at which arcs start (curve graphs only)
        self._breaks = list(breaks)
        n = len(self.nodes)
        D = np.full((n, n), math.inf)
        np.fill_diagonal(D, 0.0)
        for e in edges:
            if e.length < D[e.u, e.v]:
                D[e.u, e.v] = D[e.v, e.u] = e.length
        for k in range(n):
            D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
        self.node_dist = D

    @classmethod
    def from_segments(cls, vertices, edges) -> "MetricGraph":
        V = np.asarray(vertices, dtype=float)
        out = []
        for i, j in edges:
            L = float(np.linalg.norm(V[j] - V[i]))
            if L <= 0:
                raise ValueError(f"edge ({i}, {j}) has zero length")
            out.append(_Edge(int(i), int(j), L, V[i].copy(), V[j].copy()))
        return cls(V, out)

    @classmethod
    def from_curve(cls, curve: Curve) -> "MetricGraph":
        L = curve.length
        if isinstance(curve, CircleCurve):
            crossings = []
        else:
            crossings = curve_crossings(curve)
        if not crossings:
            node = curve.point(0.0)[None, :]
            return cls(node, [_Edge(0, 0, L, s0=0.0)], curve, breaks=[0.0])
        events = []
        for k, c in enumerate(crossings):
            events.append((c.t1, k))
            events.append((c.t2, k))
        events.sort()
        nodes = np.array([c.point for c in crossings])
        breaks = [t for t, _ in events]
        svals = [float(curve.arclength(t)) for t in breaks]
        edges = []
        m = len(events)
        for i in range(m):
            s_start = svals[i]
            s_end = svals[(i + 1) % m] if i + 1 < m else svals[0] + L
            edges.append(_Edge(events[i][1], events[(i + 1) % m][1], s_end - s_start, s0=s_start))
        return cls(nodes, edges, curve, breaks)

    # ---- structure

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.edges))

    def components(self) -> int:
        parent = list(range(len(self.nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        return len({find(i) for i in range(len(self.nodes))})

    def betti1(self) -> int:
        return len(self.edges) - len(self.nodes) + self.components()

    def shortest_cycle(self) -> float:
        """Length of the shortest simple cycle (inf for a forest).

        For each edge the best cycle through it is the edge plus a shortest
        path between its ends that avoids it.
        """
        best = math.inf
        n = len(self.nodes)
        for idx, e in enumerate(self.edges):
            if e.u == e.v:
                best = min(best, e.length)
                continue
            D = np.full(n, math.inf)
            D[e.u] = 0.0
            # Bellman-Ford on a tiny graph without edge idx
            for _ in range(n):
                changed = False
                for jdx, f in enumerate(self.edges):
                    if jdx == idx:
                        continue
                    if D[f.u] + f.length < D[f.v]:
                        D[f.v] = D[f.u] + f.length
                        changed = True
                    if D[f.v] + f.length < D[f.u]:
                        D[f.u] = D[f.v] + f.length
                        changed = True
                if not changed:
                    break
            best = min(best, e.length + D[e.v])
        return best

    # ---- positions

    def position(self, edge: int, offset) -> np.ndarray:
        e = self.edges[edge]
        offset = np.asarray(offset, dtype=float)
        if e.a is not None:
            frac = (offset / e.length)[..., None]
            return e.a + frac * (e.b - e.a)
        return self.curve.point(self.curve.param_at(e.s0 + offset))

    def locate(self, x, tol: float = ON_SHAPE_TOL) -> tuple[int, float]:
        """(edge index, offset from the edge's first node) of an on-shape point."""
        x = as_point(x)
        if self.curve is None:
            scale = max(1.0, float(np.max(np.abs(self.nodes))))
            for idx, e in enumerate(self.edges):
                d = e.b - e.a
                u = float(np.clip(np.dot(x - e.a, d) / np.dot(d, d), 0.0, 1.0))
                if np.linalg.norm(e.a + u * d - x) <= tol * scale:
                    return idx, u * e.length
            raise ValueError(f"point {x.tolist()} is not on the graph")
        t = self.curve.locate(x, tol)
        k = bisect.bisect_right(self._breaks, t) - 1
        # parameters before the first break belong to the wrap-around arc
        k = k % len(self.edges)
        e = self.edges[k]
        off = (float(self.curve.arclength(t)) - e.s0) % self.curve.length
        return k, min(off, e.length)

    def locate_arclength(self, s: float) -> tuple[int, float]:
        """Location of the curve point at arc length ``s`` from parameter 0."""
        L = self.curve.length
        s = float(s) % L
        starts = [e.s0 for e in self.edges]
        k = (bisect.bisect_right(starts, s) - 1) % len(self.edges)
        off = (s - self.edges[k].s0) % L
        return k, min(off, self.edges[k].length)

    # ---- distances

    def distance_between(self, lx: tuple[int, float], ly: tuple[int, float]) -> float:
        ex, ox = self.edges[lx[0]], lx[1]
        ey, oy = self.edges[ly[0]], ly[1]
        D = self.node_dist
        best = min(
            ox + D[ex.u, ey.u] + oy,
            ox + D[ex.u, ey.v] + (ey.length - oy),
            (ex.length - ox) + D[ex.v, ey.u] + oy,
            (ex.length - ox) + D[ex.v, ey.v] + (ey.length - oy),
        )
        if lx[0] == ly[0]:
            best = min(best, abs(ox - oy))
        return float(best)

    def distance_matrix(self, locs: Sequence[tuple[int, float]]) -> np.ndarray:
        E = np.array([l[0] for l in locs], dtype=int)
        O = np.array([l[1] for l in locs], dtype=float)
        U = np.array([self.edges[k].u for k in E], dtype=int)
        V = np.array([self.edges[k].v for k in E], dtype=int)
        Lg = np.array([self.edges[k].length for k in E])
        to_u, to_v = O, Lg - O
        D = self.node_dist
        best = np.minimum.reduce([
            to_u[:, None] + D[np.ix_(U, U)] + to_u[None, :],
            to_u[:, None] + D[np.ix_(U, V)] + to_v[None, :],
            to_v[:, None] + D[np.ix_(V, U)] + to_u[None, :],
            to_v[:, None] + D[np.ix_(V, V)] + to_v[None, :],
        ])
        same = E[:, None] == E[None, :]
        direct = np.abs(O[:, None] - O[None, :])
        best = np.where(same, np.minimum(best, direct), best)
        best = np.minimum(best, best.T)
        np.fill_diagonal(best, 0.0)
        return best


# --------------------------------------------------------------------------
# shape specifications


@dataclass(eq=False)
class ShapeSpec:
    """A known shape with its sampling parameters.

    ``distortion`` is an upper bound on the distortion and
    ``convexity_radius`` a lower bound on the convexity radius; both are
    inputs, never estimated from a sample.
    """

    kind: str
    params: dict
    distortion: float
    convexity_radius: float
    shortest_cycle: float | None = None
    name: str = field(default="")

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise ValueError(f"unsupported shape kind {self.kind!r}")
        if not self.distortion >= 1:
            raise ValueError("distortion must be >= 1")
        if not self.convexity_radius > 0:
            raise ValueError("convexity radius must be positive")
        if self.shortest_cycle is not None and not self.shortest_cycle > 0:
            raise ValueError("shortest cycle length must be positive")

    @cached_property
    def curve(self) -> Curve | None:
        p = self.params
        if self.kind == "circle":
            return CircleCurve(p.get("radius", 1.0), p.get("center", (0.0, 0.0)))
        if self.kind == "lemniscate":
            return LemniscateCurve(p.get("a", 1.0))
        if self.kind == "lissajous":
            return LissajousCurve(p.get("p", 3), p.get("q", 2), p.get("phase", math.pi / 2),
                                  p.get("amplitude", 1.0))
        return None

    @cached_property
    def graph(self) -> MetricGraph:
        if self.kind == "embedded_graph":
            return MetricGraph.from_segments(self.params["vertices"], self.params["edges"])
        return MetricGraph.from_curve(self.curve)

    @property
    def dim(self) -> int:
        return 2

    @property
    def length(self) -> float:
        return self.graph.total_length

    def betti(self) -> tuple[int, int]:
        g = self.graph
        return g.components(), g.betti1()

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": _jsonable(self.params), "delta": self.distortion,
             "rho": self.convexity_radius}
        if self.shortest_cycle is not None:
            d["b"] = self.shortest_cycle
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ShapeSpec":
        kind = d["kind"]
        params = dict(d.get("params", {}))
        if kind in REGISTRY and "delta" not in d:
            return REGISTRY[kind](**params)
        if kind not in SHAPE_KINDS:
            raise ValueError(f"unsupported shape kind {kind!r}")
        b = d.get("b")
        rho = d.get("rho")
        if rho is None:
            if b is None:
                raise ValueError("shape spec needs rho (or b for a graph)")
            rho = b / 4
        if "delta" not in d:
            raise ValueError("shape spec needs delta")
        return cls(kind, params, float(d["delta"]), float(rho), None if b is None else float(b),
                   d.get("name", ""))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---- built-in shapes

# Distortion values of the curved shapes were obtained with
# estimate_distortion() on 3000-point samples combined with the crossing
# bound 1/sin(angle/2), then rounded up; tests re-derive them.
LEMNISCATE_DELTA = 1.9
LISSAJOUS_DELTA = {(3, 2): 3.2, (1, 2): 2.45}


def circle(radius: float = 1.0, center=(0.0, 0.0)) -> ShapeSpec:
    per = 2 * math.pi * radius
    return ShapeSpec("circle", {"radius": float(radius), "center": list(map(float, center))},
                     math.pi / 2, per / 4, per, "circle")


def lemniscate(a: float = 1.0) -> ShapeSpec:
    spec = ShapeSpec("lemniscate", {"a": float(a)}, LEMNISCATE_DELTA, 1.0, None, "lemniscate")
    b = spec.graph.shortest_cycle()
    spec.shortest_cycle = b
    spec.convexity_radius = b / 4
    return spec


def lissajous(p: int = 3, q: int = 2, phase: float = math.pi / 2, amplitude: float = 1.0,
              delta: float | None = None) -> ShapeSpec:
    if delta is None:
        if (p, q) not in LISSAJOUS_DELTA or phase != math.pi / 2:
            raise ValueError("no stored distortion bound for these Lissajous parameters; pass delta")
        delta = LISSAJOUS_DELTA[(p, q)]
    spec = ShapeSpec("lissajous", {"p": p, "q": q, "phase": phase, "amplitude": amplitude},
                     delta, 1.0, None, "lissajous")
    b = spec.graph.shortest_cycle()
    spec.shortest_cycle = b
    spec.convexity_radius = b / 4
    return spec


def embedded_graph(vertices, edges, delta: float, b: float | None = None, name: str = "") -> ShapeSpec:
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2:
        raise ValueError("embedded graphs live in the plane")
    params = {"vertices": V.tolist(), "edges": [list(map(int, e)) for e in edges]}
    spec = ShapeSpec("embedded_graph", params, delta, 1.0, None, name)
    if b is None:
        b = spec.graph.shortest_cycle()
    if not math.isfinite(b):
        raise ValueError("graph has no cycle; convexity radius is unbounded")
    spec.shortest_cycle = float(b)
    spec.convexity_radius = float(b) / 4
    return spec


def square(side: float = 1.0) -> ShapeSpec:
    V = [[0, 0], [side, 0], [side, side], [0, side]]
    return embedded_graph(V, [(0, 1), (1, 2), (2, 3), (3, 0)], 2.0, name="square")


def figure_eight(side: float = 1.0) -> ShapeSpec:
    """Two squares touching at one corner (a wedge of two circles)."""
    s = side
    V = [[0, 0], [s, 0], [s, s], [0, s], [2 * s, s], [2 * s, 2 * s], [s, 2 * s]]
    E = [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 5), (5, 6), (6, 2)]
    return embedded_graph(V, E, 2.0, name="figure_eight")


def theta(side: float = 1.0) -> ShapeSpec:
    """A 2x1 rectangle split by a middle rung: three paths between two nodes."""
    s = side
    V = [[0, 0], [s, 0], [2 * s, 0], [2 * s, s], [s, s], [0, s]]
    E = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]
    return embedded_graph(V, E, 2.0, name="theta")


REGISTRY = {
    "circle": circle,
    "lemniscate": lemniscate,
    "lissajous": lissajous,
    "square": square,
    "figure_eight": figure_eight,
    "theta": theta,
}


def builtin(name: str, **params) -> ShapeSpec:
    key = name.replace("-", "_")
    if key not in REGISTRY:
        raise ValueError(f"unknown shape {name!r}; choose from {sorted(REGISTRY)}")
    return REGISTRY[key](**params)


# --------------------------------------------------------------------------
# sampling and intrinsic distances


@dataclass(frozen=True)
class Sample:
    cloud: PointCloud
    dh_bound: float
    spacing: float
    locations: tuple  # (edge, offset) of each noiseless point


def _graph_locations(g: MetricGraph, count: int):
    n_nodes = len(g.nodes)
    if count < n_nodes:
        raise ValueError(f"need at least {n_nodes} points to cover the graph's vertices")
    interior = count - n_nodes
    lengths = np.array([e.length for e in g.edges])
    share = interior * lengths / lengths.sum()
    alloc = np.floor(share).astype(int)
    # largest remainder; ties broken by edge order
    rest = interior - int(alloc.sum())
    order = sorted(range(len(lengths)), key=lambda k: (-(share[k] - alloc[k]), k))
    for k in order[:rest]:
        alloc[k] += 1
    locs = []
    # a node is located on the first edge that starts or ends at it
    seen = set()
    for k, e in enumerate(g.edges):
        for node, off in ((e.u, 0.0), (e.v, e.length)):
            if node not in seen:
                seen.add(node)
                locs.append((node, k, off))
    locs.sort()
    out = [(k, off) for _, k, off in locs]
    gap = 0.0
    for k, e in enumerate(g.edges):
        m = int(alloc[k])
        step = e.length / (m + 1)
        gap = max(gap, step)
        out.extend((k, step * i) for i in range(1, m + 1))
    return out, gap


def sample_shape(spec: ShapeSpec, count: int, noise: NoiseModel | None = None) -> Sample:
    """Arc-length uniform sample with a certified Hausdorff bound.

    Every point of the shape is within half an arc gap of a noiseless
    sample point, and noise moves each point by at most its magnitude, so
    d_H(shape, sample) <= gap/2 + noise.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    noise = noise or NoiseModel()
    g = spec.graph
    if spec.kind == "embedded_graph":
        locs, gap = _graph_locations(g, count)
        pts = np.array([g.position(k, o) for k, o in locs])
    else:
        curve = spec.curve
        L = curve.length
        s = L * np.arange(count) / count
        pts = curve.point(curve.param_at(s))
        if isinstance(curve, CircleCurve):
            # exact angles, no arc-length table
            pts = curve.point(2 * math.pi * np.arange(count) / count)
        gap = L / count
        locs = [g.locate_arclength(v) for v in s]
    pts = noise.displace(pts)
    return Sample(PointCloud(pts), gap / 2 + noise.magnitude, gap, tuple(locs))


def sample_off_nodes(spec: ShapeSpec, count: int, clearance: float,
                     noise: NoiseModel | None = None) -> Sample:
    """Evenly spaced sample on each edge, leaving arc length ``clearance`` free around every node.

    Nodes are the crossings of a curve or the vertices of a graph, so the
    sample generically misses the branch points.  A point of the shape is
    within ``clearance`` of the sample near a node and within half a gap
    elsewhere, so d_H <= max(clearance, gap/2) + noise.
    """
    if not clearance > 0:
        raise ValueError("clearance must be positive")
    g = spec.graph
    usable = np.array([e.length - 2 * clearance for e in g.edges])
    if np.any(usable <= 0):
        raise ValueError("clearance leaves an edge without room for points")
    if count < len(g.edges):
        raise ValueError(f"need at least one point per edge ({len(g.edges)})")
    share = count * usable / usable.sum()
    alloc = np.maximum(np.floor(share).astype(int), 1)
    rest = count - int(alloc.sum())
    order = sorted(range(len(usable)), key=lambda k: (-(share[k] - alloc[k]), k))
    for k in order[:max(rest, 0)]:
        alloc[k] += 1
    locs, gap = [], 0.0
    for k, m in enumerate(alloc.tolist()):
        if m == 1:
            offs = [0.5 * g.edges[k].length]
            gap = max(gap, usable[k])
        else:
            step = usable[k] / (m - 1)
            offs = [clearance + step * i for i in range(m)]
            gap = max(gap, step)
        locs.extend((k, float(o)) for o in offs)
    noise = noise or NoiseModel()
    pts = noise.displace(np.array([g.position(k, o) for k, o in locs]))
    return Sample(PointCloud(pts), max(clearance, gap / 2) + noise.magnitude, gap, tuple(locs))


def dense_reference(spec: ShapeSpec, spacing: float) -> np.ndarray:
    """Noiseless points on the shape with arc gaps at most ``spacing``."""
    count = max(2, int(math.ceil(spec.length / spacing)) + len(spec.graph.nodes))
    return sample_shape(spec, count).cloud.points


def geodesic_distance(spec: ShapeSpec, x, y) -> float:
    """Intrinsic (shortest path inside the shape) distance between two on-shape points."""
    if spec.kind == "circle":
        c = spec.curve
        t1, t2 = c.locate(x), c.locate(y)
        dt = abs(t1 - t2)
        return c.radius * min(dt, 2 * math.pi - dt)
    g = spec.graph
    return g.distance_between(g.locate(x), g.locate(y))


def geodesic_matrix(spec: ShapeSpec, points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if spec.kind == "circle":
        c = spec.curve
        t = np.array([c.locate(p) for p in pts])
        dt = np.abs(t[:, None] - t[None, :])
        D = c.radius * np.minimum(dt, 2 * math.pi - dt)
        np.fill_diagonal(D, 0.0)
        return D
    g = spec.graph
    return g.distance_matrix([g.locate(p) for p in pts])


def random_locations(spec: ShapeSpec, count: int, seed: int = 0):
    """Points uniform in arc length drawn from ``seed``, with their graph locations."""
    rng = np.random.default_rng(seed)
    g = spec.graph
    lengths = np.array([e.length for e in g.edges])
    s = rng.uniform(0.0, lengths.sum(), size=count)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    edge = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(lengths) - 1)
    off = np.minimum(s - cum[edge], lengths[edge])
    locs = [(int(k), float(o)) for k, o in zip(edge, off)]
    pts = np.array([g.position(k, o) for k, o in locs]).reshape(count, -1)
    return pts, locs


def random_points_on(spec: ShapeSpec, count: int, seed: int = 0) -> np.ndarray:
    return random_locations(spec, count, seed)[0]


def estimate_distortion(spec: ShapeSpec, count: int = 1500) -> float:
    """Lower estimate of the distortion from sampled pairs, plus crossing angles.

    A transverse crossing at angle theta alone forces distortion at least
    1/sin(theta/2), approached by pairs shrinking onto the crossing.
    """
    pts = dense_reference(spec, spec.length / count)
    DL = geodesic_matrix(spec, pts)
    diff = pts[:, None, :] - pts[None, :, :]
    DE = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    mask = DE > 1e-12
    est = float(np.max(DL[mask] / DE[mask]))
    if spec.curve is not None and not isinstance(spec.curve, CircleCurve):
        for c in curve_crossings(spec.curve):
            est = max(est, 1.0 / math.sin(c.angle / 2))
    elif spec.kind == "embedded_graph":
        est = max(est, _graph_corner_bound(spec.graph))
    return est


def _graph_corner_bound(g: MetricGraph) -> float:
    best = 1.0
    for n in range(len(g.nodes)):
        dirs = []
        for e in g.edges:
            if e.u == n:
                dirs.append(e.b - e.a)
            elif e.v == n:
                dirs.append(e.a - e.b)
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                c = np.dot(dirs[i], dirs[j]) / (np.linalg.norm(dirs[i]) * np.linalg.norm(dirs[j]))
                ang = math.acos(float(np.clip(c, -1.0, 1.0)))
                best = max(best, 1.0 / math.sin(ang / 2))
    return best


# --------------------------------------------------------------------------
# sampling conditions of the reconstruction theorems


@dataclass(frozen=True)
class SamplingCheck:
    theorem: str
    passed: bool
    dh: float
    scaled_eps: float
    bound: float
    failure: str = ""

    def report(self) -> str:
        status = "pass" if self.passed else "FAIL"
        text = f"{self.theorem}: {status}  dH={self.dh!r} < {self.scaled_eps!r} < {self.bound!r}"
        return text + (f"  [{self.failure}]" if self.failure else "")


_THEOREMS = {
    # name: (eps divisor, label, bound(delta, rho), bound label)
    "rips": (4.0, "eps/4", lambda d, r: r / (2 * d * (3 * d + 2)), "rho/(2*delta*(3*delta+2))"),
    "cech": (1.0, "eps", lambda d, r: r / (2 * d * (4 * d + 1)), "rho/(2*delta*(4*delta+1))"),
    "graph": (3.0, "eps/3", None, "b/(4*delta*(15*delta+2))"),
    "fundamental": (3.0, "eps/3", lambda d, r: r / (d * (15 * d + 2)), "rho/(delta*(15*delta+2))"),
}


def check_sampling(theorem: str, dh: float, eps: float, delta: float,
                   rho: float | None = None, b: float | None = None) -> SamplingCheck:
    """Evaluate a theorem's strict inequality chain dH < eps/c < bound."""
    if theorem not in _THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not dh >= 0:
        raise ValueError("dH bound must be non-negative")
    if not delta >= 1:
        raise ValueError("delta must be >= 1")
    div, eps_label, fn, bound_label = _THEOREMS[theorem]
    if theorem == "graph":
        if b is None:
            raise ValueError("graph theorem needs the shortest cycle length b")
        bound = b / (4 * delta * (15 * delta + 2))
    else:
        if rho is None:
            raise ValueError(f"{theorem} theorem needs the convexity radius rho")
        bound = fn(delta, rho)
    mid = eps / div
    failure = ""
    if not dh < mid:
        failure = f"dH >= {eps_label}"
    elif not mid < bound:
        failure = f"{eps_label} >= {bound_label}"
    return SamplingCheck(theorem, not failure, float(dh), float(mid), float(bound), failure)


def verify_sampling_condition(spec: ShapeSpec, dh_bound: float, eps: float, theorem: str) -> SamplingCheck:
    if theorem == "graph" and (spec.shortest_cycle is None or spec.dim != 2):
        raise ValueError("graph reconstruction theorem applies only to planar graphs with a known shortest cycle")
    return check_sampling(theorem, dh_bound, eps, spec.distortion, spec.convexity_radius,
                          spec.shortest_cycle)
