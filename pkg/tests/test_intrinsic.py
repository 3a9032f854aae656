import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from georecon.complex import is_subcomplex, rips_complex
from georecon.geometry import pairwise_distances
from georecon.intrinsic import (
    build_eps_graph,
    compute_d_eps,
    d_eps_metric,
    intrinsic_rips,
    metric_to_csv_rows,
    path_covering_check,
    relaxation_apsp,
)
from georecon.shapes import circle, sample_shape

clouds = st.integers(1, 15).flatmap(
    lambda n: arrays(float, (n, 2), elements=st.floats(0, 1, allow_nan=False, width=32)))


def test_collinear_chain():
    P = np.array([[0.0, 0], [0.4, 0], [0.8, 0], [1.2, 0]])
    m = d_eps_metric(P, 0.5)
    assert m.matrix[0, 3] == pytest.approx(1.2)
    assert m.path(0, 3) == [0, 1, 2, 3]
    far = d_eps_metric(P, 0.3)
    assert math.isinf(far.matrix[0, 1]) and far.path(0, 1) == []


def test_eps_graph_is_closed():
    P = np.array([[0.0, 0], [0.5, 0]])
    assert len(build_eps_graph(P, 0.5).edges) == 1
    assert len(build_eps_graph(P, np.nextafter(0.5, 0)).edges) == 0
    with pytest.raises(ValueError):
        build_eps_graph(P, 0.0)


def test_coincident_points_are_at_distance_zero():
    P = np.array([[0.0, 0], [0.0, 0], [0.3, 0]])
    m = d_eps_metric(P, 0.5)
    assert m.matrix[0, 1] == 0.0
    assert np.array_equal(m.raw, relaxation_apsp(build_eps_graph(P, 0.5)))


@settings(max_examples=60)
@given(clouds, st.floats(0.05, 0.6))
def test_d_eps_is_a_metric_above_euclidean(P, eps):
    m = d_eps_metric(P, eps)
    M = m.matrix
    E = pairwise_distances(P)
    assert np.array_equal(M, M.T)
    assert np.all(np.diag(M) == 0)
    assert np.all(M >= E - 1e-12)
    finite = np.where(np.isfinite(M), M, 1e300)
    for k in range(len(M)):
        assert np.all(finite <= finite[:, k:k + 1] + finite[k:k + 1, :] + 1e-9)


@settings(max_examples=60)
@given(clouds, st.floats(0.05, 0.6))
def test_dijkstra_matches_relaxation_and_floyd(P, eps):
    g = build_eps_graph(P, eps)
    m = compute_d_eps(g)
    assert np.array_equal(m.raw, relaxation_apsp(g))
    assert np.allclose(np.where(np.isfinite(m.matrix), m.matrix, -1),
                       np.where(np.isfinite(m.matrix), oracles.floyd_warshall(g.weight_matrix()), -1))


def test_paths_realise_distances():
    rng = np.random.default_rng(3)
    P = rng.random((40, 2))
    m = d_eps_metric(P, 0.3)
    for i in range(0, 40, 7):
        for j in range(40):
            path = m.path(i, j)
            if not path:
                assert math.isinf(m.raw[i, j])
                continue
            hops = [np.linalg.norm(P[u] - P[v]) for u, v in zip(path, path[1:])]
            assert all(h <= 0.3 for h in hops)
            assert sum(hops) == pytest.approx(m.raw[i, j], abs=1e-12)


def test_intrinsic_rips_inside_euclidean_rips():
    rng = np.random.default_rng(1)
    P = rng.random((30, 2))
    m = d_eps_metric(P, 0.25)
    for alpha in (0.1, 0.3, 0.6):
        assert is_subcomplex(intrinsic_rips(P, m, alpha), rips_complex(pairwise_distances(P), alpha))
    with pytest.raises(ValueError):
        intrinsic_rips(P[:10], m, 0.1)


def test_path_covering_preconditions():
    spec = circle()
    s = sample_shape(spec, 200)
    with pytest.raises(ValueError):
        path_covering_check(spec, s.cloud, 0.1)
    with pytest.raises(ValueError, match="eps/3"):
        path_covering_check(spec, s.cloud, 0.03, dh_bound=s.dh_bound)


@pytest.mark.parametrize("seed", range(8))
def test_path_covering_with_final_hop_allowance(seed):
    # every hop but the last is charged to the geodesic; the last is below eps
    spec = circle()
    s = sample_shape(spec, 200)
    rep = path_covering_check(spec, s.cloud, 0.1, trials=300, seed=seed, dh_bound=s.dh_bound, slack=1.0)
    assert rep.violations == 0
    assert rep.max_hop < 0.1


def test_close_pairs_can_exceed_three_times_geodesic():
    # two nearby shape points whose nearest samples differ: d_L is tiny while
    # d_eps between the samples is one hop, so the ratio is unbounded
    spec = circle()
    s = sample_shape(spec, 200)
    gap = 2 * math.pi / 200
    x = np.array([[math.cos(0.5 * gap - 1e-4), math.sin(0.5 * gap - 1e-4)],
                  [math.cos(0.5 * gap + 1e-4), math.sin(0.5 * gap + 1e-4)]])
    m = d_eps_metric(s.cloud, 0.1)
    a = int(np.argmin(np.linalg.norm(s.cloud.points - x[0], axis=1)))
    b = int(np.argmin(np.linalg.norm(s.cloud.points - x[1], axis=1)))
    assert (a, b) == (0, 1)
    assert m.matrix[a, b] > 3 * 2e-4


def test_metric_csv_rows():
    rows = metric_to_csv_rows(np.array([[0.0, math.inf], [math.inf, 0.0]]))
    assert rows == ["0.0,inf", "inf,0.0"]
