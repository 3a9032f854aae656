import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from georecon.complex import SimplicialComplex, cech_filtration, rips_complex, rips_filtration
from georecon.geometry import pairwise_distances
from georecon.homology import (
    PersistenceDiagram,
    betti,
    compute_persistence,
    gf2_rank,
    image_rank_oracle,
    persistent_betti,
    reconstruct_homology,
    sparse_gf2_rank,
    theorem_scales,
)
from georecon.shapes import circle, sample_shape

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)

clouds = st.integers(2, 7).flatmap(
    lambda n: arrays(float, (n, 2), elements=st.floats(0, 1, allow_nan=False, width=32)))


def square_diagram():
    return compute_persistence(rips_filtration(pairwise_distances(SQUARE), 2.0, 2))


def test_square_barcode():
    d = square_diagram()
    assert [(iv.dim, iv.birth, iv.death) for iv in d.in_dim(1)] == oracles.SQUARE_H1
    assert [iv.death for iv in d.in_dim(0)] == [1.0, 1.0, 1.0, math.inf]
    assert persistent_betti(d, 1, 1.0, 1.2) == 1
    assert persistent_betti(d, 1, 1.0, 1.5) == 0
    assert persistent_betti(d, 0, 0.5, 0.9) == 4
    assert "1 1.0 1.4142135623730951" in d.to_lines()


def test_persistent_betti_errors():
    d = square_diagram()
    with pytest.raises(ValueError):
        persistent_betti(d, 1, 1.2, 1.0)
    with pytest.raises(ValueError):
        persistent_betti(d, 1, 1.0, 3.0)
    with pytest.raises(ValueError):
        persistent_betti(d, 2, 1.0, 1.5)


def test_diagram_round_trip():
    d = square_diagram()
    back = PersistenceDiagram.from_dict(d.to_dict())
    assert back.intervals == d.intervals
    assert back.to_lines() == d.to_lines()


@settings(max_examples=50)
@given(clouds)
def test_clearing_leaves_pairs_unchanged(P):
    f = rips_filtration(pairwise_distances(P), 2.0, 2)
    a, b = compute_persistence(f, clearing=True), compute_persistence(f, clearing=False)
    assert a.pairs == b.pairs and a.intervals == b.intervals


@settings(max_examples=60)
@given(clouds, st.floats(0.0, 1.0), st.floats(0.0, 0.5))
def test_persistent_betti_matches_image_rank(P, s, gap):
    t = s + gap
    f = rips_filtration(pairwise_distances(P), 1.5, 2)
    d = compute_persistence(f)
    Ks, Kt = f.complex_at(s), f.complex_at(t)
    for k in (0, 1):
        assert persistent_betti(d, k, s, t) == image_rank_oracle(Ks, Kt, k)


@settings(max_examples=40)
@given(clouds, st.floats(0.01, 0.7), st.floats(0.0, 0.3))
def test_open_convention_matches_image_rank(P, s, gap):
    t = s + gap
    f = cech_filtration(P, 1.0, 2)
    d = compute_persistence(f)
    for k in (0, 1):
        assert persistent_betti(d, k, s, t) == image_rank_oracle(f.complex_at(s), f.complex_at(t), k)


@settings(max_examples=60)
@given(clouds, st.floats(0.0, 1.5))
def test_betti_matches_dense_oracle(P, alpha):
    K = rips_complex(pairwise_distances(P), alpha, 2)
    for k in (0, 1, 2):
        assert betti(K, k) == oracles.betti_by_dense_rank(K.simplices, k)


def test_betti_of_spheres():
    hollow_tet = SimplicialComplex.closure([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    assert [betti(hollow_tet, k) for k in (0, 1, 2)] == [1, 0, 1]
    with pytest.raises(ValueError):
        betti(hollow_tet, 3)


def test_sparse_rank_matches_bitset_rank():
    rng = np.random.default_rng(0)
    for _ in range(50):
        rows, ncols = int(rng.integers(1, 30)), int(rng.integers(1, 40))
        cols = [sorted(set(rng.integers(0, rows, size=int(rng.integers(0, 4))).tolist())) for _ in range(ncols)]
        ints = [sum(1 << r for r in c) for c in cols]
        assert sparse_gf2_rank(cols) == gf2_rank(ints)


def test_theorem_scales():
    assert theorem_scales("rips", 0.25, math.pi / 2) == (0.25, 0.5 * (1.5 * math.pi + 1) * 0.25)
    assert theorem_scales("cech", 0.06, 2.0) == (0.06, 9 * 0.06)
    with pytest.raises(ValueError):
        theorem_scales("alpha", 0.1, 1.0)


def test_reconstruct_homology_checks_before_computing():
    spec = circle()
    s = sample_shape(spec, 120)
    with pytest.raises(ValueError, match="eps/4 >= rho"):
        reconstruct_homology(s.cloud, 0.4, spec.distortion, spec.convexity_radius, s.dh_bound)
    out = reconstruct_homology(s.cloud, 0.25, spec.distortion, spec.convexity_radius, s.dh_bound)
    assert out.betti == {0: 1, 1: 1}
    assert out.check.passed
