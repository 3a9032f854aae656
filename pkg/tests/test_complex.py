import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from georecon.complex import (
    Filtration,
    SimplicialComplex,
    cech_complex,
    cech_filtration,
    check_metric,
    intrinsic_cech_on_shape,
    intrinsic_rips_on_shape,
    is_subcomplex,
    rips_complex,
    rips_filtration,
    simplicial_map_defects,
)
from georecon.geometry import pairwise_distances
from georecon.shapes import circle, random_points_on

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
EQUILATERAL = np.array([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])

small_clouds = st.integers(1, 7).flatmap(
    lambda n: arrays(float, (n, 2), elements=st.floats(0, 1, allow_nan=False, width=32)))


def brute_rips(M, alpha, cap):
    n = len(M)
    out = set()
    for k in range(1, cap + 2):
        for s in itertools.combinations(range(n), k):
            if all(M[i, j] <= alpha for i, j in itertools.combinations(s, 2)):
                out.add(s)
    return out


def test_square_rips():
    M = pairwise_distances(SQUARE)
    K = rips_complex(M, 1.0)
    assert len(K.of_dim(0)) == 4 and len(K.of_dim(1)) == 4 and not K.of_dim(2)
    assert len(rips_complex(M, math.sqrt(2)).of_dim(2)) == 4
    # strict test drops the diameter-1 edges
    assert not rips_complex(M, 1.0, strict=True).of_dim(1)


def test_cech_is_open_and_uses_enclosing_radius():
    # unit sides are exact in floating point, so 0.5 sits on the boundary
    assert not cech_complex(SQUARE, 0.5).of_dim(1)
    assert len(cech_complex(SQUARE, 0.5 + 1e-12).of_dim(1)) == 4
    # right triangles have radius sqrt(2)/2, the hypotenuse midpoint
    assert not cech_complex(SQUARE, 0.7).of_dim(2)
    assert len(cech_complex(SQUARE, 0.71).of_dim(2)) == 4
    K = cech_complex(EQUILATERAL, 0.55)
    assert len(K.of_dim(1)) == 3 and not K.of_dim(2)
    assert len(cech_complex(EQUILATERAL, 0.58).of_dim(2)) == 1
    with pytest.raises(ValueError):
        cech_complex(EQUILATERAL, 0.0)


@settings(max_examples=60)
@given(small_clouds, st.floats(0, 1.5), st.integers(0, 3))
def test_rips_matches_brute_force(P, alpha, cap):
    M = pairwise_distances(P)
    assert rips_complex(M, alpha, cap).simplices == brute_rips(M, alpha, cap)


@settings(max_examples=60)
@given(small_clouds, st.floats(0.01, 1.0))
def test_filtrations_agree_with_complexes(P, alpha):
    M = pairwise_distances(P)
    f = rips_filtration(M, 1.5, 2)
    f.validate()
    assert f.complex_at(alpha) == rips_complex(M, alpha, 2)
    g = cech_filtration(P, 1.0, 2)
    g.validate()
    vals = g.values
    if np.all(np.abs(vals - alpha) > 1e-9):
        assert g.complex_at(alpha) == cech_complex(P, alpha, 2)


@settings(max_examples=60)
@given(small_clouds, st.floats(0.01, 1.0))
def test_cech_rips_interleave(P, alpha):
    M = pairwise_distances(P)
    C = cech_complex(P, alpha, 2)
    # an enclosing ball of radius < alpha has diameter < 2 alpha
    assert is_subcomplex(C, rips_complex(M, 2 * alpha, 2))
    # in the plane a set of diameter d fits in a ball of radius d / sqrt(3)
    assert is_subcomplex(rips_complex(M, alpha, 2), cech_complex(P, alpha / math.sqrt(3) * (1 + 1e-9) + 1e-12, 2))


def test_filtration_order_and_validation():
    f = Filtration([((0, 1), 1.0), ((0,), 0.0), ((1,), 0.0)], cap=1, alpha_max=1.0)
    assert f.simplices == [(0,), (1,), (0, 1)]
    with pytest.raises(ValueError):
        Filtration([((0,), 0.0), ((0, 1), 0.5), ((1,), 0.7)], cap=1, alpha_max=1.0)
    with pytest.raises(ValueError):
        Filtration([((0, 1), 0.5), ((0,), 0.0)], cap=1, alpha_max=1.0)
    # ties: lower dimension first, then lexicographic
    g = Filtration([((1, 2), 1.0), ((0, 2), 1.0), ((0,), 0.0), ((1,), 0.0), ((2,), 0.0), ((0, 1), 1.0)],
                   cap=1, alpha_max=1.0)
    assert g.simplices[3:] == [(0, 1), (0, 2), (1, 2)]
    back = Filtration.from_dict(g.to_dict())
    assert back.simplices == g.simplices and np.array_equal(back.values, g.values)


def test_cech_filtration_is_open():
    f = cech_filtration(SQUARE, 1.0, 2)
    assert not f.closed
    assert not f.complex_at(0.5).of_dim(1)
    assert len(f.complex_at(0.5 + 1e-12).of_dim(1)) == 4


def test_simplicial_complex_basics():
    K = SimplicialComplex.closure([(0, 1, 2)])
    assert len(K) == 7 and K.is_closed() and K.dimension == 2
    assert (2, 0) in K
    assert SimplicialComplex.from_dict(K.to_dict()) == K
    assert not SimplicialComplex([(0, 1)]).is_closed()
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 0)])
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 1, 2)], cap=1)


def test_check_metric_rejects():
    with pytest.raises(ValueError):
        check_metric([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        check_metric([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        check_metric([[0, 5, 1], [5, 0, 1], [1, 1, 0]], triangle=True)
    M = check_metric([[0, math.inf], [math.inf, 0]])
    assert rips_complex(M, 10.0).of_dim(1) == []


def test_simplicial_map_defects():
    K = SimplicialComplex.closure([(0, 1, 2)])
    L = SimplicialComplex.closure([(0, 1), (1, 2)])
    assert simplicial_map_defects(K, L, {0: 0, 1: 1, 2: 1}) == []
    assert simplicial_map_defects(K, L, {0: 0, 1: 1, 2: 2}) == [(0, 2), (0, 1, 2)]


def test_intrinsic_complexes_sit_inside_euclidean():
    spec = circle()
    A = random_points_on(spec, 12, seed=2)
    M = pairwise_distances(A)
    for alpha in (0.3, 0.7, 1.4):
        KL = intrinsic_rips_on_shape(spec, A, alpha)
        assert is_subcomplex(KL, rips_complex(M, alpha))
        assert is_subcomplex(rips_complex(M, alpha), intrinsic_rips_on_shape(spec, A, spec.distortion * alpha))
        CL = intrinsic_cech_on_shape(spec, A, alpha / 2)
        assert is_subcomplex(CL, cech_complex(A, alpha / 2))
