"""The frozen reference values agree with the independent routines that produced them."""

import math

import numpy as np

import oracles
from georecon.shapes import crossing_betti1, curve_crossings, lemniscate, lissajous


def test_lissajous_double_points_frozen():
    assert len(oracles.lissajous_double_points(3, 2)) == oracles.LISSAJOUS_32_DOUBLE_POINTS


def test_lissajous_numeric_crossings_match_exact_enumeration():
    exact = oracles.lissajous_double_points(3, 2)
    found = curve_crossings(lissajous().curve)
    assert len(found) == len(exact)
    for c in found:
        assert min(np.linalg.norm(c.point - e) for e in exact) < 1e-6
    assert crossing_betti1(lissajous().curve) == oracles.LISSAJOUS_32_BETTI1


def test_lemniscate_single_double_point():
    cs = curve_crossings(lemniscate().curve)
    assert len(cs) == 1
    assert np.linalg.norm(cs[0].point) < 1e-6
    # the two branches of the Bernoulli lemniscate cross at right angles
    assert abs(cs[0].angle - math.pi / 2) < 1e-4
    assert crossing_betti1(lemniscate().curve) == oracles.LEMNISCATE_BETTI1


def test_dense_rank_oracle_on_known_complexes():
    hollow = [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)]
    assert oracles.betti_by_dense_rank(hollow, 0) == 1
    assert oracles.betti_by_dense_rank(hollow, 1) == 1
    assert oracles.betti_by_dense_rank(hollow + [(0, 1, 2)], 1) == 0


def test_brute_meb_known_values():
    tri = np.array([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
    assert abs(oracles.brute_meb_radius(tri) - 1 / math.sqrt(3)) < 1e-12
    obtuse = np.array([[0, 0], [2, 0], [1, 0.2]])
    assert abs(oracles.brute_meb_radius(obtuse) - 1.0) < 1e-12
