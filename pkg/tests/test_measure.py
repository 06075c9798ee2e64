import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floatillum.bodycore import Ball, OracleView, cube, random_polytope, regular_polygon, standard_simplex
from floatillum.measure import (estimates_to_csv, inertia, mc_volume, section_volume,
                                symmetric_difference, volume)


def test_exact_dispatch():
    est = volume(cube(3, half=0.5))
    assert est.exact and est.value == pytest.approx(1.0, rel=1e-12)
    assert est.std_error == 0.0


def test_mc_volume_within_three_sigma():
    est = mc_volume(Ball.unit(3), samples=200_000, seed=3)
    assert abs(est.value - 4 * math.pi / 3) <= 3 * est.std_error
    assert est.method == "montecarlo"


def test_mc_volume_deterministic():
    a = mc_volume(OracleView(cube(2)), samples=50_000, seed=9)
    b = mc_volume(OracleView(cube(2)), samples=50_000, seed=9)
    assert a == b


def test_oracle_body_falls_back_to_sampling():
    est = volume(OracleView(cube(2)), samples=100_000, seed=1)
    assert not est.exact
    assert abs(est.value - 4.0) <= 3 * est.std_error


def test_simplex_centroid_and_moments():
    S = standard_simplex(2)
    data = inertia(S)
    assert data.volume == pytest.approx(0.5)
    assert np.allclose(data.centroid, [1 / 3, 1 / 3])
    # int x^2 over the unit triangle is 1/12
    assert data.second_moment[0, 0] == pytest.approx(1 / 12)


def test_inertia_mc_matches_exact():
    K = random_polytope(2, 4)
    ex = inertia(K)
    mc = inertia(OracleView(K), mode="mc", samples=400_000, seed=2)
    assert np.allclose(mc.centroid, ex.centroid, atol=5e-3)


def test_sections():
    assert section_volume(cube(3), np.zeros(3), np.array([1.0, 0, 0])).value == pytest.approx(4.0)
    assert section_volume(Ball.unit(3), np.zeros(3), np.array([0, 0, 1.0])).value == pytest.approx(math.pi)
    assert section_volume(Ball.unit(2), np.array([0.6, 0]), np.array([1.0, 0])).value == pytest.approx(1.6)
    mc = section_volume(OracleView(cube(3)), np.zeros(3), np.array([1.0, 0, 0]), samples=100_000, seed=1)
    assert abs(mc.value - 4.0) <= 3 * mc.std_error


def test_symmetric_difference_polygon_in_disk():
    n = 16
    est = symmetric_difference(Ball.unit(2), regular_polygon(n))
    assert est.exact
    assert est.value == pytest.approx(math.pi - n / 2 * math.sin(2 * math.pi / n), rel=1e-12)


def test_symmetric_difference_sampled():
    est = symmetric_difference(OracleView(cube(2)), Ball.unit(2), samples=200_000, seed=5)
    assert abs(est.value - (4 - math.pi)) <= 3 * est.std_error


def test_csv_columns():
    text = estimates_to_csv([volume(cube(2))])
    assert text.splitlines()[0] == "value,std_error,samples,method,seed"


@given(st.integers(0, 10 ** 6))
def test_translation_moves_centroid(seed):
    from floatillum.bodycore import AffineImage

    P = random_polytope(3, seed)
    v = np.random.default_rng(seed).normal(size=3)
    moved = AffineImage(P, np.eye(3), v)
    assert np.allclose(inertia(moved).centroid, inertia(P).centroid + v, atol=1e-10)
    assert volume(moved).value == pytest.approx(volume(P).value, rel=1e-10)
