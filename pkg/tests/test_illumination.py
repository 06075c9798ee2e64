import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floatillum.bodycore import Ball, OracleView, cube, random_polytope, unit_ball_overshoot
from floatillum.illumination import (illumination_boundary_points, illumination_inner_polytope,
                                     illumination_membership, illumination_radius,
                                     illumination_volume_bounds, overshoot, overshoot_oracle,
                                     overshoot_polytope)


def test_square_overshoot_closed_forms(square):
    # beyond one edge: triangle over the edge of length 2
    assert overshoot_polytope(square, [1.5, 0.0]).value.value == pytest.approx(0.5)
    # beyond a corner by (a, b): a + b
    assert overshoot_polytope(square, [1.2, 1.3]).value.value == pytest.approx(0.5)
    assert overshoot_polytope(square, [0.2, 0.3]).value.value == 0.0


def test_cube_overshoot_is_pyramid():
    # pyramid of height 1 over a 2x2 face
    assert overshoot_polytope(cube(3), [2.0, 0.0, 0.0]).value.value == pytest.approx(4 / 3)


def test_ball_overshoot_oracle_matches_closed_form():
    est = overshoot_oracle(Ball.unit(2), np.array([1.5, 0.0]), samples=300_000, seed=2).value
    assert abs(est.value - float(unit_ball_overshoot(2, 1.5))) <= 3 * est.std_error


def test_polytope_overshoot_oracle_agrees(square):
    est = overshoot_oracle(OracleView(square), np.array([1.4, 0.7]), samples=300_000, seed=3).value
    # only the right edge is exceeded: 0.4 * 2 / 2
    assert abs(est.value - 0.4) <= 3 * est.std_error


def test_dispatch_prefers_exact(square):
    assert overshoot(square, [1.5, 0.0]).method == "facet_formula"


def test_square_illumination_boundary(square):
    t = 0.1
    pts = illumination_boundary_points(square, t, np.eye(2))
    assert np.allclose(pts, [[1 + t, 0], [0, 1 + t]], atol=1e-9)
    corner = illumination_boundary_points(square, t, np.array([[1.0, 1.0]]) / math.sqrt(2))[0]
    assert corner == pytest.approx([1 + t / 2, 1 + t / 2], abs=1e-9)


def test_square_illumination_volume(square):
    t = 0.1
    lo, hi, _ = illumination_volume_bounds(square, t, 256)
    exact = 8 * t + 2 * t * t
    assert lo <= exact + 1e-12 <= hi + 2e-12
    assert hi - lo < 1e-3


def test_disk_illumination_radius():
    t = 0.2
    R = illumination_radius(2, t)
    assert float(unit_ball_overshoot(2, R)) == pytest.approx(t, rel=1e-12)
    lo, hi, method = illumination_volume_bounds(Ball.unit(2), t)
    assert method == "closed_form" and lo == hi == pytest.approx(math.pi * (R * R - 1))


def test_membership(square):
    assert illumination_membership(square, 0.1, [1.05, 0.0])
    assert not illumination_membership(square, 0.1, [1.2, 0.0])


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_overshoot_convex_and_zero_inside(seed, d):
    P = random_polytope(d, seed)
    rng = np.random.default_rng(seed)
    X, Y = rng.uniform(-2, 2, (2, 20, d))
    f = lambda Z: np.atleast_1d(P.overshoot_exact(Z))
    assert np.all(f(0.5 * (X + Y)) <= 0.5 * (f(X) + f(Y)) + 1e-12)
    assert np.all(f(P.vertices) <= 1e-12)


@given(st.integers(0, 10 ** 6))
def test_inner_polytope_inside_illumination_body(seed):
    P = random_polytope(2, seed)
    t = 0.05 * P.volume_exact()
    inner = illumination_inner_polytope(P, t, 32, seed=1)
    assert np.all(np.atleast_1d(P.overshoot_exact(inner.vertices)) <= t * (1 + 1e-8))
