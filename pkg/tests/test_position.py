import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floatillum.bodycore import Ball, box, cube, random_polytope, standard_simplex
from floatillum.errors import IllConditioned
from floatillum.measure import inertia
from floatillum.position import (center_at_centroid, grunbaum_constant, grunbaum_ratios,
                                 isotropic_transform, max_section, theta)


def test_grunbaum_constant():
    assert grunbaum_constant(2) == pytest.approx(4 / 9)
    assert grunbaum_constant(3) == pytest.approx(27 / 64)


def test_triangle_equality_case():
    # halfspace through the centroid parallel to a side of the triangle
    S = standard_simplex(2)
    rep = grunbaum_ratios(S, np.array([1.0, 1.0]) / math.sqrt(2))
    frac = rep.details["fraction"]
    assert min(frac, 1 - frac) == pytest.approx(4 / 9, abs=1e-9)
    assert rep.status == "pass"


def test_rectangle_isotropic_transform():
    res = isotropic_transform(box([-2, -0.5], [2, 0.5]))
    assert np.allclose(np.abs(res.transform), np.diag([0.5, 2.0]), atol=1e-12)
    assert res.ok


def test_ill_conditioned():
    with pytest.raises(IllConditioned):
        isotropic_transform(box([-1, -1e-7], [1, 1e-7]))


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_isotropic_transform_properties(seed, d):
    K = center_at_centroid(random_polytope(d, seed))
    res = isotropic_transform(K)
    assert abs(np.linalg.det(res.transform) - 1) <= 1e-12
    assert res.residual <= 1e-9
    data = inertia(res.body)
    assert np.linalg.norm(data.centroid) <= 1e-10
    assert data.volume == pytest.approx(inertia(K).volume, rel=1e-10)


def test_max_section_of_ball():
    val, err, at = max_section(Ball.unit(3), np.array([0, 0, 1.0]))
    assert val == pytest.approx(math.pi, rel=1e-9)
    assert abs(at) < 1e-6


def test_theta_cube_is_full_width():
    # sections of the centered cube are constant, so the factor e is never reached
    th = theta(cube(2), np.array([1.0, 0.0]))
    assert th.theta == pytest.approx(1.0)


def test_theta_disk():
    # chord 2 sqrt(1 - s^2) = 2 / e
    th = theta(Ball.unit(2), np.array([0.0, 1.0]))
    assert th.theta == pytest.approx(math.sqrt(1 - math.exp(-2)), abs=1e-9)


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_grunbaum_on_random_polytopes(seed, d):
    P = random_polytope(d, seed)
    xi = np.random.default_rng(seed).normal(size=d)
    rep = grunbaum_ratios(P, xi / np.linalg.norm(xi), scan=16)
    assert rep.status == "pass"
