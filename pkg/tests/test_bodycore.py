import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floatillum.bodycore import (AffineImage, Ball, Ellipsoid, HPolytope, OracleView, VPolytope,
                                 box, chebyshev_center, convex_hull, cross_polytope, cube,
                                 hpoly_vertices, random_polytope, regular_polygon, standard_simplex,
                                 unit_ball_volume, unit_cap_volume, unit_ball_overshoot)
from floatillum.errors import Degenerate, EmptyIntersection, NoExactPath, Unbounded


def test_unit_ball_volumes():
    assert unit_ball_volume(2) == pytest.approx(math.pi, rel=1e-14)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3, rel=1e-14)
    assert unit_ball_volume(4) == pytest.approx(math.pi ** 2 / 2, rel=1e-14)


def test_cap_volume_closed_forms():
    # spherical cap of height h in 3D: pi h^2 (3 - h) / 3
    for h in (0.1, 0.5, 1.3):
        assert unit_cap_volume(3, h) == pytest.approx(math.pi * h * h * (3 - h) / 3, rel=1e-12)
    h = 0.3
    assert unit_cap_volume(2, h) == pytest.approx(math.acos(1 - h) - (1 - h) * math.sqrt(2 * h - h * h))


def test_ball_overshoot_disk_closed_form():
    # tangent kite area minus the circular sector
    D = 2.0
    kite = math.sqrt(D * D - 1)
    sector = math.acos(1 / D)
    assert unit_ball_overshoot(2, D) == pytest.approx(kite - sector, rel=1e-12)
    assert unit_ball_overshoot(2, 0.5) == 0.0


def test_exact_volumes():
    assert cube(3).volume_exact() == pytest.approx(8.0, rel=1e-12)
    assert cube(3, half=0.5).volume_exact() == pytest.approx(1.0, rel=1e-12)
    assert cross_polytope(3).volume_exact() == pytest.approx(4 / 3, rel=1e-12)
    assert standard_simplex(3).volume_exact() == pytest.approx(1 / 6, rel=1e-12)
    for n in (3, 7, 64):
        assert regular_polygon(n).volume_exact() == pytest.approx(n / 2 * math.sin(2 * math.pi / n), rel=1e-12)


def test_support_and_contains():
    C = cube(3)
    assert C.support(np.array([1.0, 1, 1]) / math.sqrt(3)) == pytest.approx(math.sqrt(3))
    assert C.contains(np.array([[0.5, 0.5, 0.5], [1.5, 0, 0]])).tolist() == [True, False]
    B = Ball([1.0, 2.0], 3.0)
    assert B.support(np.array([0.0, 1.0])) == pytest.approx(5.0)


def test_hv_round_trip():
    P = random_polytope(3, 11)
    H = P.to_hpolytope()
    V = hpoly_vertices(H)
    assert V.volume_exact() == pytest.approx(P.volume_exact(), rel=1e-10)
    assert len(V.vertices) == len(P.vertices)


def test_redundant_points_dropped():
    pts = np.vstack([cube(2).vertices, [[0.0, 0.0], [0.5, 0.2]]])
    V, H = convex_hull(pts)
    assert V.n_vertices == 4
    assert H.n_facets == 4


def test_degenerate_hull():
    with pytest.raises(Degenerate):
        VPolytope([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])


def test_unbounded_and_empty():
    with pytest.raises(Unbounded):
        hpoly_vertices(HPolytope([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]], [1.0, 1.0, 1.0]))
    with pytest.raises(EmptyIntersection):
        chebyshev_center(np.array([[1.0, 0], [-1.0, 0], [0, 1.0], [0, -1.0]]),
                         np.array([-1.0, -1.0, 1.0, 1.0]))


def test_oracle_view_has_no_exact_paths():
    K = OracleView(cube(2))
    with pytest.raises(NoExactPath):
        K.volume_exact()
    assert K.contains(np.zeros(2))[0]


def test_affine_image_volume_and_moments():
    T = np.array([[2.0, 0.3], [0.0, 0.5]])
    A = AffineImage(cube(2), T, [1.0, -1.0])
    assert A.volume_exact() == pytest.approx(4.0 * abs(np.linalg.det(T)))
    V, c, _ = A.moments_exact()
    assert np.allclose(c, [1.0, -1.0])
    E = Ellipsoid([0.0, 0.0], np.diag([4.0, 1.0]))
    assert E.volume_exact() == pytest.approx(2 * math.pi)


@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3]))
def test_random_polytope_contains_vertices_and_centroid(seed, d):
    P = random_polytope(d, seed)
    assert np.all(P.contains(P.vertices, 1e-9))
    _, c, _ = P.moments_exact()
    assert P.contains(c)[0]
    # support in a direction is attained at a vertex
    u = np.ones(d) / math.sqrt(d)
    assert P.support(u) == pytest.approx(float((P.vertices @ u).max()))


@given(st.integers(0, 10 ** 6))
def test_hpoly_contains_agrees_with_vpoly(seed):
    P = random_polytope(2, seed)
    H = P.to_hpolytope()
    X = np.random.default_rng(seed).uniform(-1.2, 1.2, (200, 2))
    assert np.array_equal(P.contains(X), H.contains(X))


def test_box_volume():
    assert box([0, 0, 0], [1, 2, 3]).volume_exact() == pytest.approx(6.0)
