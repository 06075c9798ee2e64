import math

import numpy as np
import pytest
from scipy.optimize import brentq

from floatillum.bodycore import Ball, cube
from floatillum.caps import segment_area
from floatillum.errors import EmptyIntersection
from floatillum.floating import (FloatingQuery, STATEMENT_THRESHOLD, THEOREM21_THRESHOLD,
                                 floating_membership, floating_outer_polytope, lemma27_ball_check,
                                 lemma27_radius, min_cap_through_point)
from floatillum.position import isotropic_transform, center_at_centroid


def disk_floating_radius(t):
    return 1 - brentq(lambda h: float(segment_area(h)) - t, 1e-12, 1.0, xtol=1e-15)


def test_thresholds():
    assert THEOREM21_THRESHOLD == pytest.approx(math.exp(-5) / 4)
    assert STATEMENT_THRESHOLD == pytest.approx(math.exp(-4) / 4)


def test_disk_floating_body_is_a_disk(disk):
    t = 0.05 * math.pi
    r = disk_floating_radius(t)
    Q = floating_outer_polytope(disk, 256, t=t, kind="regular")
    assert np.allclose(Q.b, r, atol=1e-9)
    # regular circumscribed polygon of the inner disk
    assert Q.volume_exact() == pytest.approx(256 * r * r * math.tan(math.pi / 256), rel=1e-9)


def test_membership_disk(disk):
    t = 0.05 * math.pi
    r = disk_floating_radius(t)
    q = FloatingQuery(disk, t)
    assert floating_membership(q, [0.0, 0.0]).kind == "inside"
    assert floating_membership(q, [r + 0.05, 0.0]).kind == "outside"
    assert floating_membership(q, [r - 0.05, 0.0]).kind == "inside"


def test_outside_certificate(square):
    t = 0.1
    x = np.array([0.95, 0.0])
    u, est = min_cap_through_point(square, x, t)
    assert est.value < t
    from floatillum.measure import cut_volumes
    vals, _ = cut_volumes(square, u[None, :], np.array([u @ x]))
    assert vals[0] == pytest.approx(est.value)


def test_square_floating_offsets_on_axes(square):
    t = 0.1
    Q = floating_outer_polytope(square, 4, t=t, directions=np.vstack([np.eye(2), -np.eye(2)]))
    assert np.allclose(Q.b, 1 - t / 2)


def test_empty_when_t_is_large(disk):
    with pytest.raises(EmptyIntersection):
        floating_outer_polytope(disk, 64, t=0.6 * math.pi, kind="regular")


def test_lemma27_radius_value():
    assert lemma27_radius(1.0, 3) == pytest.approx(1 / (24 * math.exp(5) * math.sqrt(math.pi)))


@pytest.mark.parametrize("d", [2, 3])
def test_lemma27_on_isotropic_cube(d):
    K = isotropic_transform(center_at_centroid(cube(d))).body
    K.name = "iso-cube"
    rep = lemma27_ball_check(K, 200)
    assert rep.status == "pass" and rep.margin > 0


def test_lemma27_unmet_off_center():
    rep = lemma27_ball_check(cube(2, center=[0.5, 0.0]), 50)
    assert rep.status == "hypothesis_unmet"
