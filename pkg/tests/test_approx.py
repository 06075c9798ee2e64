import json
import math

import numpy as np
import pytest

from floatillum.approx import (GreedyRun, ball_inscribed_polytope, circumscribed_facets,
                               greedy_inscribed, hausdorff_bound, lemma32_bound,
                               theorem21_count_bound)
from floatillum.bodycore import Ball, cube
from floatillum.caps import cap_offsets
from floatillum.errors import TargetTooLarge, Unbounded
from floatillum.seeding import make_rng, uniform_sphere


@pytest.fixture(scope="module")
def disk_run():
    return greedy_inscribed(Ball.unit(2), 1e-3 * math.pi, seed=3)


def test_greedy_sandwich(disk_run):
    P, run = disk_run
    K = Ball.unit(2)
    assert np.all(K.contains(P.vertices, 1e-12))
    U = uniform_sphere(make_rng(99, "check"), 500, 2)
    s = cap_offsets(K, U, run.t)
    assert np.all(P.support(U) >= s - 1e-6)
    assert run.terminated_by == "saturation"


def test_greedy_audit_and_round_trip(disk_run):
    _, run = disk_run
    assert run.audit() == []
    again = GreedyRun.from_dict(json.loads(run.to_json()))
    assert again.n == run.n
    assert np.allclose(again.vertices, run.vertices)


def test_greedy_deterministic():
    a = greedy_inscribed(cube(2), 4e-3, seed=5)[1]
    b = greedy_inscribed(cube(2), 4e-3, seed=5)[1]
    assert a.to_json() == b.to_json()


def test_greedy_square_caps_exclude_earlier_vertices(square):
    _, run = greedy_inscribed(square, 4e-3, seed=1)
    for k, cap in enumerate(run.caps):
        for j in range(k):
            assert run.vertices[j] @ cap.normal <= cap.base_offset + 1e-12


def test_greedy_rejects_large_t(disk):
    with pytest.raises(TargetTooLarge):
        greedy_inscribed(disk, 0.1 * math.pi)


def test_circumscribed():
    sq = circumscribed_facets(Ball.unit(2), np.vstack([np.eye(2), -np.eye(2)]))
    assert sq.volume_exact() == pytest.approx(4.0)
    cb = circumscribed_facets(Ball.unit(3), np.vstack([np.eye(3), -np.eye(3)]))
    assert cb.volume_exact() == pytest.approx(8.0)
    m = 12
    th = 2 * np.pi * np.arange(m) / m
    P = circumscribed_facets(Ball.unit(2), np.column_stack([np.cos(th), np.sin(th)]))
    assert P.volume_exact() == pytest.approx(m * math.tan(math.pi / m))
    with pytest.raises(Unbounded):
        circumscribed_facets(Ball.unit(2), np.eye(2))


def test_ball_inscribed():
    _, dh = ball_inscribed_polytope(2, 8)
    assert dh == pytest.approx(1 - math.cos(math.pi / 8))
    assert ball_inscribed_polytope(2, 3)[1] == pytest.approx(0.5)
    _, dh3 = ball_inscribed_polytope(3, 100, "fibonacci")
    assert dh3 <= hausdorff_bound(3, 100)
    P, dr = ball_inscribed_polytope(3, 60, "random", seed=2)
    assert np.allclose(np.linalg.norm(P.vertices, axis=1), 1.0)


def test_bound_values():
    assert hausdorff_bound(2, 8) == pytest.approx(64 / 7 * math.pi / 64)
    # for d = 3 the Lemma bound is (16/7) * 4 / n
    assert lemma32_bound(3, 10) == pytest.approx(16 / 7 * 4 / 10)
    assert theorem21_count_bound(2, 1.0, 1.0) == pytest.approx(math.exp(32) / math.pi)
