import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from floatillum.bodycore import Ball, OracleView, cube, random_polytope
from floatillum.caps import cap_contains, cap_offsets, cap_volume, segment_area, solve_cap_depth
from floatillum.errors import NotSupporting, TargetTooLarge

E1 = np.array([1.0, 0.0])


def test_half_disk(disk):
    assert cap_volume(disk, E1, E1, 1.0).value == pytest.approx(math.pi / 2, rel=1e-12)


def test_segment_formula(disk):
    for h in (0.05, 0.3, 0.9):
        assert cap_volume(disk, E1, E1, h).value == pytest.approx(float(segment_area(h)), rel=1e-12)


def test_segment_formula_against_sampling(disk):
    mc = cap_volume(OracleView(disk), E1, E1, 0.3, mode="mc", samples=400_000, seed=1)
    assert abs(mc.value - float(segment_area(0.3))) <= 3 * mc.std_error


def test_cube_slab():
    C = cube(3, half=0.5, center=[0.5, 0.5, 0.5])
    x = np.array([1.0, 0.5, 0.5])
    assert cap_volume(C, x, np.eye(3)[0], 0.25).value == pytest.approx(0.25)
    cap = solve_cap_depth(C, x, np.eye(3)[0], 0.1)
    assert cap.depth == pytest.approx(0.1, abs=1e-10)


def test_solve_half_disk(disk):
    cap = solve_cap_depth(disk, E1, E1, math.pi / 2)
    assert cap.depth == pytest.approx(1.0, abs=1e-9)


def test_solve_disk_small_cap_matches_inverted_segment(disk):
    # oracle: invert the segment-area formula independently
    h = brentq(lambda h: float(segment_area(h)) - 0.1, 1e-9, 1.0, xtol=1e-15)
    cap = solve_cap_depth(disk, E1, E1, 0.1)
    assert cap.depth == pytest.approx(h, abs=1e-9)
    assert cap.achieved_volume.value == pytest.approx(0.1, rel=1e-9)


def test_errors(disk):
    with pytest.raises(NotSupporting):
        cap_volume(disk, np.array([0.5, 0.0]), E1, 0.1)
    with pytest.raises(TargetTooLarge):
        solve_cap_depth(disk, E1, E1, 4.0)


def test_open_cap_membership(disk):
    cap = solve_cap_depth(disk, E1, E1, float(segment_area(0.5)))
    assert cap_contains(cap, [0.9, 0.0], disk)
    assert not cap_contains(cap, [0.0, 0.0], disk)
    assert not cap_contains(cap, [0.5, 0.0], disk)


def test_offsets_for_disk_are_uniform(disk):
    U = np.array([[math.cos(a), math.sin(a)] for a in np.linspace(0, 6, 17)])
    s = cap_offsets(disk, U, 0.1)
    h = brentq(lambda h: float(segment_area(h)) - 0.1, 1e-9, 1.0, xtol=1e-15)
    assert np.allclose(s, 1 - h, atol=1e-9)


@given(st.integers(0, 10 ** 6))
def test_cap_volume_monotone_in_depth(seed):
    P = random_polytope(2, seed)
    u = np.random.default_rng(seed).normal(size=2)
    u /= np.linalg.norm(u)
    x = P.support_point(u)
    width = P.support(u) + P.support(-u)
    vals = [cap_volume(P, x, u, dlt).value for dlt in np.linspace(0, width, 50)]
    assert np.all(np.diff(vals) >= -1e-12)
    assert vals[-1] == pytest.approx(P.volume_exact(), rel=1e-9)


@given(st.integers(0, 10 ** 6), st.floats(0.01, 0.4))
def test_solved_cap_hits_target(seed, frac):
    P = random_polytope(3, seed)
    u = np.random.default_rng(seed).normal(size=3)
    u /= np.linalg.norm(u)
    x = P.support_point(u)
    t = frac * P.volume_exact()
    cap = solve_cap_depth(P, x, u, t)
    assert cap.achieved_volume.value == pytest.approx(t, rel=1e-8)
