"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Runtime budgets are part of each criterion and are checked with wall-clock time.
"""
import math
import time

import numpy as np
import pytest

from floatillum import verify as V
from floatillum.approx import greedy_inscribed
from floatillum.bodycore import (Ball, box, cross_polytope, cube, random_polytope, regular_polygon,
                                 standard_simplex)
from floatillum.illumination import overshoot_oracle
from floatillum.measure import mc_volume
from floatillum.position import grunbaum_constant, grunbaum_ratios, isotropic_transform
from floatillum.bodycore import OracleView


def report(capsys, number, title, ok, elapsed, budget, detail=""):
    ok = ok and elapsed < budget
    line = (f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}  "
            f"[{elapsed:.1f}s / {budget:.0f}s] {detail}")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def all_pass(reports):
    return all(r.status == "pass" for r in reports)


def test_01_exact_volumetrics(capsys):
    t0 = time.perf_counter()
    errs = [abs(cube(3, half=0.5).volume_exact() - 1.0),
            abs(cross_polytope(3).volume_exact() - 4 / 3) / (4 / 3)]
    for n in range(3, 65):
        exact = n / 2 * math.sin(2 * math.pi / n)
        errs.append(abs(regular_polygon(n).volume_exact() - exact) / exact)
    worst = max(errs)
    report(capsys, 1, "exact volumetrics", worst <= 1e-10, time.perf_counter() - t0, 1,
           f"max rel err {worst:.2e}")


def test_02_grunbaum_suite(capsys):
    t0 = time.perf_counter()
    bodies = V.random_bodies(2, 100, 0) + V.random_bodies(3, 100, 0)
    reps = V.verify_grunbaum(bodies, 5, seed=0, sections=False)
    inside = True
    for r in reps:
        g = grunbaum_constant(r.params["d"])
        f = r.details["fraction"]
        inside &= g - 5e-3 <= f <= 1 - g + 5e-3
    tri = grunbaum_ratios(standard_simplex(2), np.array([1.0, 1.0]) / math.sqrt(2))
    f = tri.details["fraction"]
    tri_err = abs(min(f, 1 - f) - 4 / 9)
    ok = inside and all_pass(reps) and len(reps) == 1000 and tri_err <= 1e-9
    report(capsys, 2, "Grunbaum fractions", ok, time.perf_counter() - t0, 60,
           f"{len(reps)} cuts, triangle err {tri_err:.1e}")


def test_03_isotropic_transform(capsys):
    t0 = time.perf_counter()
    bodies = V.random_bodies(2, 50, 1) + V.random_bodies(3, 50, 1)
    reps = V.verify_lemma24(bodies, 20, seed=1)
    T = isotropic_transform(box([-2, -0.5], [2, 0.5])).transform
    rect = np.allclose(np.abs(T), np.diag([0.5, 2.0]), atol=1e-12)
    report(capsys, 3, "isotropic transform", all_pass(reps) and rect, time.perf_counter() - t0, 30,
           f"{len(reps)} bodies, min margin {min(r.min_margin() for r in reps):.2e}")


def test_04_lemma25_lemma26(capsys):
    t0 = time.perf_counter()
    bodies = V.corpus("default", seed=0, trials=10)
    r25 = V.verify_lemma25(bodies, 5, seed=0)
    r26 = V.verify_lemma26(bodies, seed=0)
    ball = [r for r in r26 if r.params["body"].startswith("ball")]
    eq = max(abs(r.details["relative_gap"]) for r in ball)
    ok = all_pass(r25) and all_pass(r26) and eq <= 1e-9
    report(capsys, 4, "Lemma 2.5 bracket, Lemma 2.6 bound", ok, time.perf_counter() - t0, 120,
           f"{len(r25)}+{len(r26)} reports, ball equality gap {eq:.1e}")


def test_05_lemma27(capsys):
    t0 = time.perf_counter()
    bodies = [K for d in (2, 3) for K in V.standard_bodies(d)[:3]]
    reps = V.verify_lemma27(bodies, 500, seed=0)
    margins = [r.margin for r in reps]
    ok = all_pass(reps) and min(margins) > 0
    report(capsys, 5, "Lemma 2.7 inscribed ball", ok, time.perf_counter() - t0, 120,
           f"min margin {min(margins):.4g}")


def test_06_theorem21(capsys):
    t0 = time.perf_counter()
    reps = [V.verify_theorem21(V.named(Ball.unit(2), "disk"), 1e-3 * math.pi, seed=0),
            V.verify_theorem21(V.named(cube(2), "square"), 1e-3 * 4.0, seed=0)]
    ns = [r.details["n"] for r in reps]
    report(capsys, 6, "Theorem 2.1 end to end", all_pass(reps), time.perf_counter() - t0, 300,
           f"n = {ns}, min margin {min(r.min_margin() for r in reps):.3g}")


def test_07_illumination_exactness(capsys):
    t0 = time.perf_counter()
    exact = V.verify_overshoot_exactness(50, seed=0)
    convex = V.verify_overshoot_convexity(1000, seed=0)
    worst = max(r.lhs for r in convex)
    fails = sum(r.status != "pass" for r in exact)
    ok = fails == 0 and all_pass(convex) and worst <= 1e-12
    report(capsys, 7, "illumination exactness", ok, time.perf_counter() - t0, 120,
           f"{fails}/50 pairs outside 3 sigma, worst convexity gap {worst:.1e}")


def test_08_theorem31(capsys):
    t0 = time.perf_counter()
    balls = [V.theorem31_report(V.named(Ball.unit(2), "ball2"), seed=0),
             V.theorem31_report(V.named(Ball.unit(3), "ball3"), seed=0)]
    square = V.theorem31_report(V.named(cube(2), "square"), seed=0)
    square_spec_t = V.theorem31_report(V.named(cube(2), "square"), 1e-4, seed=0)
    ok = all_pass(balls) and square.status == "hypothesis_unmet" \
        and square_spec_t.status == "hypothesis_unmet"
    detail = ", ".join(f"{r.params['body']} t={r.params['t']:.2g} n={r.params.get('n')}" for r in balls)
    report(capsys, 8, "Theorem 3.1 consistency", ok, time.perf_counter() - t0, 300,
           f"{detail}; square: {square.status}")


def test_09_hausdorff(capsys):
    t0 = time.perf_counter()
    reps = V.verify_hausdorff((3, 512), (50, 100, 200))
    reg = [r for r in reps if r.params["construction"] == "regular"]
    closed = max(abs(r.details["hausdorff"] - (1 - math.cos(math.pi / r.params["n"]))) for r in reg)
    eq32 = [c for r in reps for c in r.checks if c.claim == "Eq3.2"]
    ok = all_pass(eq32) and closed <= 1e-12 and len(eq32) == 513
    report(capsys, 9, "Hausdorff bound", ok, time.perf_counter() - t0, 60,
           f"{len(eq32)} polytopes, closed-form err {closed:.1e}")


def test_10_scaling(capsys):
    t0 = time.perf_counter()
    s2 = V.scaling_study(2, [8, 16, 32, 64, 128], seed=0)
    s3 = V.scaling_study(3, [32, 64, 128, 256, 512, 1024], seed=0)
    ok = s2.report.passed and s3.report.passed
    report(capsys, 10, "scaling study", ok, time.perf_counter() - t0, 600,
           f"slopes d=2 {s2.slope:.4f}, d=3 {s3.slope:.4f}")


def test_11_determinism(capsys):
    t0 = time.perf_counter()
    same = []
    K = random_polytope(2, 3)
    x = np.array([2.0, 0.5])
    a = overshoot_oracle(K, x, 200_000, seed=5, workers=1).value
    b = overshoot_oracle(K, x, 200_000, seed=5, workers=3).value
    same.append(a == b)
    same.append(mc_volume(OracleView(cube(3)), 300_000, 2, workers=1)
                == mc_volume(OracleView(cube(3)), 300_000, 2, workers=4))
    runs = [greedy_inscribed(cube(2), 4e-3, seed=9)[1].to_json() for _ in range(2)]
    same.append(runs[0] == runs[1])
    reps = [[r.to_json() for r in V.verify_grunbaum(V.random_bodies(3, 5, 2), 2, seed=2)]
            for _ in range(2)]
    same.append(reps[0] == reps[1])
    over = [[r.to_json() for r in V.verify_overshoot_exactness(3, samples=50_000, seed=4)]
            for _ in range(2)]
    same.append(over[0] == over[1])
    t21 = [V.verify_theorem21(V.named(cube(2), "square"), 4e-3, seed=1).to_json() for _ in range(2)]
    same.append(t21[0] == t21[1])
    report(capsys, 11, "determinism", all(same), time.perf_counter() - t0, 600,
           f"{sum(same)}/{len(same)} artifacts bit-identical")
