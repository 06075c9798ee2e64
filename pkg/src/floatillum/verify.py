"""Experiment harness: corpora, per-claim checks, the scaling study and report rendering.

Each claim id maps to a runner returning a list of :class:`Report`.  Runners
are deterministic in their seed: random bodies and directions are derived from
it with :func:`seeding.derive_seed`.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .approx import (ball_inscribed_polytope, circumscribed_facets, greedy_inscribed,
                     hausdorff_bound, lemma32_bound, theorem21_count_bound)
from .bodycore import (AffineImage, Ball, ConvexBody, HPolytope, Polytope, as_polytope, cube,
                       cross_polytope, hpoly_vertices, is_polytope, random_polytope,
                       sphere_area, standard_simplex, unit_ball_volume)
from .caps import cap_offsets
from .directions import sphere_directions
from .errors import WindowEmpty
from .floating import floating_outer_polytope, lemma27_ball_check
from .illumination import (illumination_volume_bounds, overshoot_oracle, overshoot_polytope)
from .measure import inertia, mc_volume, symmetric_difference, volume
from .position import (center_at_centroid, grunbaum_constant, grunbaum_ratios,
                       isotropic_transform, max_section, section_profile, theta)
from .report import FAIL, PASS, UNMET, Report, bundle
from .seeding import derive_seed, make_rng, uniform_sphere

THEOREM31_CONSTANT = 1e7


# ---------------------------------------------------------------------------
# corpora
# ---------------------------------------------------------------------------

def named(K: ConvexBody, name: str) -> ConvexBody:
    K.name = name
    return K


def standard_bodies(d: int) -> list[ConvexBody]:
    return [named(Ball.unit(d), f"ball{d}"), named(cube(d), f"cube{d}"),
            named(standard_simplex(d), f"simplex{d}"), named(cross_polytope(d), f"cross{d}")]


def random_bodies(d: int, count: int, seed: int) -> list[ConvexBody]:
    return [named(random_polytope(d, derive_seed(seed, "corpus", d, i)), f"random{d}-{i}")
            for i in range(count)]


def corpus(name: str = "default", seed: int = 0, trials: int = 10, dims=(2, 3)) -> list[ConvexBody]:
    """``default``: standard bodies plus ``trials`` random hulls per dimension."""
    bodies = []
    for d in dims:
        if name in ("default", "standard"):
            bodies += standard_bodies(d)
        if name in ("default", "random"):
            bodies += random_bodies(d, trials, seed)
    if not bodies:
        raise ValueError(f"unknown corpus {name!r}")
    return bodies


def normalized(K: ConvexBody) -> AffineImage:
    """Centered, isotropic image of ``K``."""
    iso = isotropic_transform(center_at_centroid(K))
    B = iso.body
    B.name = f"iso({K.name})"
    return B


def _directions(d: int, count: int, seed: int, key: str) -> np.ndarray:
    return uniform_sphere(make_rng(seed, key, d), count, d)


# ---------------------------------------------------------------------------
# section 1: overshoot formula and convexity
# ---------------------------------------------------------------------------

def external_point(P: Polytope, rng: np.random.Generator) -> np.ndarray:
    o = P.interior_point()
    u = uniform_sphere(rng, 1, P.dim)[0]
    return o + rng.uniform(1.05, 1.6) * P.ray_exit(o, u) * u


def verify_overshoot_exactness(pairs: int = 50, dims=(2, 3), samples: int = 200_000,
                               seed: int = 0) -> list[Report]:
    """Facet formula versus sampled overshoot on random (polytope, external point) pairs."""
    out = []
    for i in range(pairs):
        d = dims[i % len(dims)]
        P = random_polytope(d, derive_seed(seed, "overshoot-body", i))
        x = external_point(P, make_rng(seed, "overshoot-point", i))
        exact = overshoot_polytope(P, x).value.value
        mc = overshoot_oracle(P, x, samples, derive_seed(seed, "overshoot-mc", i)).value
        out.append(Report("Sec1.overshoot", {"body": f"random{d}-{i}", "d": d, "seed": seed,
                                             "samples": samples, "point": x},
                          lhs=abs(exact - mc.value), rhs=3 * mc.std_error,
                          details={"exact": exact, "montecarlo": mc.value,
                                   "std_error": mc.std_error}))
    return out


def verify_overshoot_convexity(pairs: int = 1000, dims=(2, 3), seed: int = 0,
                               tol: float = 1e-12) -> list[Report]:
    """Midpoint convexity of the facet formula on random point pairs."""
    out = []
    for d in dims:
        worst, count = -np.inf, 0
        per_body = max(pairs // (len(dims) * 10), 1)
        for b in range(10):
            P = random_polytope(d, derive_seed(seed, "convexity-body", d, b))
            rng = make_rng(seed, "convexity-points", d, b)
            X = rng.uniform(-2, 2, (per_body, d))
            Y = rng.uniform(-2, 2, (per_body, d))
            f = lambda Z: np.atleast_1d(P.overshoot_exact(Z))
            gap = f(0.5 * (X + Y)) - 0.5 * (f(X) + f(Y))
            worst = max(worst, float(gap.max()))
            count += per_body
        out.append(Report("Sec1.convexity", {"d": d, "pairs": count, "seed": seed},
                          lhs=worst, rhs=0.0, tolerance=tol))
    return out


# ---------------------------------------------------------------------------
# section 2 lemmas
# ---------------------------------------------------------------------------

def verify_grunbaum(bodies, directions: int = 5, seed: int = 0, sections: bool = True) -> list[Report]:
    out = []
    for i, K in enumerate(bodies):
        for xi in _directions(K.dim, directions, derive_seed(seed, "grunbaum", i), "dirs"):
            rep = grunbaum_ratios(K, xi, seed=seed) if sections else centroid_fraction_report(K, xi, seed)
            out.append(rep)
    return out


def centroid_fraction_report(K: ConvexBody, xi, seed: int = 0) -> Report:
    """Only the halfspace-fraction part of :func:`position.grunbaum_ratios`."""
    from .measure import cut_volumes

    d = K.dim
    data = inertia(K, seed=seed)
    vals, errs = cut_volumes(K, xi[None, :], np.array([data.centroid @ xi]), seed=seed)
    frac = float(vals[0] / data.volume)
    ftol = float(3 * errs[0] / data.volume) if errs[0] > 0 else 1e-12
    g = grunbaum_constant(d)
    params = {"body": K.name, "d": d, "direction": xi, "seed": seed}
    return bundle("Lemma2.2", [
        Report("Lemma2.2i", params, lhs=g, rhs=frac, tolerance=ftol),
        Report("Lemma2.2i", params, lhs=frac, rhs=1 - g, tolerance=ftol),
        Report("Eq2.1", params, lhs=1 / math.e, rhs=frac, tolerance=ftol),
        Report("Eq2.1", params, lhs=frac, rhs=1 - 1 / math.e, tolerance=ftol),
    ], params, fraction=frac)


def verify_lemma23(bodies, directions: int = 5, seed: int = 0) -> list[Report]:
    """``vol/(2e^3) <= Θ(ξ) * central section <= e * vol`` on centered bodies."""
    out = []
    for i, K in enumerate(bodies):
        C = center_at_centroid(K)
        V = volume(C).value
        for xi in _directions(K.dim, directions, derive_seed(seed, "lemma23", i), "dirs"):
            th = theta(C, xi)
            prod = th.theta * th.central_section
            params = {"body": K.name, "d": K.dim, "direction": xi, "seed": seed}
            tol = 1e-9 * V
            out.append(bundle("Lemma2.3", [
                Report("Lemma2.3", params, lhs=V / (2 * math.e ** 3), rhs=prod, tolerance=tol),
                Report("Lemma2.3", params, lhs=prod, rhs=math.e * V, tolerance=tol),
            ], params, theta=th.theta, central_section=th.central_section, volume=V))
    return out


def verify_lemma24(bodies, directions: int = 100, seed: int = 0) -> list[Report]:
    """``det T = 1``, scalar second moment and equal directional moments after the transform."""
    out = []
    for i, K in enumerate(bodies):
        iso = isotropic_transform(center_at_centroid(K))
        M = inertia(iso.body).second_moment
        mean = np.trace(M) / K.dim
        U = _directions(K.dim, directions, derive_seed(seed, "lemma24", i), "dirs")
        directional = np.einsum("ij,jk,ik->i", U, M, U)
        params = {"body": K.name, "d": K.dim, "seed": seed}
        out.append(bundle("Lemma2.4", [
            Report("Lemma2.4", params, lhs=abs(np.linalg.det(iso.transform) - 1), rhs=0.0,
                   tolerance=1e-12, details={"check": "det"}),
            Report("Lemma2.4", params, lhs=iso.residual, rhs=0.0, tolerance=1e-9,
                   details={"check": "off-diagonal"}),
            Report("Lemma2.4", params, lhs=float(np.abs(directional / mean - 1).max()), rhs=0.0,
                   tolerance=1e-9, details={"check": "directional"}),
        ], params, transform=iso.transform))
    return out


def lemma25_terms(K: ConvexBody, xi) -> tuple[float, float]:
    """``(vol, section(0, ξ)^2 * (1/d) int |x|^2)`` for a centered body."""
    data = inertia(K)
    sec = float(section_profile(K, xi, 0.0)[0][0])
    return data.volume, sec * sec * np.trace(data.second_moment) / K.dim


def verify_lemma25(bodies, directions: int = 5, seed: int = 0) -> list[Report]:
    out = []
    for i, K in enumerate(bodies):
        B = normalized(K)
        for xi in _directions(K.dim, directions, derive_seed(seed, "lemma25", i), "dirs"):
            V, mid = lemma25_terms(B, xi)
            params = {"body": B.name, "d": K.dim, "direction": xi, "seed": seed}
            tol = 1e-9 * V ** 3
            out.append(bundle("Lemma2.5", [
                Report("Lemma2.5", params, lhs=V ** 3 / (24 * math.e ** 10), rhs=mid, tolerance=tol),
                Report("Lemma2.5", params, lhs=mid, rhs=6 * math.e ** 3 * V ** 3, tolerance=tol),
            ], params, volume=V, middle=mid))
    return out


def lemma26_terms(K: ConvexBody) -> tuple[float, float]:
    """``((1/d) int |x|^2, d^{2/d}/(d+2) * |S^{d-1}|^{-2/d} * vol^{(d+2)/d})``."""
    d = K.dim
    data = inertia(K)
    lhs = float(np.trace(data.second_moment)) / d
    rhs = d ** (2 / d) / (d + 2) * sphere_area(d) ** (-2 / d) * data.volume ** ((d + 2) / d)
    return lhs, rhs


def verify_lemma26(bodies, seed: int = 0) -> list[Report]:
    out = []
    for K in bodies:
        C = center_at_centroid(K)
        moment, bound = lemma26_terms(C)
        out.append(Report("Lemma2.6", {"body": K.name, "d": K.dim, "seed": seed}, lhs=bound,
                          rhs=moment, tolerance=1e-9 * bound,
                          details={"relative_gap": moment / bound - 1}))
    return out


def verify_lemma27(bodies, directions: int = 500, seed: int = 0) -> list[Report]:
    return [lemma27_ball_check(normalized(K), directions, seed) for K in bodies]


# ---------------------------------------------------------------------------
# Theorem 2.1
# ---------------------------------------------------------------------------

def volume_outside(K: ConvexBody, Q: Polytope, samples: int = 10 ** 6, seed: int = 0):
    """``vol(K \\ Q)`` and its standard error."""
    V = volume(K, samples, seed)
    if np.all(K.contains(Q.vertices, 1e-12 * K.scale)) and V.exact:
        return V.value - Q.volume_exact(), 0.0
    if is_polytope(K):
        P = as_polytope(K)
        both = HPolytope(np.vstack([P.A, Q.A]), np.concatenate([P.b, Q.b]))
        return V.value - hpoly_vertices(both).volume_exact(), 0.0
    est = symmetric_difference(K, Q, samples, seed)
    return est.value, est.std_error


def verify_theorem21(K: ConvexBody, t: float, seed: int = 0, check_directions: int = 2000,
                     outer_directions: int = 2000, rejection_streak_limit: int = 200,
                     slack: float = 1e-6, **greedy_kw) -> Report:
    """Greedy construction plus the sandwich, count and volume checks.

    The inclusion of ``K_t`` is checked in support form: for sampled ``u``,
    ``h_{P_n}(u) >= s(u) - slack`` where ``s(u)`` is the offset of the
    ``t``-cap, which bounds ``h_{K_t}(u)`` from above.  ``vol(K \\ K_t)`` is
    replaced by ``vol(K \\ Q)`` for the floating outer polytope ``Q``, which
    can only make both volume checks harder.
    """
    d = K.dim
    P, run = greedy_inscribed(K, t, seed, rejection_streak_limit, **greedy_kw)
    params = {"body": K.name, "d": d, "t": t, "n": run.n, "seed": seed,
              "check_directions": check_directions, "outer_directions": outer_directions}
    scale = max(1.0, K.scale)
    member = K.contains(P.vertices, 1e-12 * scale)
    U = uniform_sphere(make_rng(seed, "thm21-check", d), check_directions, d)
    s = cap_offsets(K, U, t)
    gap_b = float(np.max(s - P.support(U)))
    support_gap = float(np.max(np.abs(np.array([K.support(c.normal) - c.anchor @ c.normal
                                                for c in run.caps]))))
    Q = floating_outer_polytope(K, outer_directions, t=t, seed=derive_seed(seed, "thm21-outer"))
    out_vol, out_err = volume_outside(K, Q, seed=seed)
    V = volume(K).value
    bound = theorem21_count_bound(d, out_vol, t)
    loss = V - P.volume_exact()
    checks = [
        Report("Thm2.1", params, lhs=float(np.sum(~member)), rhs=0.0,
               details={"check": "(a) vertices in K", "support_gap": support_gap}),
        Report("Thm2.1", params, lhs=support_gap, rhs=0.0, tolerance=1e-9 * scale,
               details={"check": "(a) support consistency"}),
        Report("Thm2.1", params, lhs=gap_b, rhs=0.0, tolerance=slack,
               details={"check": "(b) K_t inside P_n (support form)"}),
        Report("Eq2.4", params, lhs=float(run.n), rhs=bound,
               details={"check": "(c) vertex count", "vol_K_minus_Q": out_vol}),
        Report("Thm2.1", params, lhs=loss, rhs=out_vol, tolerance=3 * out_err,
               details={"check": "(d) vol(K \\ P_n) <= vol(K \\ K_t)"}),
        Report("Thm2.1", params, lhs=float(len(run.audit(scale))), rhs=0.0,
               details={"check": "cap audit"}),
    ]
    return bundle("Thm2.1", checks, params, n=run.n, terminated_by=run.terminated_by,
                  candidates=run.candidates, sweep_accepts=run.sweep_accepts, count_bound=bound,
                  vol_K_minus_Pn=loss, vol_K_minus_Q=out_vol)


# ---------------------------------------------------------------------------
# Theorem 3.1
# ---------------------------------------------------------------------------

def sandwich_constants(K: ConvexBody, directions: int = 20000) -> tuple[float, float, str]:
    """``c1, c2`` with ``B/c1 in K in c2 B`` about the origin (best possible)."""
    if is_polytope(K):
        P = as_polytope(K)
        inner = float(P.b.min())
        return 1.0 / inner, float(np.linalg.norm(P.vertices, axis=1).max()), "exact"
    if isinstance(K, Ball):
        r, c = K.radius, np.linalg.norm(K.center)
        return 1.0 / (r - c), r + c, "exact"
    if isinstance(K, AffineImage) and isinstance(K.base, Ball) and np.allclose(K.v, 0) \
            and np.allclose(K.base.center, 0):
        sv = np.linalg.svd(K.T, compute_uv=False) * K.base.radius
        return 1.0 / sv[-1], sv[0], "exact"
    U = sphere_directions(K.dim, directions, "spread")
    h = np.atleast_1d(K.support(U))
    return 1.0 / float(h.min()), float(h.max()), "sampled"


def theorem31_window(d: int, gap_lower: float, t: float) -> tuple[int, int]:
    """Admissible facet counts ``[(128 pi/7)^{(d-1)/2}, gap / (32 e d t)]`` (integers)."""
    lo = math.ceil((128 * math.pi / 7) ** ((d - 1) / 2))
    hi = math.floor(gap_lower / (32 * math.e * d * t))
    return lo, hi


def theorem31_t_threshold(K: ConvexBody) -> float:
    c1, c2, _ = sandwich_constants(K)
    return (5 * c1 * c2) ** (-K.dim - 1) * volume(K).value


def choose_theorem31_t(K: ConvexBody, max_facets: int = 200, boundary: int = 512) -> float:
    """Largest ``t`` of the form ``m * 10^-k`` (m in 1, 2, 5) with a nonempty window.

    Raises
    ------
    WindowEmpty
        If no such ``t`` down to ``1e-14 * vol`` gives an admissible count
        at most ``max_facets``.
    """
    V = volume(K).value
    tmax = theorem31_t_threshold(K)
    for k in range(0, 15):
        for m in (5, 2, 1):
            t = m * 10.0 ** (-k) * V
            if t > tmax:
                continue
            lower, _, _ = illumination_volume_bounds(K, t, boundary)
            lo, hi = theorem31_window(K.dim, lower, t)
            if lo <= hi:
                if lo > max_facets:
                    break
                return t
    raise WindowEmpty("no level with a nonempty facet window", None)


def verify_theorem31(K: ConvexBody, t: float | None = None, seed: int = 0, n: int | None = None,
                     boundary: int = 512) -> Report:
    """``vol(K^t \\ K) <= 10^7 d^2 (c1 c2)^{2 + 1/(d-1)} vol(P_n \\ K)`` for a circumscribed ``P_n``.

    ``vol(K^t \\ K)`` enters the inequality through an upper bound and the
    facet window through a lower bound.  ``n`` defaults to the top of the
    window, the most demanding admissible count.

    Raises
    ------
    WindowEmpty
        If the admissible interval of facet counts is empty at this ``t``.
    """
    d = K.dim
    c1, c2, how = sandwich_constants(K)
    V = volume(K).value
    if t is None:
        t = choose_theorem31_t(K)
    threshold = (5 * c1 * c2) ** (-d - 1) * V
    lower, upper, method = illumination_volume_bounds(K, t, boundary, seed)
    lo, hi = theorem31_window(d, lower, t)
    params = {"body": K.name, "d": d, "t": t, "seed": seed, "c1": c1, "c2": c2}
    if t > threshold:
        rep = Report("Thm3.1", params, details={"threshold": threshold})
        rep.unmet = f"t exceeds (5 c1 c2)^(-d-1) vol(K) = {threshold:.4g}"
        return rep
    if lo > hi:
        raise WindowEmpty(f"facet window [{lo}, {hi}] is empty at t = {t:.4g}", (lo, hi))
    n = hi if n is None else int(n)
    if not lo <= n <= hi:
        raise WindowEmpty(f"n = {n} outside the window [{lo}, {hi}]", (lo, hi))
    params["n"] = n
    U = sphere_directions(d, n, "spread", seed if seed else None)
    Pn = circumscribed_facets(K, U)
    excess = hpoly_vertices(Pn).volume_exact() - V
    const = THEOREM31_CONSTANT * d * d * (c1 * c2) ** (2 + 1 / (d - 1))
    return Report("Thm3.1", params, lhs=upper, rhs=const * excess,
                  details={"window": [lo, hi], "gap_lower": lower, "gap_upper": upper,
                           "gap_method": method, "vol_Pn_minus_K": excess, "constant": const,
                           "threshold": threshold, "sandwich": how})


def theorem31_report(K: ConvexBody, t: float | None = None, seed: int = 0, **kw) -> Report:
    """:func:`verify_theorem31` with an empty window turned into an unmet-hypothesis report."""
    try:
        return verify_theorem31(K, t, seed, **kw)
    except WindowEmpty as exc:
        rep = Report("Thm3.1", {"body": K.name, "d": K.dim, "t": t, "seed": seed},
                     details={"window": exc.window})
        rep.unmet = f"WindowEmpty: {exc}"
        return rep


# ---------------------------------------------------------------------------
# Lemma 3.2 / (3.2) and the scaling study
# ---------------------------------------------------------------------------

def verify_hausdorff(regular_range=(3, 512), fibonacci=(50, 100, 200)) -> list[Report]:
    out = []
    cases = [(2, n, "regular") for n in range(regular_range[0], regular_range[1] + 1)]
    cases += [(3, n, "fibonacci") for n in fibonacci]
    for d, n, kind in cases:
        _, dh = ball_inscribed_polytope(d, n, kind)
        params = {"body": f"ball{d}", "d": d, "n": n, "construction": kind}
        checks = [Report("Eq3.2", params, lhs=dh, rhs=hausdorff_bound(d, n))]
        lemma = Report("Lemma3.2", params, lhs=dh, rhs=lemma32_bound(d, n))
        if n < 2 * d:
            lemma.unmet = "n < 2d"
        checks.append(lemma)
        out.append(bundle("Lemma3.2", checks, params, hausdorff=dh))
    return out


def _fit_slope(n, y) -> float:
    return float(np.polyfit(np.log(n), np.log(y), 1)[0])


@dataclass
class ScalingResult:
    d: int
    rows: list
    slope: float
    window: tuple
    report: Report

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d_S", "std_error", "normalized"])
        for r in self.rows:
            w.writerow([r["n"], repr(r["d_S"]), repr(r["std_error"]), repr(r["normalized"])])
        return buf.getvalue()


SLOPE_WINDOWS = {2: (-2.02, -1.98), 3: (-1.3, -0.7)}


def scaling_study(d: int, n_grid=None, seed: int = 0, construction: str | None = None) -> ScalingResult:
    """Symmetric difference of the unit ball and inscribed polytopes versus ``n``.

    The fitted log-log slope is compared with ``-2/(d-1)``; the normalized
    column ``d_S / (d vol(B) n^{-2/(d-1)})`` is reported without bounds.
    """
    if n_grid is None:
        n_grid = [8, 16, 32, 64, 128] if d == 2 else [32, 64, 128, 256, 512, 1024]
    construction = construction or ("regular" if d == 2 else "fibonacci")
    B = Ball.unit(d)
    rows = []
    for n in n_grid:
        P, _ = ball_inscribed_polytope(d, n, construction, seed if construction == "random" else None)
        est = symmetric_difference(B, P, seed=derive_seed(seed, "scaling", n))
        norm = est.value / (d * unit_ball_volume(d) * n ** (-2 / (d - 1)))
        rows.append({"n": n, "d_S": est.value, "std_error": est.std_error, "normalized": norm})
    slope = _fit_slope([r["n"] for r in rows], [r["d_S"] for r in rows])
    lo, hi = SLOPE_WINDOWS.get(d, (-2 / (d - 1) - 0.3, -2 / (d - 1) + 0.3))
    params = {"body": f"ball{d}", "d": d, "seed": seed, "n_grid": list(n_grid),
              "construction": construction}
    rep = bundle("Eq1.1", [Report("Eq1.1", params, lhs=lo, rhs=slope),
                           Report("Eq1.1", params, lhs=slope, rhs=hi)], params, slope=slope,
                 theory=-2 / (d - 1), rows=rows)
    return ScalingResult(d, rows, slope, (lo, hi), rep)


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _thm21_default(seed, **kw):
    return [verify_theorem21(named(Ball.unit(2), "disk"), 1e-3 * math.pi, seed),
            verify_theorem21(named(cube(2), "square"), 1e-3 * 4.0, seed)]


def _thm31_default(seed, **kw):
    return [theorem31_report(named(Ball.unit(2), "ball2"), seed=seed),
            theorem31_report(named(Ball.unit(3), "ball3"), seed=seed),
            theorem31_report(named(cube(2), "square"), 1e-4, seed)]


def _lemma27_bodies():
    return [K for d in (2, 3) for K in standard_bodies(d)[:3]]


@dataclass(frozen=True)
class Claim:
    id: str
    anchor: str
    runner: Callable[..., list]


CLAIMS: dict[str, Claim] = {c.id: c for c in [
    Claim("Sec1.overshoot", "facet formula for vol([x,P] \\ P)",
          lambda seed, trials=50, **kw: verify_overshoot_exactness(trials, seed=seed)),
    Claim("Sec1.convexity", "K^t is convex",
          lambda seed, **kw: verify_overshoot_convexity(seed=seed)),
    Claim("Eq1.1", "d_S(P_n, B) ~ n^(-2/(d-1))",
          lambda seed, **kw: [scaling_study(2, seed=seed).report, scaling_study(3, seed=seed).report]),
    Claim("Lemma2.2i", "centroid halfspace fractions",
          lambda seed, trials=10, **kw: verify_grunbaum(corpus("default", seed, trials), 5, seed, False)),
    Claim("Eq2.1", "1/e fraction bounds",
          lambda seed, trials=10, **kw: verify_grunbaum(corpus("default", seed, trials), 5, seed, False)),
    Claim("Lemma2.2ii", "parallel section bound",
          lambda seed, trials=10, **kw: verify_grunbaum(corpus("default", seed, trials), 2, seed, True)),
    Claim("Eq2.2", "max section <= e * central section",
          lambda seed, trials=10, **kw: verify_grunbaum(corpus("default", seed, trials), 2, seed, True)),
    Claim("Lemma2.3", "Θ(ξ) times central section",
          lambda seed, trials=10, **kw: verify_lemma23(corpus("default", seed, trials), 3, seed)),
    Claim("Lemma2.4", "isotropic transform",
          lambda seed, trials=10, **kw: verify_lemma24(corpus("default", seed, trials), 100, seed)),
    Claim("Lemma2.5", "isotropic section-moment bracket",
          lambda seed, trials=10, **kw: verify_lemma25(corpus("default", seed, trials), 5, seed)),
    Claim("Lemma2.6", "moment lower bound",
          lambda seed, trials=10, **kw: verify_lemma26(corpus("default", seed, trials), seed)),
    Claim("Lemma2.7", "inscribed ball of the floating body",
          lambda seed, **kw: verify_lemma27(_lemma27_bodies(), 500, seed)),
    Claim("Thm2.1", "greedy inscribed polytope", _thm21_default),
    Claim("Eq2.4", "vertex count bound", _thm21_default),
    Claim("Thm3.1", "illumination lower bound for circumscribed polytopes", _thm31_default),
    Claim("Lemma3.2", "inscribed polytopes of the ball in Hausdorff distance",
          lambda seed, **kw: verify_hausdorff()),
    Claim("Eq3.2", "simplified Hausdorff bound", lambda seed, **kw: verify_hausdorff()),
]}

# claims sharing a runner are executed once when running everything
_SHARED = {"Eq2.1": "Lemma2.2i", "Eq2.2": "Lemma2.2ii", "Eq2.4": "Thm2.1", "Eq3.2": "Lemma3.2"}


def run_claim(claim: str, seed: int = 0, **kw) -> list[Report]:
    if claim not in CLAIMS:
        raise KeyError(f"unknown claim {claim!r}; known: {', '.join(CLAIMS)}")
    return CLAIMS[claim].runner(seed, **kw)


def run_all(seed: int = 0, **kw) -> dict[str, list[Report]]:
    return {c: run_claim(c, seed, **kw) for c in CLAIMS if c not in _SHARED}


def verify_lemma(claim: str, corpus_name: str = "default", trials: int = 10, seed: int = 0,
                 dims=(2, 3)) -> list[Report]:
    """Run one Section 2 lemma over a corpus."""
    bodies = corpus(corpus_name, seed, trials, dims)
    key = claim.replace("Lemma", "").replace("lemma", "")
    if key in ("2.2i", "2.2.i"):
        return verify_grunbaum(bodies, 5, seed, False)
    if key in ("2.2ii", "2.2.ii"):
        return verify_grunbaum(bodies, 2, seed, True)
    if key == "2.3":
        return verify_lemma23(bodies, 3, seed)
    if key == "2.4":
        return verify_lemma24(bodies, 100, seed)
    if key == "2.5":
        return verify_lemma25(bodies, 5, seed)
    if key == "2.6":
        return verify_lemma26(bodies, seed)
    if key == "2.7":
        return verify_lemma27([K for K in bodies if not K.name.startswith(("cross", "random"))], 500, seed)
    raise KeyError(f"unknown lemma {claim!r}")


def flatten(reports) -> list[Report]:
    if isinstance(reports, dict):
        return [r for rs in reports.values() for r in rs]
    return list(reports)


def summarize(reports) -> dict:
    reps = flatten(reports)
    counts = {PASS: 0, FAIL: 0, UNMET: 0}
    for r in reps:
        counts[r.status] += 1
    return counts


def render_markdown(reports) -> str:
    """Table of claim, status counts and the smallest margin per claim."""
    groups: dict[str, list[Report]] = {}
    for r in flatten(reports):
        groups.setdefault(r.claim, []).append(r)
    lines = ["| claim | pass | fail | unmet | min margin |", "|---|---|---|---|---|"]
    for claim, reps in groups.items():
        c = summarize(reps)
        margins = [r.min_margin() for r in reps if r.status != UNMET]
        m = f"{min(margins):.4g}" if margins else "n/a"
        lines.append(f"| {claim} | {c[PASS]} | {c[FAIL]} | {c[UNMET]} | {m} |")
    return "\n".join(lines) + "\n"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(Report.CSV_HEADER)
    for r in flatten(reports):
        w.writerow(r.csv_row())
        for c in r.checks:
            w.writerow(c.csv_row())
    return buf.getvalue()
