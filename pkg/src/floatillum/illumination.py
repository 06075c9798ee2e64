"""The illumination body ``K^t = {x : vol([x, K] \\ K) <= t}``.

For a polytope with facets ``F_i`` (unit normals ``a_i``, offsets ``b_i``) the
overshoot has the closed form

    vol([x, P] \\ P) = (1/d) * sum_i max(0, <a_i, x> - b_i) * vol_{d-1}(F_i),

a cone over every facet visible from ``x``.  It is convex and piecewise linear
in ``x``.  Balls and their affine images have closed forms as well; for other
bodies the overshoot is sampled.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bodycore import (AffineImage, Ball, ConvexBody, HPolytope, Polytope, VPolytope,
                       as_polytope, hpoly_vertices, is_polytope, unit_ball_overshoot,
                       unit_ball_volume)
from .directions import sphere_directions
from .errors import NoBracket, NoExactPath
from .measure import VolumeEstimate, inertia
from .seeding import batched, uniform_ball

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OvershootResult:
    """Overshoot value, how it was obtained and, for polytopes, the visible facets."""

    value: VolumeEstimate
    method: str
    active_facets: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"value": self.value.as_dict(), "method": self.method,
                "active_facets": [[int(i), float(e)] for i, e in self.active_facets]}


def facet_areas(P: Polytope) -> np.ndarray:
    """``(d-1)``-volumes of the facets of ``P`` (redundant constraints dropped)."""
    return as_polytope(P).facet_areas()


def overshoot_polytope(P: Polytope, x) -> OvershootResult:
    """Exact overshoot of ``x`` over the polytope ``P`` by the facet formula."""
    P = as_polytope(P)
    x = np.asarray(x, dtype=float)
    excess = P.A @ x - P.b
    active = [(i, float(e)) for i, e in enumerate(excess) if e > 0]
    value = float(np.maximum(excess, 0.0) @ P._facet_areas / P.dim)
    return OvershootResult(VolumeEstimate(value, 0.0, 0, "exact"), "facet_formula", active)


def _enclosing(c1, r1, c2, r2):
    gap = float(np.linalg.norm(c2 - c1))
    if gap + r2 <= r1:
        return c1, r1
    if gap + r1 <= r2:
        return c2, r2
    R = 0.5 * (gap + r1 + r2)
    return c1 + (R - r1) * (c2 - c1) / gap, R


def in_cone_hull(K: ConvexBody, x: np.ndarray, Y: np.ndarray, origin=None, iters: int = 64) -> np.ndarray:
    """Whether each ``y`` lies in ``[x, K]``, for ``y`` outside ``K``.

    ``y`` is in ``[x, K]`` iff the ray ``x + s (y - x)``, ``s >= 1``, meets
    ``K``; the gauge of ``K`` is convex along the ray, so its minimum over the
    part of the ray inside the bounding ball is found by golden-section search.
    """
    o = K.interior_point() if origin is None else origin
    c, R = K.bounding_ball()
    W = Y - x
    a = np.einsum("ij,ij->i", W, W)
    z = x - c
    bq = 2.0 * W @ z
    cq = z @ z - R * R
    disc = bq * bq - 4 * a * cq
    ok = (disc >= 0) & (a > 0)
    root = np.sqrt(np.where(ok, disc, 0.0))
    lo = np.maximum((-bq - root) / (2 * a), 1.0)
    hi = (-bq + root) / (2 * a)
    ok &= lo <= hi
    idx = np.nonzero(ok)[0]
    out = np.zeros(len(Y), dtype=bool)
    if len(idx) == 0:
        return out
    lo, hi, Wi = lo[idx], hi[idx], W[idx]
    g = lambda s: K.gauge(x + s[:, None] * Wi, o)
    p, q = hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo)
    gp, gq = g(p), g(q)
    best = np.minimum(np.minimum(gp, gq), np.minimum(g(lo), g(hi)))
    for _ in range(iters):
        left = gp <= gq
        hi = np.where(left, q, hi)
        lo = np.where(left, lo, p)
        new_p = hi - GOLDEN * (hi - lo)
        new_q = lo + GOLDEN * (hi - lo)
        p_next = np.where(left, new_p, q)
        q_next = np.where(left, p, new_q)
        fresh = np.where(left, p_next, q_next)
        gf = g(fresh)
        gp, gq = np.where(left, gf, gq), np.where(left, gp, gf)
        p, q = p_next, q_next
        best = np.minimum(best, gf)
        if np.all(best <= 1.0):
            break
    out[idx] = best <= 1.0 + 1e-12
    return out


def overshoot_oracle(K: ConvexBody, x, samples: int = 10 ** 6, seed: int = 0,
                     workers: int | None = None) -> OvershootResult:
    """Sampled overshoot: hits outside ``K`` that lie in ``[x, K]``, in a ball covering both."""
    x = np.asarray(x, dtype=float)
    if K.membership(x):
        return OvershootResult(VolumeEstimate(0.0, 0.0, samples, "montecarlo", seed), "montecarlo")
    cK, RK = K.bounding_ball()
    c, R = _enclosing(cK, RK, x, 0.0)
    o = K.interior_point()

    def count(rng, n):
        Y = uniform_ball(rng, n, c, R)
        Y = Y[~K.contains(Y)]
        return int(in_cone_hull(K, x, Y, o).sum())

    hits = sum(batched(samples, seed, "overshoot", count, workers))
    box = unit_ball_volume(K.dim) * R ** K.dim
    p = hits / samples
    err = box * np.sqrt(p * (1 - p) / samples) if hits else box / samples
    est = VolumeEstimate(box * p, float(err), samples, "montecarlo", seed,
                         None if hits else "zero-hits")
    return OvershootResult(est, "montecarlo")


def has_exact_overshoot(K: ConvexBody) -> bool:
    try:
        K.overshoot_exact(K.interior_point())
    except (NoExactPath, NotImplementedError):
        return False
    return True


def overshoot(K: ConvexBody, x, samples: int = 10 ** 6, seed: int = 0) -> OvershootResult:
    """Overshoot by the closed form when available, otherwise by sampling."""
    if is_polytope(K):
        return overshoot_polytope(as_polytope(K), x)
    if has_exact_overshoot(K):
        v = float(K.overshoot_exact(np.asarray(x, dtype=float)))
        return OvershootResult(VolumeEstimate(v, 0.0, 0, "exact"), "closed_form")
    return overshoot_oracle(K, x, samples, seed)


def illumination_membership(K: ConvexBody, t: float, x, samples: int = 10 ** 6, seed: int = 0) -> bool:
    return overshoot(K, x, samples, seed).value.value <= t


def _default_origin(K: ConvexBody) -> np.ndarray:
    try:
        return inertia(K, mode="exact").centroid
    except (NoExactPath, NotImplementedError):
        return K.interior_point()


def illumination_boundary_points(K: ConvexBody, t: float, directions, origin=None,
                                 tol: float | None = None, samples: int = 10 ** 5,
                                 seed: int = 0) -> np.ndarray:
    """Points of ``∂K^t`` on rays from ``origin`` (default: centroid).

    Along each ray the overshoot is zero up to ``∂K`` and nondecreasing
    beyond, so bisection from the exit point of ``K`` converges.  The bracket
    starts at the exit of a ball twice the bounding ball and is enlarged four
    times once before giving up.

    Raises
    ------
    NoBracket
        If the overshoot is still below ``t`` at the enlarged bracket.
    """
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    o = _default_origin(K) if origin is None else np.asarray(origin, dtype=float)
    if t <= 0:
        return o + np.atleast_1d(K.ray_exit(o, U))[:, None] * U
    tol = 1e-10 * t if tol is None else tol
    if has_exact_overshoot(K):
        f = lambda X: np.atleast_1d(K.overshoot_exact(X)) - t
    else:
        f = lambda X: np.array([overshoot_oracle(K, x, samples, seed).value.value for x in X]) - t
    lo = np.atleast_1d(K.ray_exit(o, U))
    c, R = K.bounding_ball()

    def exit_radius(scale):
        w = o - c
        wu = U @ w
        return -wu + np.sqrt(wu * wu - w @ w + (scale * R) ** 2)

    hi = exit_radius(2.0)
    bad = f(o + hi[:, None] * U) < 0
    if np.any(bad):
        hi[bad] = exit_radius(8.0)[bad]
        if np.any(f(o + hi[bad, None] * U[bad]) < 0):
            raise NoBracket("overshoot stays below t inside the enlarged bracket")
    active = np.ones(len(U), dtype=bool)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        mid[idx] = 0.5 * (lo[idx] + hi[idx])
        val = f(o + mid[idx, None] * U[idx])
        above = val > 0
        hi[idx[above]] = mid[idx[above]]
        lo[idx[~above]] = mid[idx[~above]]
        done = (np.abs(val) <= tol) | (hi[idx] - lo[idx] <= 1e-15 * R)
        active[idx[done]] = False
    return o + mid[:, None] * U


def illumination_boundary_point(K: ConvexBody, t: float, o=None, u=None, tol: float | None = None,
                                **kw) -> np.ndarray:
    """Single-ray version of :func:`illumination_boundary_points`."""
    return illumination_boundary_points(K, t, np.asarray(u, dtype=float)[None, :], o, tol, **kw)[0]


def illumination_inner_polytope(K: ConvexBody, t: float, m: int, o=None, seed: int | None = None,
                                kind: str = "spread", directions=None) -> VPolytope:
    """Hull of ``m`` boundary points of ``K^t``; contained in ``K^t`` by convexity."""
    U = sphere_directions(K.dim, m, kind, seed) if directions is None else directions
    return VPolytope(illumination_boundary_points(K, t, U, o))


def illumination_radius(d: int, t: float, radius: float = 1.0) -> float:
    """Radius of ``K^t`` for the ball ``B(c, radius)``, which is a concentric ball."""
    level = t / radius ** d
    if level <= 0:
        return radius
    hi = 2.0
    while unit_ball_overshoot(d, hi) < level:
        hi *= 2.0
    return radius * brentq(lambda D: float(unit_ball_overshoot(d, D)) - level, 1.0, hi,
                           xtol=1e-15, rtol=4 * np.finfo(float).eps)


def _ball_like(K: ConvexBody):
    """``(|det T|, base ball)`` if ``K`` is a ball or an affine image of one."""
    if isinstance(K, Ball):
        return 1.0, K
    if isinstance(K, AffineImage) and isinstance(K.base, Ball):
        return abs(K.det), K.base
    return None


def illumination_tangent_polytope(P: Polytope, t: float, points) -> HPolytope:
    """Outer polytope of ``K^t`` from subgradient halfspaces at boundary points."""
    X = np.atleast_2d(points)
    G = np.array([P.overshoot_gradient(x) for x in X])
    vals = np.atleast_1d(P.overshoot_exact(X))
    offsets = np.einsum("ij,ij->i", G, X) + np.maximum(t - vals, 0.0)
    return HPolytope(G, offsets)


def illumination_volume_bounds(K: ConvexBody, t: float, m: int = 512, seed: int | None = None):
    """Lower and upper bounds on ``vol(K^t \\ K)``.

    Balls and ellipsoids are exact.  For polytopes the lower bound is the
    inner polytope through ``m`` boundary points and the upper bound the
    intersection of subgradient halfspaces at the same points.
    """
    ball = _ball_like(K)
    if ball is not None:
        det, B = ball
        D = illumination_radius(K.dim, t / det, B.radius)
        gap = det * unit_ball_volume(K.dim) * (D ** K.dim - B.radius ** K.dim)
        return gap, gap, "closed_form"
    P = as_polytope(K)
    X = illumination_boundary_points(P, t, sphere_directions(P.dim, m, "spread", seed))
    VK = P.volume_exact()
    lower = VPolytope(X).volume_exact() - VK
    upper = hpoly_vertices(illumination_tangent_polytope(P, t, X)).volume_exact() - VK
    return max(lower, 0.0), upper, "polytope_bounds"
