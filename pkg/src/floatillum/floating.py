"""The floating body ``K_t``: membership, outer polytopes and the inscribed-ball check.

``K_t`` is the intersection of all halfspaces whose complement cuts at most
``t`` off ``K``.  A point ``x`` belongs to ``K_t`` iff every hyperplane through
``x`` cuts off at least ``t``, i.e. iff the minimal cap through ``x`` has
volume at least ``t``.  That minimum is a global problem over the sphere; here
it is searched numerically, so ``Inside`` verdicts are relative to the search
budget while ``Outside`` verdicts come with a checkable certificate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodycore import ConvexBody, HPolytope, chebyshev_center, plane_basis
from .caps import cap_offsets
from .directions import sphere_directions
from .errors import EmptyIntersection
from .measure import PointCloud, VolumeEstimate, cut_volumes, volume
from .report import Report

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
THEOREM21_THRESHOLD = 0.25 * math.exp(-5.0)
STATEMENT_THRESHOLD = 0.25 * math.exp(-4.0)


@dataclass(frozen=True)
class FloatingQuery:
    """A body, a level ``t`` and the search budgets used to probe ``K_t``."""

    body: ConvexBody
    t: float
    direction_budget: int = 64
    optimizer_restarts: int = 3
    mode: str = "auto"
    samples: int = 10 ** 6


@dataclass(frozen=True)
class FloatingVerdict:
    """``kind`` is ``inside``, ``outside`` or ``boundary``.

    ``direction`` is the best cutting normal found and ``value`` its cap
    volume; for ``outside`` the halfspace ``<y, direction> >= <x, direction>``
    is the certificate.
    """

    kind: str
    direction: np.ndarray
    value: float
    margin: float
    budget: int


def _through_point(K, x, U, mode, cloud):
    vals, _ = cut_volumes(K, U, U @ x, mode, cloud=cloud)
    return vals


def _golden_min(f, a, b, iters):
    c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _descend(value, u, step, min_step=1e-9, max_rounds=60):
    """Spherical coordinate descent with golden-section searches along great circles."""
    best = value(u)
    for _ in range(max_rounds):
        improved = False
        for e in plane_basis(u):
            theta, val = _golden_min(lambda th: value(np.cos(th) * u + np.sin(th) * e),
                                     -step, step, 40)
            if val < best:
                u = np.cos(theta) * u + np.sin(theta) * e
                u /= np.linalg.norm(u)
                best, improved = val, True
        if not improved:
            step *= 0.25
        if step < min_step:
            break
    return u, best


def min_cap_through_point(K: ConvexBody, x, t_hint: float | None = None, budget: int = 64,
                          seed: int = 0, restarts: int = 3, mode: str = "auto",
                          samples: int = 10 ** 6) -> tuple[np.ndarray, VolumeEstimate]:
    """Minimize ``xi -> vol{y in K : <y, xi> >= <x, xi>}`` over the sphere.

    The ``budget`` start directions are a well-spread set; coordinate descent
    then runs from the ``restarts`` best of them.  The returned value is an
    upper bound on the true infimum.  ``t_hint`` stops the search early once a
    cap below it has been found.
    """
    x = np.asarray(x, dtype=float)
    d = K.dim
    cloud = None
    if mode == "mc":
        cloud = PointCloud(K, samples, seed)
    else:
        try:
            K.cap_volumes_exact(np.eye(d)[:1], np.zeros(1))
        except NotImplementedError:
            cloud = PointCloud(K, samples, seed)
    U = sphere_directions(d, budget, "spread", seed)
    vals = _through_point(K, x, U, mode, cloud)
    order = np.argsort(vals, kind="stable")
    value = lambda u: float(_through_point(K, x, u[None, :], mode, cloud)[0])
    step = 2.0 * math.pi / budget if d == 2 else 2.0 * math.sqrt(4.0 * math.pi / budget)
    best_u, best_v = U[order[0]], float(vals[order[0]])
    for j in order[:restarts]:
        if t_hint is not None and best_v < t_hint * 0.5:
            break
        u, v = _descend(value, U[j].copy(), step)
        if v < best_v:
            best_u, best_v = u, v
    if cloud is None:
        est = VolumeEstimate(best_v, 0.0, 0, "exact", seed)
    else:
        p = best_v / cloud.box
        est = VolumeEstimate(best_v, cloud.box * math.sqrt(max(p * (1 - p), 1.0 / cloud.n) / cloud.n),
                             cloud.n, "montecarlo", seed)
    return best_u, est


def floating_membership(q: FloatingQuery, x, tol_rel: float = 1e-6, seed: int = 0) -> FloatingVerdict:
    """Classify ``x`` against ``K_t`` using the searched minimal cap."""
    u, est = min_cap_through_point(q.body, x, q.t, q.direction_budget, seed,
                                   q.optimizer_restarts, q.mode, q.samples)
    v = est.value
    slack = max(tol_rel * q.t, 3.0 * est.std_error)
    if v < q.t - slack:
        kind = "outside"
    elif v > q.t + slack:
        kind = "inside"
    else:
        kind = "boundary"
    return FloatingVerdict(kind, u, v, v - q.t, q.direction_budget)


def floating_offsets(K: ConvexBody, directions, t: float, **kw) -> np.ndarray:
    """``s_j`` with ``vol{y in K : <y, u_j> >= s_j} = t``; see :func:`caps.cap_offsets`."""
    return cap_offsets(K, directions, t, **kw)


def floating_outer_polytope(q: FloatingQuery | ConvexBody, m: int, seed: int | None = None,
                            t: float | None = None, kind: str = "spread",
                            directions=None) -> HPolytope:
    """``{y : <y, u_j> <= s_j}`` over ``m`` directions; contains ``K_t``.

    Raises
    ------
    EmptyIntersection
        If the halfspaces have empty interior (``K_t`` empty at this budget).
    """
    if isinstance(q, FloatingQuery):
        K, t = q.body, q.t
    else:
        K = q
    d = K.dim
    if m < d + 1:
        raise ValueError("need at least d + 1 directions")
    U = sphere_directions(d, m, kind, seed) if directions is None else np.asarray(directions, float)
    s = floating_offsets(K, U, t)
    try:
        _, r = chebyshev_center(U, s)
    except EmptyIntersection:
        raise EmptyIntersection("K_t empty at this budget") from None
    if r <= 1e-12 * K.scale:
        raise EmptyIntersection("K_t empty at this budget")
    return HPolytope(U, s)


def lemma27_radius(vol: float, d: int) -> float:
    """``vol^{1/d} / (24 e^5 sqrt(pi))``."""
    return vol ** (1.0 / d) / (24.0 * math.exp(5.0) * math.sqrt(math.pi))


def lemma27_ball_check(K: ConvexBody, directions: int = 500, seed: int = 0,
                       samples: int = 10 ** 6, centroid_tol: float = 1e-8,
                       isotropy_tol: float = 1e-6) -> Report:
    """Check that hyperplanes at distance ``r0`` from the centroid cut off more than ``vol/(4e^4)``.

    ``K`` must be centered at its centroid and isotropic; the report records
    the worst margin over a well-spread set of directions.
    """
    from .measure import inertia
    from .position import isotropy_residual

    d = K.dim
    data = inertia(K, samples=samples, seed=seed)
    V = data.volume
    r0 = lemma27_radius(V, d)
    level = V / (4.0 * math.exp(4.0))
    params = {"body": K.name, "d": d, "directions": directions, "seed": seed}
    off_center = float(np.linalg.norm(data.centroid)) / K.scale
    residual = isotropy_residual(data.second_moment)
    U = sphere_directions(d, directions, "spread", seed)
    vals, errs = cut_volumes(K, U, np.full(len(U), r0), samples=samples, seed=seed)
    worst = int(np.argmin(vals - 3 * errs))
    rep = Report("Lemma2.7", params, lhs=level, rhs=float(vals[worst] - 3 * errs[worst]), strict=True,
                 details={"r0": r0, "level": level, "volume": V, "worst_direction": U[worst],
                          "centroid_offset": off_center, "isotropy_residual": residual})
    if off_center > centroid_tol or residual > isotropy_tol:
        rep.unmet = "body is not centered and isotropic"
    return rep
