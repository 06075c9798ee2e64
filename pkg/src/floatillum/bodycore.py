"""Convex bodies behind a common oracle interface.

A body answers membership and support queries and knows an interior point
and a bounding ball.  Concrete types (balls, ellipsoids, polytopes, affine
images) additionally provide closed-form evaluations -- volume, moments, cap
volumes, sections, illumination overshoot -- which the measuring routines use
when present and replace by sampling otherwise.  A missing closed form is
signalled by :class:`NoExactPath`.

Polytope combinatorics (hulls, vertex enumeration, triangulations) are only
provided for ``d <= 4``.
"""
from __future__ import annotations

import itertools
import math
from functools import cached_property

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree
from scipy.special import betainc

from .errors import (Degenerate, DimensionUnsupported, EmptyIntersection, NoBracket,
                     NoExactPath, Unbounded)
from .seeding import make_rng, uniform_ball

MAX_COMBINATORIAL_DIM = 4
HULL_JITTER = 1e-12
DEDUP_TOL = 1e-9
BRUTE_FORCE_LIMIT = 20000


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball, by ``k_d = (2 pi / d) k_{d-2}``."""
    if d < 0:
        raise ValueError("dimension must be nonnegative")
    vol = 1.0 if d % 2 == 0 else 2.0
    for k in range(2 if d % 2 == 0 else 3, d + 1, 2):
        vol *= 2.0 * math.pi / k
    return vol


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in ``R^d``, i.e. ``d * unit_ball_volume(d)``."""
    return d * unit_ball_volume(d)


def unit_cap_volume(d: int, h) -> np.ndarray:
    """Volume of the cap of height ``h`` (in ``[0, 2]``) of the unit ball in ``R^d``."""
    h = np.clip(np.asarray(h, dtype=float), 0.0, 2.0)
    low = np.minimum(h, 2.0 - h)
    part = 0.5 * unit_ball_volume(d) * betainc((d + 1) / 2.0, 0.5, low * (2.0 - low))
    return np.where(h <= 1.0, part, unit_ball_volume(d) - part)


def unit_ball_overshoot(d: int, dist) -> np.ndarray:
    """``vol([x, B] \\ B)`` for the unit ball and ``|x| = dist``: tangent cone minus cap."""
    D = np.asarray(dist, dtype=float)
    out = np.zeros(D.shape)
    far = D > 1.0
    if np.any(far):
        Df = D[far]
        z0 = 1.0 / Df
        rho2 = (1.0 - z0) * (1.0 + z0)
        cone = (Df - z0) * unit_ball_volume(d - 1) * rho2 ** ((d - 1) / 2.0) / d
        out[far] = np.maximum(cone - unit_cap_volume(d, 1.0 - z0), 0.0)
    return out


def plane_basis(normal: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) of the hyperplane orthogonal to ``normal``."""
    _, _, vt = np.linalg.svd(np.asarray(normal, dtype=float)[None, :])
    return vt[1:]


def _as_directions(xi):
    xi = np.asarray(xi, dtype=float)
    return np.atleast_2d(xi), xi.ndim == 1


class ConvexBody:
    """Oracle interface shared by every body.

    Subclasses implement :meth:`contains`, :meth:`support`,
    :meth:`interior_point` and :meth:`bounding_ball`; everything else has an
    oracle-only default.
    """

    dim: int
    interior_margin: float = 0.0
    name: str = "body"

    # -- oracle -------------------------------------------------------------
    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def membership(self, x) -> bool:
        return bool(self.contains(np.asarray(x, dtype=float)[None, :])[0])

    def support(self, xi):
        raise NotImplementedError

    def interior_point(self) -> np.ndarray:
        raise NotImplementedError

    def bounding_ball(self) -> tuple[np.ndarray, float]:
        raise NotImplementedError

    def support_point(self, xi) -> np.ndarray:
        """A boundary point maximizing ``<., xi>``.

        The oracle default climbs the radial boundary from the interior point.
        """
        U, single = _as_directions(xi)
        pts = np.array([_support_point_search(self, u) for u in U])
        return pts[0] if single else pts

    def width(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        return self.support(xi) + self.support(-xi)

    # -- rays -----------------------------------------------------------------
    def ray_exit(self, origin, directions, tol: float = 1e-12) -> np.ndarray:
        """Distance from ``origin`` to the boundary along each unit direction."""
        return _ray_exit_bisect(self, origin, directions, tol)

    def gauge(self, points, origin) -> np.ndarray:
        """Minkowski gauge of ``points`` with respect to ``origin``."""
        P = np.atleast_2d(np.asarray(points, dtype=float)) - origin
        r = np.linalg.norm(P, axis=1)
        out = np.zeros(len(P))
        nz = r > 0
        if np.any(nz):
            out[nz] = r[nz] / self.ray_exit(origin, P[nz] / r[nz, None])
        return out

    # -- closed forms (optional) ----------------------------------------------
    def volume_exact(self) -> float:
        raise NoExactPath(type(self).__name__)

    def moments_exact(self):
        """``(volume, centroid, second moment about the origin)``."""
        raise NoExactPath(type(self).__name__)

    def cap_volumes_exact(self, normals, offsets) -> np.ndarray:
        """``vol{x in K : <x, n_j> >= c_j}`` for unit normals ``n_j``."""
        raise NoExactPath(type(self).__name__)

    def sections_exact(self, normals, offsets) -> np.ndarray:
        """``vol_{d-1}(K cap {<x, n_j> = c_j})``."""
        raise NoExactPath(type(self).__name__)

    def overshoot_exact(self, x):
        """``vol([x, K] \\ K)`` for a point ``(d,)`` or a batch ``(k, d)``."""
        raise NoExactPath(type(self).__name__)

    def normal_at(self, x) -> np.ndarray:
        raise NoExactPath(type(self).__name__)

    @property
    def scale(self) -> float:
        return self.bounding_ball()[1]

    def __repr__(self):
        return f"{type(self).__name__}(d={self.dim})"


def _ray_exit_bisect(K: ConvexBody, origin, directions, tol: float) -> np.ndarray:
    """Vectorized exponential bracketing followed by bisection."""
    o = np.asarray(origin, dtype=float)
    U, single = _as_directions(directions)
    c, R = K.bounding_ball()
    limit = np.linalg.norm(o - c) + R
    k = len(U)
    lo = np.zeros(k)
    hi = np.full(k, max(K.interior_margin, 1e-3 * R))
    active = np.ones(k, dtype=bool)
    while np.any(active):
        idx = np.nonzero(active)[0]
        inside = K.contains(o + hi[idx, None] * U[idx])
        lo[idx[inside]] = hi[idx[inside]]
        hi[idx[inside]] *= 2.0
        active[idx[~inside]] = False
        if np.any(lo[idx[inside]] > limit):
            raise NoBracket("ray left the bounding ball while still inside the body")
    hi = np.minimum(hi, np.maximum(limit * 1.000001, lo))
    tol = tol * max(R, 1.0)
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        inside = K.contains(o + mid[:, None] * U)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    out = 0.5 * (lo + hi)
    return out[0] if single else out


def _support_point_search(K: ConvexBody, u: np.ndarray, iters: int = 60) -> np.ndarray:
    """Maximize ``<o + r(w) w, u>`` over unit ``w`` by coordinate golden search."""
    o = K.interior_point()
    d = K.dim

    def value(w):
        w = w / np.linalg.norm(w)
        return float(np.dot(o + K.ray_exit(o, w) * w, u))

    w = u.copy()
    step = 0.5
    basis = plane_basis(u)
    for _ in range(iters):
        improved = False
        for e in basis:
            best = value(w)
            for sgn in (1.0, -1.0):
                cand = w + sgn * step * e
                if value(cand) > best:
                    w, best, improved = cand / np.linalg.norm(cand), value(cand), True
        if not improved:
            step *= 0.5
        if step < 1e-10:
            break
    w = w / np.linalg.norm(w)
    return o + K.ray_exit(o, w) * w


def radial_boundary(K: ConvexBody, o, u, tol: float = 1e-10) -> np.ndarray:
    """Boundary point of ``K`` on the ray from ``o`` in direction ``u``.

    Brackets the crossing by doubling the radius, then bisects until the
    bracket is shorter than ``tol``; the midpoint is returned, so
    ``o + (r - tol) u`` is inside and ``o + (r + tol) u`` is outside.

    Raises
    ------
    NoBracket
        If the ray is still inside the body beyond the bounding ball.
    """
    o = np.asarray(o, dtype=float)
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    if not K.membership(o):
        raise ValueError("ray origin must lie inside the body")
    c, R = K.bounding_ball()
    limit = np.linalg.norm(o - c) + R
    lo, hi = 0.0, max(tol, 1e-3 * R)
    while K.membership(o + hi * u):
        lo, hi = hi, 2.0 * hi
        if lo > limit:
            raise NoBracket("ray left the bounding ball while still inside the body")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if K.membership(o + mid * u):
            lo = mid
        else:
            hi = mid
    return o + 0.5 * (lo + hi) * u


# ---------------------------------------------------------------------------
# balls, affine images, ellipsoids
# ---------------------------------------------------------------------------

class Ball(ConvexBody):
    """Euclidean ball ``B(center, radius)``."""

    def __init__(self, center, radius: float = 1.0):
        self.center = np.asarray(center, dtype=float)
        self.radius = float(radius)
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        self.dim = self.center.shape[0]
        self.interior_margin = self.radius
        self.name = "ball"

    @classmethod
    def unit(cls, d: int) -> "Ball":
        return cls(np.zeros(d), 1.0)

    def contains(self, points, tol=0.0):
        P = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(P - self.center, axis=1) <= self.radius + tol

    def support(self, xi):
        U, single = _as_directions(xi)
        h = U @ self.center + self.radius * np.linalg.norm(U, axis=1)
        return h[0] if single else h

    def support_point(self, xi):
        U, single = _as_directions(xi)
        P = self.center + self.radius * U / np.linalg.norm(U, axis=1)[:, None]
        return P[0] if single else P

    def interior_point(self):
        return self.center.copy()

    def bounding_ball(self):
        return self.center.copy(), self.radius

    def normal_at(self, x):
        n = np.asarray(x, dtype=float) - self.center
        return n / np.linalg.norm(n)

    def ray_exit(self, origin, directions, tol=0.0):
        U, single = _as_directions(directions)
        w = np.asarray(origin, dtype=float) - self.center
        wu = U @ w
        disc = np.maximum(wu * wu - w @ w + self.radius ** 2, 0.0)
        out = -wu + np.sqrt(disc)
        return out[0] if single else out

    def volume_exact(self):
        return unit_ball_volume(self.dim) * self.radius ** self.dim

    def moments_exact(self):
        V = self.volume_exact()
        M = V * self.radius ** 2 / (self.dim + 2) * np.eye(self.dim)
        return V, self.center.copy(), M + V * np.outer(self.center, self.center)

    def cap_volumes_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        delta = np.asarray(offsets, dtype=float) - N @ self.center
        return self.radius ** self.dim * unit_cap_volume(self.dim, 1.0 - delta / self.radius)

    def sections_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        delta = (np.asarray(offsets, dtype=float) - N @ self.center) / self.radius
        s = np.clip(1.0 - delta * delta, 0.0, None)
        return (unit_ball_volume(self.dim - 1) * self.radius ** (self.dim - 1)
                * s ** ((self.dim - 1) / 2.0))

    def overshoot_exact(self, x):
        x = np.asarray(x, dtype=float)
        D = np.linalg.norm(x - self.center, axis=-1) / self.radius
        out = self.radius ** self.dim * unit_ball_overshoot(self.dim, D)
        return float(out) if x.ndim == 1 else out

    def __repr__(self):
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"


class AffineImage(ConvexBody):
    """The body ``T(base) + v`` for an invertible ``T``."""

    def __init__(self, base: ConvexBody, T, v=None):
        self.base = base
        self.T = np.asarray(T, dtype=float)
        self.dim = base.dim
        if self.T.shape != (self.dim, self.dim):
            raise ValueError("linear map must be d x d")
        self.v = np.zeros(self.dim) if v is None else np.asarray(v, dtype=float)
        self.det = float(np.linalg.det(self.T))
        if abs(self.det) < 1e-300:
            raise Degenerate("affine map is singular")
        self.Tinv = np.linalg.inv(self.T)
        sv = np.linalg.svd(self.T, compute_uv=False)
        self._smax, self._smin = float(sv[0]), float(sv[-1])
        self.interior_margin = base.interior_margin * self._smin
        self.name = f"affine({base.name})"

    def to_base(self, points):
        return (np.asarray(points, dtype=float) - self.v) @ self.Tinv.T

    def from_base(self, points):
        return np.asarray(points, dtype=float) @ self.T.T + self.v

    def contains(self, points, tol=0.0):
        P = np.atleast_2d(np.asarray(points, dtype=float))
        return self.base.contains(self.to_base(P), tol / self._smin if tol else 0.0)

    def _pull_normals(self, xi):
        U = np.atleast_2d(np.asarray(xi, dtype=float))
        M = U @ self.T
        norms = np.linalg.norm(M, axis=1)
        return M / norms[:, None], norms

    def support(self, xi):
        U, single = _as_directions(xi)
        Mh, norms = self._pull_normals(U)
        h = norms * np.atleast_1d(self.base.support(Mh)) + U @ self.v
        return h[0] if single else h

    def support_point(self, xi):
        U, single = _as_directions(xi)
        Mh, _ = self._pull_normals(U)
        P = self.from_base(np.atleast_2d(self.base.support_point(Mh)))
        return P[0] if single else P

    def interior_point(self):
        return self.from_base(self.base.interior_point())

    def bounding_ball(self):
        c, r = self.base.bounding_ball()
        return self.from_base(c), r * self._smax

    def normal_at(self, x):
        n = self.Tinv.T @ self.base.normal_at(self.to_base(x))
        return n / np.linalg.norm(n)

    def ray_exit(self, origin, directions, tol=1e-12):
        U, single = _as_directions(directions)
        W = U @ self.Tinv.T
        wn = np.linalg.norm(W, axis=1)
        out = np.atleast_1d(self.base.ray_exit(self.to_base(origin), W / wn[:, None], tol)) / wn
        return out[0] if single else out

    def volume_exact(self):
        return abs(self.det) * self.base.volume_exact()

    def moments_exact(self):
        Vb, cb, Mb = self.base.moments_exact()
        Mc = Mb - Vb * np.outer(cb, cb)
        V = abs(self.det) * Vb
        c = self.T @ cb + self.v
        M = abs(self.det) * self.T @ Mc @ self.T.T + V * np.outer(c, c)
        return V, c, M

    def cap_volumes_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        Mh, norms = self._pull_normals(N)
        c = (np.asarray(offsets, dtype=float) - N @ self.v) / norms
        return abs(self.det) * self.base.cap_volumes_exact(Mh, c)

    def sections_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        Mh, norms = self._pull_normals(N)
        c = (np.asarray(offsets, dtype=float) - N @ self.v) / norms
        return abs(self.det) / norms * self.base.sections_exact(Mh, c)

    def overshoot_exact(self, x):
        return abs(self.det) * self.base.overshoot_exact(self.to_base(x))

    def as_polytope(self) -> "VPolytope":
        if not isinstance(self.base, Polytope):
            raise TypeError("base body is not a polytope")
        return VPolytope(self.from_base(self.base.vertices))

    def __repr__(self):
        return f"AffineImage({self.base!r}, det={self.det:.6g})"


class Ellipsoid(AffineImage):
    """``{c + radius * S^{1/2} u : |u| <= 1}`` for a positive-definite shape ``S``."""

    def __init__(self, center, shape, radius: float = 1.0):
        center = np.asarray(center, dtype=float)
        S = np.asarray(shape, dtype=float)
        w, Q = np.linalg.eigh(S)
        if np.any(w <= 0):
            raise ValueError("shape matrix must be positive definite")
        self.shape = S
        self.radius = float(radius)
        super().__init__(Ball.unit(len(center)), radius * (Q * np.sqrt(w)) @ Q.T, center)
        self.name = "ellipsoid"

    @property
    def center(self):
        return self.v


# ---------------------------------------------------------------------------
# polytopes
# ---------------------------------------------------------------------------

def _check_dim(d: int):
    if d < 2 or d > MAX_COMBINATORIAL_DIM:
        raise DimensionUnsupported(f"polytope combinatorics need 2 <= d <= 4, got {d}")


def _qhull(points: np.ndarray) -> ConvexHull:
    """Qhull hull; on precision failure retry once on a 1e-12 jittered copy."""
    try:
        return ConvexHull(points)
    except QhullError:
        scale = max(np.abs(points).max(), 1.0)
        jitter = make_rng(0, "hull-jitter", len(points)).standard_normal(points.shape)
        try:
            return ConvexHull(points + HULL_JITTER * scale * jitter)
        except QhullError as exc:
            raise Degenerate(f"hull construction failed: {exc}") from None


def affine_rank(points: np.ndarray) -> int:
    P = np.asarray(points, dtype=float)
    if len(P) < 2:
        return 0
    Q = P - P[0]
    scale = max(np.abs(Q).max(), 1e-300)
    return int(np.linalg.matrix_rank(Q / scale, tol=1e-10))


class _HullData:
    """Vertices, irredundant unit-normal facets and a triangulation of one polytope."""

    def __init__(self, points):
        P = np.asarray(points, dtype=float)
        if P.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        d = P.shape[1]
        _check_dim(d)
        if len(P) < d + 1 or affine_rank(P) < d:
            raise Degenerate("points do not span a full-dimensional polytope")
        hull = _qhull(P)
        idx = hull.vertices if d == 2 else np.sort(hull.vertices)
        self.dim = d
        self.vertices = P[idx]
        remap = {int(j): i for i, j in enumerate(idx)}
        scale = max(np.linalg.norm(self.vertices - self.vertices.mean(0), axis=1).max(), 1e-300)
        self.scale = scale
        eq = hull.equations
        normals = eq[:, :-1] / np.linalg.norm(eq[:, :-1], axis=1)[:, None]
        group = np.full(len(eq), -1)
        reps = []
        for i in range(len(eq)):
            if group[i] >= 0:
                continue
            close = (group < 0) & (np.abs(normals - normals[i]).max(axis=1) < 1e-9)
            group[close] = len(reps)
            reps.append(i)
        A = np.array([normals[i] for i in reps])
        for g in range(len(reps)):
            n = normals[group == g].mean(axis=0)
            A[g] = n / np.linalg.norm(n)
        b = (self.vertices @ A.T).max(axis=0)
        self.A, self.b = A, b
        on = np.abs(self.vertices @ A.T - b) <= 1e-9 * scale
        self.facets = [np.nonzero(on[:, g])[0] for g in range(len(A))]
        self.simplex_facets = np.array([[remap.get(int(j), -1) for j in s] for s in hull.simplices])
        if np.any(self.simplex_facets < 0):
            # coplanar input points inside a facet -- fall back to the vertex-only hull
            hull = _qhull(self.vertices)
            self.simplex_facets = hull.simplices.copy()
        self.interior = self.vertices.mean(axis=0)

    @cached_property
    def simplices(self) -> np.ndarray:
        """``(s, d+1, d)`` array of simplices covering the polytope."""
        F = self.vertices[self.simplex_facets]
        apex = np.broadcast_to(self.interior, (len(F), 1, self.dim))
        return np.concatenate([apex, F], axis=1)

    @cached_property
    def simplex_volumes(self) -> np.ndarray:
        S = self.simplices
        return np.abs(np.linalg.det(S[:, 1:] - S[:, :1])) / math.factorial(self.dim)


def simplex_moments(S: np.ndarray, vols: np.ndarray):
    """Total volume, first and second moments (about 0) of a union of simplices."""
    d = S.shape[2]
    total = vols.sum()
    first = (vols[:, None] * S.mean(axis=1)).sum(axis=0)
    sums = S.sum(axis=1)
    outer = np.einsum("skd,ske->sde", S, S) + np.einsum("sd,se->sde", sums, sums)
    second = (vols[:, None, None] * outer).sum(axis=0) / ((d + 1) * (d + 2))
    return total, first, second


def _hull_volume(points: np.ndarray) -> float:
    if len(points) <= points.shape[1] or affine_rank(points) < points.shape[1]:
        return 0.0
    try:
        return float(ConvexHull(points).volume)
    except QhullError:
        return 0.0


def _cap_points(V: np.ndarray, n: np.ndarray, c: float, tol: float):
    vals = V @ n - c
    keep = vals >= 0
    I, O = V[keep], V[~keep]
    if len(O) == 0 or len(I) == 0:
        return I, None
    vi, vo = vals[keep][:, None], vals[~keep][None, :]
    lam = vi / (vi - vo)
    X = I[:, None, :] + lam[:, :, None] * (O[None, :, :] - I[:, None, :])
    return I, X.reshape(-1, V.shape[1])


def _section_points(V: np.ndarray, n: np.ndarray, c: float, tol: float) -> np.ndarray:
    vals = V @ n - c
    on = np.abs(vals) <= tol
    pos, neg = vals > tol, vals < -tol
    pts = [V[on]]
    if np.any(pos) and np.any(neg):
        vp, vn = vals[pos][:, None], vals[neg][None, :]
        lam = vp / (vp - vn)
        Vp, Vn = V[pos], V[neg]
        X = Vp[:, None, :] + lam[:, :, None] * (Vn[None, :, :] - Vp[:, None, :])
        pts.append(X.reshape(-1, V.shape[1]))
    return np.vstack(pts)


def polygon_cap_areas(V: np.ndarray, normals: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Areas of ``{x in P : <x, n_j> >= c_j}`` for a counterclockwise polygon ``V``."""
    center = V.mean(axis=0)
    W = V - center
    N = np.atleast_2d(normals)
    c = np.asarray(offsets, dtype=float) - N @ center
    W1 = np.roll(W, -1, axis=0)
    z0 = N @ W.T - c[:, None]
    z1 = np.roll(z0, -1, axis=1)
    in0, in1 = z0 >= 0, z1 >= 0
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(in0 != in1, z0 / (z0 - z1), 0.0)
    X = W[None] + lam[..., None] * (W1 - W)[None]
    P = np.where(in0[..., None], W[None], X)
    Q = np.where(in1[..., None], W1[None], X)
    live = in0 | in1
    cross = P[..., 0] * Q[..., 1] - P[..., 1] * Q[..., 0]
    total = np.where(live, cross, 0.0).sum(axis=1)
    exit_mask = in0 & ~in1
    entry_mask = ~in0 & in1
    E = (X * exit_mask[..., None]).sum(axis=1)
    S = (X * entry_mask[..., None]).sum(axis=1)
    total += E[:, 0] * S[:, 1] - E[:, 1] * S[:, 0]
    return np.maximum(0.5 * total, 0.0)


def polygon_chords(A: np.ndarray, b: np.ndarray, normals: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Lengths of ``P cap {<x, n_j> = c_j}`` for the polygon ``{A x <= b}``."""
    N = np.atleast_2d(normals)
    c = np.asarray(offsets, dtype=float)
    p0 = N * c[:, None]
    tau = np.column_stack([-N[:, 1], N[:, 0]])
    slack = b[None, :] - p0 @ A.T
    rate = tau @ A.T
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = slack / rate
    upper = np.where(rate > 1e-300, ratio, np.inf).min(axis=1)
    lower = np.where(rate < -1e-300, ratio, -np.inf).max(axis=1)
    feasible = np.all((np.abs(rate) > 1e-300) | (slack >= 0), axis=1)
    return np.where(feasible, np.maximum(upper - lower, 0.0), 0.0)


class Polytope(ConvexBody):
    """Common machinery of :class:`HPolytope` and :class:`VPolytope`."""

    _data: _HullData

    @property
    def vertices(self) -> np.ndarray:
        return self._data.vertices

    @property
    def A(self) -> np.ndarray:
        """Irredundant unit facet normals."""
        return self._data.A

    @property
    def b(self) -> np.ndarray:
        return self._data.b

    @property
    def facets(self) -> list[np.ndarray]:
        """Vertex indices on each facet."""
        return self._data.facets

    @property
    def n_facets(self) -> int:
        return len(self._data.A)

    @property
    def n_vertices(self) -> int:
        return len(self._data.vertices)

    def _constraints(self):
        return self.A, self.b

    def contains(self, points, tol=0.0):
        A, b = self._constraints()
        P = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(P @ A.T <= b + tol, axis=1)

    def support(self, xi):
        U, single = _as_directions(xi)
        h = (U @ self.vertices.T).max(axis=1)
        return h[0] if single else h

    def support_point(self, xi):
        U, single = _as_directions(xi)
        P = self.vertices[np.argmax(U @ self.vertices.T, axis=1)]
        return P[0] if single else P

    def interior_point(self):
        return self._data.interior.copy()

    @property
    def interior_margin(self):
        return float((self.b - self.A @ self._data.interior).min())

    def bounding_ball(self):
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        c = 0.5 * (lo + hi)
        return c, float(np.linalg.norm(self.vertices - c, axis=1).max())

    def normal_at(self, x):
        return self.A[np.argmax(self.A @ np.asarray(x, dtype=float) - self.b)].copy()

    def ray_exit(self, origin, directions, tol=0.0):
        U, single = _as_directions(directions)
        o = np.asarray(origin, dtype=float)
        slack = self.b - self.A @ o
        rate = U @ self.A.T
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(rate > 0, slack[None, :] / rate, np.inf).min(axis=1)
        return r[0] if single else r

    def gauge(self, points, origin):
        P = np.atleast_2d(np.asarray(points, dtype=float))
        o = np.asarray(origin, dtype=float)
        g = ((P - o) @ self.A.T) / (self.b - self.A @ o)
        return np.maximum(g.max(axis=1), 0.0)

    # -- exact volumetrics ----------------------------------------------------
    def volume_exact(self):
        return float(self._data.simplex_volumes.sum())

    def moments_exact(self):
        V, first, second = simplex_moments(self._data.simplices, self._data.simplex_volumes)
        return float(V), first / V, second

    def cap_volumes_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        c = np.atleast_1d(np.asarray(offsets, dtype=float))
        if self.dim == 2:
            return polygon_cap_areas(self.vertices, N, c)
        V = self.vertices
        full = self.volume_exact()
        out = np.empty(len(N))
        hmax = (N @ V.T).max(axis=1)
        hmin = (N @ V.T).min(axis=1)
        for j in range(len(N)):
            if c[j] <= hmin[j]:
                out[j] = full
            elif c[j] >= hmax[j]:
                out[j] = 0.0
            else:
                I, X = _cap_points(V, N[j], c[j], 0.0)
                out[j] = _hull_volume(I if X is None else np.vstack([I, X]))
        return out

    def sections_exact(self, normals, offsets):
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        c = np.atleast_1d(np.asarray(offsets, dtype=float))
        if self.dim == 2:
            return polygon_chords(self.A, self.b, N, c)
        V = self.vertices
        tol = 1e-12 * self._data.scale
        out = np.zeros(len(N))
        for j in range(len(N)):
            X = _section_points(V, N[j], c[j], tol)
            if len(X) < self.dim:
                continue
            out[j] = _hull_volume((X - X.mean(axis=0)) @ plane_basis(N[j]).T)
        return out

    def facet_areas(self) -> np.ndarray:
        """``(d-1)``-volumes of the facets."""
        out = np.empty(self.n_facets)
        for g, idx in enumerate(self.facets):
            X = self.vertices[idx]
            Y = (X - X.mean(axis=0)) @ plane_basis(self.A[g]).T
            if self.dim == 2:
                out[g] = float(np.ptp(Y[:, 0]))
            else:
                out[g] = _hull_volume(Y)
        return out

    @cached_property
    def _facet_areas(self) -> np.ndarray:
        return self.facet_areas()

    def overshoot_exact(self, x):
        x = np.asarray(x, dtype=float)
        excess = np.maximum(x @ self.A.T - self.b, 0.0)
        out = excess @ self._facet_areas / self.dim
        return float(out) if x.ndim == 1 else out

    def overshoot_gradient(self, x) -> np.ndarray:
        """Gradient (a subgradient on kinks) of the facet overshoot formula."""
        active = (self.A @ np.asarray(x, dtype=float) - self.b) > 0
        return (self._facet_areas[active, None] * self.A[active]).sum(axis=0) / self.dim

    def ordered_facet(self, g: int) -> np.ndarray:
        """Vertex indices of facet ``g`` in cyclic order (d = 3)."""
        idx = self.facets[g]
        X = self.vertices[idx]
        B = plane_basis(self.A[g])
        Y = (X - X.mean(axis=0)) @ B.T
        ang = np.arctan2(Y[:, 1], Y[:, 0])
        order = np.argsort(ang)
        # orientation: counterclockwise seen from outside
        if np.linalg.det(np.vstack([B, self.A[g]])) < 0:
            order = order[::-1]
        return idx[order]


class VPolytope(Polytope):
    """Polytope given by a vertex list; redundant points are discarded."""

    def __init__(self, vertices, _data: _HullData | None = None):
        self._data = _data if _data is not None else _HullData(vertices)
        self.dim = self._data.dim
        self.name = "vpoly"

    def to_hpolytope(self) -> "HPolytope":
        return HPolytope(self.A, self.b, _data=self._data)

    def __repr__(self):
        return f"VPolytope(d={self.dim}, vertices={self.n_vertices})"


class HPolytope(Polytope):
    """Polytope ``{x : <a_i, x> <= b_i}``; normals are rescaled to unit length."""

    def __init__(self, normals, offsets, _data: _HullData | None = None):
        A = np.atleast_2d(np.asarray(normals, dtype=float))
        b = np.asarray(offsets, dtype=float).reshape(-1)
        if len(A) != len(b):
            raise ValueError("need one offset per normal")
        norms = np.linalg.norm(A, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero normal in constraint list")
        self.constraint_normals = A / norms[:, None]
        self.constraint_offsets = b / norms
        self.dim = A.shape[1]
        self.name = "hpoly"
        if _data is not None:
            self._data = _data

    @cached_property
    def _data(self) -> _HullData:
        return hpoly_vertices(self)._data

    def _constraints(self):
        return self.constraint_normals, self.constraint_offsets

    @property
    def redundant(self) -> np.ndarray:
        """Indices of input constraints that do not support a facet."""
        hit = np.zeros(len(self.constraint_normals), dtype=bool)
        for a in self.A:
            hit |= np.abs(self.constraint_normals - a).max(axis=1) < 1e-9
        return np.nonzero(~hit)[0]

    def to_vpolytope(self) -> VPolytope:
        return VPolytope(self.vertices, _data=self._data)

    def __repr__(self):
        return f"HPolytope(d={self.dim}, constraints={len(self.constraint_normals)})"


def convex_hull(points) -> tuple[VPolytope, HPolytope]:
    """Hull of a point set in ``d <= 4`` as vertex and facet descriptions.

    Facet normals are unit length and outward; offsets are recomputed from the
    unperturbed vertices, so every input point satisfies every constraint.

    Raises
    ------
    Degenerate
        If the points are affinely dependent.
    """
    data = _HullData(points)
    return VPolytope(None, _data=data), HPolytope(data.A, data.b, _data=data)


def chebyshev_center(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Center and radius of the largest ball in ``{A x <= b}`` (unit-norm rows)."""
    d = A.shape[1]
    cost = np.zeros(d + 1)
    cost[-1] = -1.0
    res = linprog(cost, A_ub=np.hstack([A, np.ones((len(A), 1))]), b_ub=b,
                  bounds=[(None, None)] * d + [(0, None)], method="highs")
    if res.status == 2:
        raise EmptyIntersection("halfspace system is infeasible")
    if res.status == 3:
        raise Unbounded("Chebyshev ball is unbounded")
    if res.status != 0:
        raise Degenerate(f"Chebyshev LP failed: {res.message}")
    return res.x[:d], float(res.x[-1])


def _check_bounded(A: np.ndarray, b: np.ndarray):
    d = A.shape[1]
    for i in range(d):
        for s in (1.0, -1.0):
            cost = np.zeros(d)
            cost[i] = -s
            res = linprog(cost, A_ub=A, b_ub=b, bounds=[(None, None)] * d, method="highs")
            if res.status == 3:
                raise Unbounded(f"unbounded along {'+' if s > 0 else '-'}e_{i}")
            if res.status == 2:
                raise EmptyIntersection("halfspace system is infeasible")


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    if len(points) == 0:
        return points
    tree = cKDTree(points)
    keep = np.ones(len(points), dtype=bool)
    for i, j in sorted(tree.query_pairs(tol)):
        if keep[i] and keep[j]:
            keep[j] = False
    return points[keep]


def enumerate_vertices(A: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Vertices of ``{A x <= b}`` by solving every ``d``-subset of constraints."""
    d = A.shape[1]
    combos = np.array(list(itertools.combinations(range(len(A)), d)))
    if len(combos) == 0:
        return np.zeros((0, d))
    M = A[combos]
    rhs = b[combos]
    det = np.linalg.det(M)
    ok = np.abs(det) > 1e-12
    X = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
    scale = max(1.0, np.abs(b).max())
    feasible = np.all(X @ A.T <= b + tol * scale, axis=1)
    return _dedupe(X[feasible], tol * scale)


def hpoly_vertices(P: HPolytope) -> VPolytope:
    """Vertex description of a bounded H-polytope (``d <= 4``).

    Small systems are solved by facet-subset intersection with feasibility
    filtering; large ones go through Qhull's halfspace intersection.

    Raises
    ------
    Unbounded
        If a coordinate direction can be maximized without bound.
    """
    A, b = P.constraint_normals, P.constraint_offsets
    d = A.shape[1]
    _check_dim(d)
    _check_bounded(A, b)
    center, radius = chebyshev_center(A, b)
    if radius <= 1e-12 * max(1.0, np.abs(b).max()):
        raise Degenerate("halfspace system has empty interior")
    if math.comb(len(A), d) <= BRUTE_FORCE_LIMIT:
        V = enumerate_vertices(A, b)
    else:
        hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
        scale = max(1.0, np.abs(b).max())
        V = _dedupe(hs.intersections, DEDUP_TOL * scale)
    return VPolytope(V)


# ---------------------------------------------------------------------------
# oracle-only wrapper and presets
# ---------------------------------------------------------------------------

class OracleView(ConvexBody):
    """Exposes only the oracle of another body (membership, support, balls).

    Every closed-form path is hidden, so measuring routines fall back to
    sampling; useful to cross-check exact results.
    """

    def __init__(self, body: ConvexBody):
        self._body = body
        self.dim = body.dim
        self.interior_margin = body.interior_margin
        self.name = f"oracle({body.name})"

    def contains(self, points, tol=0.0):
        return self._body.contains(points, tol)

    def support(self, xi):
        return self._body.support(xi)

    def support_point(self, xi):
        return self._body.support_point(xi)

    def interior_point(self):
        return self._body.interior_point()

    def bounding_ball(self):
        return self._body.bounding_ball()


def cube(d: int, half: float = 1.0, center=None) -> HPolytope:
    c = np.zeros(d) if center is None else np.asarray(center, dtype=float)
    A = np.vstack([np.eye(d), -np.eye(d)])
    return HPolytope(A, np.concatenate([half + c, half - c]))


def box(lo, hi) -> HPolytope:
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    d = len(lo)
    return HPolytope(np.vstack([np.eye(d), -np.eye(d)]), np.concatenate([hi, -lo]))


def cross_polytope(d: int, radius: float = 1.0) -> VPolytope:
    return VPolytope(np.vstack([radius * np.eye(d), -radius * np.eye(d)]))


def standard_simplex(d: int) -> VPolytope:
    return VPolytope(np.vstack([np.zeros(d), np.eye(d)]))


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> VPolytope:
    theta = phase + 2 * np.pi * np.arange(n) / n
    return VPolytope(radius * np.column_stack([np.cos(theta), np.sin(theta)]))


def random_polytope(d: int, seed: int, n_points: int | None = None) -> VPolytope:
    """Hull of 10--40 uniform points of the unit ball; degenerate draws are redrawn."""
    for attempt in range(100):
        rng = make_rng(seed, "random-polytope", d, attempt)
        n = int(n_points or rng.integers(10, 41))
        try:
            P = VPolytope(uniform_ball(rng, n, np.zeros(d), 1.0))
        except Degenerate:
            continue
        if P.volume_exact() > 1e-3 * unit_ball_volume(d):
            return P
    raise Degenerate("could not draw a nondegenerate random polytope")


def as_polytope(K: ConvexBody) -> Polytope:
    """Return ``K`` as a polytope, materializing affine images of polytopes."""
    if isinstance(K, Polytope):
        return K
    if isinstance(K, AffineImage) and isinstance(K.base, Polytope):
        return K.as_polytope()
    if isinstance(K, AffineImage) and isinstance(K.base, AffineImage):
        inner = K.base
        return as_polytope(AffineImage(inner.base, K.T @ inner.T, K.T @ inner.v + K.v))
    raise TypeError(f"{K!r} is not a polytope")


def is_polytope(K: ConvexBody) -> bool:
    try:
        as_polytope(K)
    except TypeError:
        return False
    return True
