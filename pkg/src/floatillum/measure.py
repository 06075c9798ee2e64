"""Volumes, moments, sections and symmetric differences.

Every routine first tries the body's closed form and falls back to seeded
Monte Carlo sampling inside the bounding ball.  Monte Carlo results are
deterministic in ``(body, samples, seed)`` independent of the worker count.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bodycore import (ConvexBody, Polytope, as_polytope, is_polytope, plane_basis,
                       unit_ball_volume)
from .errors import Degenerate, NoExactPath
from .seeding import batched, uniform_ball

DEFAULT_SAMPLES = 10 ** 6


@dataclass(frozen=True)
class VolumeEstimate:
    """A volume with its standard error.

    ``flag`` carries side information such as ``"empty"`` for a section that
    missed the body or ``"zero-hits"`` when no sample landed in the region;
    in the latter case ``std_error`` is ``V_ball / n`` so that ``3 * std_error``
    is the rule-of-three 95% upper bound.
    """

    value: float
    std_error: float = 0.0
    samples: int = 0
    method: str = "exact"
    seed: int | None = None
    flag: str | None = None

    @property
    def exact(self) -> bool:
        return self.method == "exact"

    def within(self, other: float, sigmas: float = 3.0, floor: float = 0.0) -> bool:
        return abs(self.value - other) <= sigmas * self.std_error + floor

    def __float__(self):
        return float(self.value)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class InertiaData:
    """Volume, centroid and second moment ``int (x-o)(x-o)^T dx`` about ``origin``."""

    volume: float
    centroid: np.ndarray
    second_moment: np.ndarray
    origin: np.ndarray
    method: str = "exact"
    samples: int = 0

    def about(self, origin) -> "InertiaData":
        """Same data with the second moment re-taken about another origin."""
        o = np.asarray(origin, dtype=float)
        shift = self.centroid - self.origin
        about_c = self.second_moment - self.volume * np.outer(shift, shift)
        s = self.centroid - o
        return InertiaData(self.volume, self.centroid, about_c + self.volume * np.outer(s, s),
                           o, self.method, self.samples)


def estimates_to_csv(estimates, seeds=None) -> str:
    """CSV text with columns ``value, std_error, samples, method, seed``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "std_error", "samples", "method", "seed"])
    for i, e in enumerate(estimates):
        seed = e.seed if seeds is None else seeds[i]
        w.writerow([repr(float(e.value)), repr(float(e.std_error)), e.samples, e.method,
                    "" if seed is None else seed])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# exact paths
# ---------------------------------------------------------------------------

def polytope_volume_exact(P: Polytope) -> VolumeEstimate:
    """Volume of a polytope (``d <= 4``) by coning facet triangles from an interior point."""
    P = as_polytope(P)
    V = P.volume_exact()
    R = P.bounding_ball()[1]
    if V < 1e-14 * R ** P.dim:
        raise Degenerate("polytope volume collapsed")
    return VolumeEstimate(V, 0.0, 0, "exact")


def has_exact_volume(K: ConvexBody) -> bool:
    try:
        K.volume_exact()
    except (NoExactPath, NotImplementedError):
        return False
    return True


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

def _binomial(hits: int, n: int, box: float, seed, samples_label: int | None = None) -> VolumeEstimate:
    n_label = n if samples_label is None else samples_label
    if hits == 0:
        return VolumeEstimate(0.0, box / n, n_label, "montecarlo", seed, "zero-hits")
    p = hits / n
    return VolumeEstimate(box * p, box * math.sqrt(p * (1 - p) / n), n_label, "montecarlo", seed)


def mc_volume(K: ConvexBody, samples: int = DEFAULT_SAMPLES, seed: int = 0,
              workers: int | None = None) -> VolumeEstimate:
    """Hit-or-miss volume in the bounding ball with a binomial standard error."""
    c, R = K.bounding_ball()
    counts = batched(samples, seed, "mc-volume",
                     lambda rng, n: int(K.contains(uniform_ball(rng, n, c, R)).sum()), workers)
    return _binomial(sum(counts), samples, unit_ball_volume(K.dim) * R ** K.dim, seed)


class PointCloud:
    """Uniform samples of the bounding ball that fall inside ``K``.

    The same cloud is reused for every cap query, so volume-versus-depth curves
    built from it are monotone (common random numbers).
    """

    def __init__(self, K: ConvexBody, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                 workers: int | None = None):
        c, R = K.bounding_ball()
        chunks = batched(samples, seed, "point-cloud",
                         lambda rng, n: (lambda X: X[K.contains(X)])(uniform_ball(rng, n, c, R)),
                         workers)
        self.points = np.vstack(chunks) if chunks else np.zeros((0, K.dim))
        self.n = int(samples)
        self.seed = seed
        self.box = unit_ball_volume(K.dim) * R ** K.dim
        self.dim = K.dim

    @property
    def volume(self) -> VolumeEstimate:
        return _binomial(len(self.points), self.n, self.box, self.seed)

    def cap_counts(self, normals, offsets) -> np.ndarray:
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        proj = self.points @ N.T
        return (proj >= np.asarray(offsets, dtype=float)[None, :]).sum(axis=0)

    def cap_volumes(self, normals, offsets) -> list[VolumeEstimate]:
        return [_binomial(int(h), self.n, self.box, self.seed)
                for h in self.cap_counts(normals, offsets)]

    def sorted_projections(self, normal) -> np.ndarray:
        """Projections sorted in decreasing order (index ``k`` leaves ``k+1`` points above)."""
        return np.sort(self.points @ np.asarray(normal, dtype=float))[::-1]

    @property
    def unit_mass(self) -> float:
        """Volume carried by one sample."""
        return self.box / self.n

    def moments(self, origin) -> InertiaData:
        Y = self.points - origin
        w = self.unit_mass
        V = len(Y) * w
        if len(Y) == 0:
            raise Degenerate("no samples fell inside the body")
        return InertiaData(V, self.points.mean(axis=0), w * Y.T @ Y, np.asarray(origin, float),
                           "montecarlo", self.n)


def volume(K: ConvexBody, samples: int = DEFAULT_SAMPLES, seed: int = 0,
           mode: str = "auto", workers: int | None = None) -> VolumeEstimate:
    """Exact volume when the body has a closed form, Monte Carlo otherwise."""
    if mode in ("auto", "exact"):
        try:
            V = K.volume_exact()
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
        else:
            if is_polytope(K):
                return polytope_volume_exact(as_polytope(K))
            return VolumeEstimate(V, 0.0, 0, "exact")
    return mc_volume(K, samples, seed, workers)


def inertia(K: ConvexBody, origin=None, mode: str = "auto", samples: int = DEFAULT_SAMPLES,
            seed: int = 0, workers: int | None = None) -> InertiaData:
    """Volume, centroid and second moment about ``origin`` (default: 0)."""
    o = np.zeros(K.dim) if origin is None else np.asarray(origin, dtype=float)
    if mode in ("auto", "exact"):
        try:
            V, c, M0 = K.moments_exact()
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
        else:
            if V < 1e-14 * K.bounding_ball()[1] ** K.dim:
                raise Degenerate("body volume collapsed")
            M = M0 - V * (np.outer(o, c) + np.outer(c, o) - np.outer(o, o))
            return InertiaData(V, c, 0.5 * (M + M.T), o, "exact")
    return PointCloud(K, samples, seed, workers).moments(o)


def centroid(K: ConvexBody, **kw) -> np.ndarray:
    return inertia(K, **kw).centroid


def cut_volumes(K: ConvexBody, normals, offsets, mode: str = "auto",
                samples: int = DEFAULT_SAMPLES, seed: int = 0, cloud: PointCloud | None = None):
    """``vol{x in K : <x, n_j> >= c_j}`` as an array of values and of standard errors."""
    N = np.atleast_2d(np.asarray(normals, dtype=float))
    c = np.atleast_1d(np.asarray(offsets, dtype=float))
    if mode in ("auto", "exact") and cloud is None:
        try:
            return np.asarray(K.cap_volumes_exact(N, c), dtype=float), np.zeros(len(N))
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
    cloud = cloud or PointCloud(K, samples, seed)
    hits = cloud.cap_counts(N, c)
    p = hits / cloud.n
    err = cloud.box * np.sqrt(p * (1 - p) / cloud.n)
    return cloud.box * p, np.where(hits == 0, cloud.unit_mass, err)


def section_volume(K: ConvexBody, point, normal, mode: str = "auto",
                   samples: int = 200_000, seed: int = 0) -> VolumeEstimate:
    """``vol_{d-1}`` of ``K`` intersected with the hyperplane through ``point`` normal to ``normal``."""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    off = float(np.dot(point, n))
    if mode in ("auto", "exact"):
        try:
            v = float(K.sections_exact(n[None, :], np.array([off]))[0])
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
        else:
            return VolumeEstimate(v, 0.0, 0, "exact", flag="empty" if v <= 0 else None)
    return mc_sections(K, n[None, :], np.array([off]), samples, seed)[0]


def sections(K: ConvexBody, normals, offsets, mode: str = "auto", samples: int = 200_000,
             seed: int = 0) -> list[VolumeEstimate]:
    N = np.atleast_2d(np.asarray(normals, dtype=float))
    c = np.atleast_1d(np.asarray(offsets, dtype=float))
    if mode in ("auto", "exact"):
        try:
            vals = K.sections_exact(N, c)
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
        else:
            return [VolumeEstimate(float(v), 0.0, 0, "exact", flag="empty" if v <= 0 else None)
                    for v in vals]
    return mc_sections(K, N, c, samples, seed)


def mc_sections(K: ConvexBody, normals, offsets, samples: int = 200_000,
                seed: int = 0) -> list[VolumeEstimate]:
    """In-plane rejection sampling inside the trace of the bounding ball."""
    center, R = K.bounding_ball()
    d = K.dim
    out = []
    for j, (n, off) in enumerate(zip(np.atleast_2d(normals), np.atleast_1d(offsets))):
        dist = off - float(np.dot(center, n))
        if abs(dist) >= R:
            out.append(VolumeEstimate(0.0, 0.0, samples, "montecarlo", seed, "empty"))
            continue
        rho = math.sqrt(R * R - dist * dist)
        foot = center + dist * n
        B = plane_basis(n)
        counts = batched(samples, seed, f"section-{j}",
                         lambda rng, m: int(K.contains(foot + uniform_ball(rng, m, np.zeros(d - 1), rho) @ B).sum()))
        est = _binomial(sum(counts), samples, unit_ball_volume(d - 1) * rho ** (d - 1), seed)
        if est.flag == "zero-hits":
            est = VolumeEstimate(0.0, est.std_error, samples, "montecarlo", seed, "empty")
        out.append(est)
    return out


def symmetric_difference(A: ConvexBody, B: ConvexBody, samples: int = DEFAULT_SAMPLES,
                         seed: int = 0, workers: int | None = None) -> VolumeEstimate:
    """``vol(A \\ B) + vol(B \\ A)``.

    If one body is a polytope whose vertices all lie in the other and both
    volumes are known in closed form, the result is the exact volume
    difference; otherwise XOR membership is sampled in a ball covering both.
    """
    if A.dim != B.dim:
        raise ValueError("bodies live in different dimensions")
    for inner, outer in ((A, B), (B, A)):
        if is_polytope(inner) and has_exact_volume(outer) and has_exact_volume(inner):
            P = as_polytope(inner)
            if np.all(outer.contains(P.vertices, 1e-12 * outer.scale)):
                diff = max(outer.volume_exact() - inner.volume_exact(), 0.0)
                return VolumeEstimate(diff, 0.0, 0, "exact")
    ca, ra = A.bounding_ball()
    cb, rb = B.bounding_ball()
    gap = np.linalg.norm(ca - cb)
    if gap + rb <= ra:
        c, R = ca, ra
    elif gap + ra <= rb:
        c, R = cb, rb
    else:
        R = 0.5 * (gap + ra + rb)
        c = ca + (R - ra) * (cb - ca) / gap
    counts = batched(samples, seed, "symmetric-difference",
                     lambda rng, n: (lambda X: int((A.contains(X) != B.contains(X)).sum()))(
                         uniform_ball(rng, n, c, R)), workers)
    return _binomial(sum(counts), samples, unit_ball_volume(A.dim) * R ** A.dim, seed)


def hausdorff_ball_inscribed(P: Polytope, center=None, radius: float = 1.0) -> float:
    """Hausdorff distance between a ball and a polytope inscribed in it."""
    c = np.zeros(P.dim) if center is None else np.asarray(center, dtype=float)
    return float(radius - (P.b - P.A @ c).min())
