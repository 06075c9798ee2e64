"""Caps ``{y in K : <y, N> >= <x, N> - depth}`` and the depth giving a prescribed volume.

The solver works on the cut offset ``s`` rather than the depth: for every
unit normal ``u`` it finds ``s(u)`` with ``vol{y in K : <y, u> >= s(u)} = t``.
The cap volume is nonincreasing in ``s`` on ``[-h(-u), h(u)]``, which makes a
safeguarded false-position iteration valid.  In sampling mode the offset is
read directly off the sorted sample projections.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bodycore import ConvexBody
from .errors import NoExactPath, NotSupporting, SolverStall, TargetTooLarge
from .measure import PointCloud, VolumeEstimate, cut_volumes, volume

SUPPORT_TOL = 1e-6
OPEN_CAP_MARGIN = 1e-12
EXACT_TOL_REL = 1e-10
MC_TOL_REL = 5e-2


@dataclass(frozen=True)
class Cap:
    """A cap anchored at the boundary point ``anchor`` with outer normal ``normal``."""

    anchor: np.ndarray
    normal: np.ndarray
    depth: float
    target_volume: float
    achieved_volume: VolumeEstimate

    @property
    def base_offset(self) -> float:
        """Offset ``c`` of the cutting hyperplane ``<y, N> = c``."""
        return float(self.anchor @ self.normal) - self.depth

    def as_dict(self) -> dict:
        return {"anchor": self.anchor.tolist(), "normal": self.normal.tolist(),
                "depth": self.depth, "target_volume": self.target_volume,
                "achieved_volume": asdict(self.achieved_volume)}

    @classmethod
    def from_dict(cls, data: dict) -> "Cap":
        return cls(np.asarray(data["anchor"], float), np.asarray(data["normal"], float),
                   float(data["depth"]), float(data["target_volume"]),
                   VolumeEstimate(**data["achieved_volume"]))


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def check_supporting(K: ConvexBody, x, N, tol: float = SUPPORT_TOL):
    gap = float(K.support(N)) - float(np.dot(x, N))
    if abs(gap) > tol * max(1.0, K.scale):
        raise NotSupporting(f"<x, N> is {gap:.3g} below the support value")


def cap_volume(K: ConvexBody, x, N, depth: float, mode: str = "auto",
               samples: int = 10 ** 6, seed: int = 0, cloud: PointCloud | None = None) -> VolumeEstimate:
    """Volume of ``K`` on the side of ``<y, N> = <x, N> - depth`` that contains ``x``.

    Raises
    ------
    NotSupporting
        If ``x`` does not attain the support value in direction ``N``.
    """
    N = _unit(N)
    x = np.asarray(x, dtype=float)
    check_supporting(K, x, N)
    vals, errs = cut_volumes(K, N[None, :], np.array([x @ N - depth]), mode, samples, seed, cloud)
    if errs[0] == 0 and cloud is None:
        return VolumeEstimate(float(vals[0]), 0.0, 0, "exact")
    n = cloud.n if cloud is not None else samples
    return VolumeEstimate(float(vals[0]), float(errs[0]), n, "montecarlo", seed)


def _false_position(f, lo, hi, flo, fhi, ftol, xtol, max_iter=200):
    """Vectorized Illinois iteration for decreasing ``f`` with ``f(lo) > 0 > f(hi)``."""
    lo, hi, flo, fhi = (np.array(a, dtype=float) for a in (lo, hi, flo, fhi))
    x = 0.5 * (lo + hi)
    active = np.ones(len(lo), dtype=bool)
    side = np.zeros(len(lo), dtype=int)
    for it in range(max_iter):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        a, b, fa, fb = lo[idx], hi[idx], flo[idx], fhi[idx]
        xs = (a * fb - b * fa) / (fb - fa)
        # every fourth step is a plain bisection so the bracket always shrinks
        if it % 4 == 3:
            xs = 0.5 * (a + b)
        bad = ~np.isfinite(xs) | (xs <= np.minimum(a, b)) | (xs >= np.maximum(a, b))
        xs = np.where(bad, 0.5 * (a + b), xs)
        fs = f(xs, idx)
        x[idx] = xs
        pos = fs > 0
        lo[idx[pos]] = xs[pos]
        flo[idx[pos]] = fs[pos]
        hi[idx[~pos]] = xs[~pos]
        fhi[idx[~pos]] = fs[~pos]
        s = side[idx]
        # Illinois: halve the stale endpoint when the same side is kept twice
        keep_hi = pos & (s == 1)
        keep_lo = ~pos & (s == -1)
        fhi[idx[keep_hi]] *= 0.5
        flo[idx[keep_lo]] *= 0.5
        side[idx] = np.where(pos, 1, -1)
        done = (np.abs(fs) <= ftol[idx]) | (np.abs(hi[idx] - lo[idx]) <= xtol[idx])
        active[idx[done]] = False
    return x


def cap_offsets(K: ConvexBody, normals, t: float, tol_abs: float = 0.0,
                tol_rel: float | None = None, mode: str = "auto", cloud: PointCloud | None = None,
                samples: int = 10 ** 6, seed: int = 0) -> np.ndarray:
    """Offsets ``s_j`` with ``vol{y in K : <y, u_j> >= s_j} = t`` for unit ``u_j``.

    Raises
    ------
    SolverStall
        In sampling mode, when the binomial noise at level ``t`` exceeds the
        tolerance.
    """
    U = np.atleast_2d(np.asarray(normals, dtype=float))
    exact = cloud is None and mode != "mc"
    if exact:
        try:
            K.cap_volumes_exact(U[:1], np.array([float(K.support(U[0]))]))
        except (NoExactPath, NotImplementedError):
            if mode == "exact":
                raise
            exact = False
    if not exact:
        cloud = cloud or PointCloud(K, samples, seed)
        return _mc_offsets(cloud, U, t, tol_abs, MC_TOL_REL if tol_rel is None else tol_rel)
    tol_rel = EXACT_TOL_REL if tol_rel is None else tol_rel
    hi = np.atleast_1d(K.support(U))
    lo = -np.atleast_1d(K.support(-U))
    full = K.volume_exact()
    ftol = np.full(len(U), max(tol_abs, tol_rel * t))
    xtol = 1e-15 * np.maximum(np.abs(hi) + np.abs(lo), 1e-300)

    def f(s, idx):
        return K.cap_volumes_exact(U[idx], s) - t

    return _false_position(f, lo, hi, np.full(len(U), full - t), np.full(len(U), -t), ftol, xtol)


def _mc_offsets(cloud: PointCloud, U, t, tol_abs, tol_rel):
    k = int(round(t / cloud.unit_mass))
    noise = np.sqrt(max(k, 1)) * cloud.unit_mass
    if noise > max(tol_abs, tol_rel * t):
        raise SolverStall(f"sampling noise {noise:.3g} exceeds tolerance at level {t:.3g}", noise)
    if k >= len(cloud.points):
        raise TargetTooLarge("level exceeds the sampled volume")
    P = cloud.points @ U.T
    if k == 0:
        return P.max(axis=0) + 1e-12
    # offset between the k-th and (k+1)-th largest projection leaves k samples above
    part = -np.partition(-P, (k - 1, k), axis=0)
    return 0.5 * (part[k - 1] + part[k])


def solve_cap_depth(K: ConvexBody, x, N, t: float, tol_abs: float = 0.0,
                    tol_rel: float | None = None, mode: str = "auto",
                    cloud: PointCloud | None = None, samples: int = 10 ** 6, seed: int = 0) -> Cap:
    """Depth of the cap at ``(x, N)`` whose volume is ``t``.

    The default relative tolerance is ``1e-10`` with closed-form cap volumes
    and ``5e-2`` when sampling.

    Raises
    ------
    TargetTooLarge
        If ``t`` is not below the volume of ``K``.
    SolverStall
        If sampling noise exceeds the tolerance; raise ``samples``.
    """
    N = _unit(N)
    x = np.asarray(x, dtype=float)
    if t <= 0:
        raise ValueError("cap volume must be positive")
    check_supporting(K, x, N)
    V = cloud.volume.value if cloud is not None else volume(K, samples, seed).value
    if t >= V:
        raise TargetTooLarge(f"level {t:.6g} is not below the volume {V:.6g}")
    s = cap_offsets(K, N[None, :], t, tol_abs, tol_rel, mode, cloud, samples, seed)[0]
    depth = float(x @ N - s)
    achieved = cap_volume(K, x, N, depth, mode, samples, seed, cloud)
    return Cap(x, N, depth, float(t), achieved)


def cap_contains(cap: Cap, p, K: ConvexBody | None = None,
                 margin: float = OPEN_CAP_MARGIN) -> bool:
    """Open-cap membership: ``p in K`` and ``<p, N> > <x, N> - depth + margin * scale``."""
    p = np.asarray(p, dtype=float)
    scale = 1.0 if K is None else max(1.0, K.scale)
    if K is not None and not K.membership(p):
        return False
    return bool(p @ cap.normal > cap.base_offset + margin * scale)


def segment_area(h):
    """Area of the unit-disk segment of height ``h``."""
    h = np.asarray(h, dtype=float)
    return np.arccos(1 - h) - (1 - h) * np.sqrt(np.clip(2 * h - h * h, 0, None))
