"""Polytope constructions: greedy inscribed polytopes, circumscribed facet polytopes, ball approximants.

Greedy inscribed polytope
-------------------------
A candidate vertex is the support point ``x`` of ``K`` in a direction ``u``
with normal ``N = u``.  Its cap ``{y in K : <y, u> >= s(u)}`` has volume ``t``,
and ``x`` is accepted iff no earlier vertex lies in the open cap, which is
``h_P(u) <= s(u)`` for the current hull ``P``.  Random candidates are drawn
until ``rejection_streak_limit`` consecutive rejections; a deterministic sweep
over a dense direction set then accepts any remaining direction with
``h_P(u) < s(u)``.  When no such direction is left,
``h_P >= s >= h_{K_t}`` and therefore ``K_t`` lies in ``P``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bodycore import (ConvexBody, HPolytope, VPolytope, _check_bounded, plane_basis,
                       unit_ball_volume)
from .caps import OPEN_CAP_MARGIN, Cap, cap_offsets
from .directions import sphere_directions
from .errors import Degenerate, TargetTooLarge
from .floating import THEOREM21_THRESHOLD, _golden_min
from .measure import VolumeEstimate, cut_volumes, volume
from .seeding import make_rng, uniform_sphere


@dataclass
class GreedyRun:
    """Record of one greedy construction, replayable from its parameters."""

    vertices: list
    caps: list
    t: float
    rejection_streak_limit: int
    terminated_by: str
    seed: int
    candidates: int = 0
    sweep_accepts: int = 0
    decisions: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def audit(self, scale: float = 1.0) -> list[tuple[int, int]]:
        """Pairs ``(j, k)``, ``j < k``, where vertex ``j`` lies in the open cap of vertex ``k``."""
        bad = []
        for k, cap in enumerate(self.caps):
            for j in range(k):
                if self.vertices[j] @ cap.normal > cap.base_offset + OPEN_CAP_MARGIN * scale:
                    bad.append((j, k))
        return bad

    def as_dict(self) -> dict:
        return {"t": self.t, "seed": self.seed, "n": self.n,
                "rejection_streak_limit": self.rejection_streak_limit,
                "terminated_by": self.terminated_by, "candidates": self.candidates,
                "sweep_accepts": self.sweep_accepts,
                "vertices": [np.asarray(v).tolist() for v in self.vertices],
                "caps": [c.as_dict() for c in self.caps], "decisions": self.decisions}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "GreedyRun":
        return cls([np.asarray(v, float) for v in data["vertices"]],
                   [Cap.from_dict(c) for c in data["caps"]], data["t"],
                   data["rejection_streak_limit"], data["terminated_by"], data["seed"],
                   data.get("candidates", 0), data.get("sweep_accepts", 0),
                   data.get("decisions", []))


def _sweep_directions(d: int, m: int) -> np.ndarray:
    return sphere_directions(d, m, "spread")


class _Greedy:
    def __init__(self, K, t, margin, mode, seed):
        self.K, self.t, self.margin, self.mode, self.seed = K, t, margin, mode, seed
        self.X: list[np.ndarray] = []
        self.caps: list[Cap] = []
        self.decisions: list = []

    def offsets(self, U):
        return cap_offsets(self.K, U, self.t, mode=self.mode, seed=self.seed)

    def hull_support(self, U):
        if not self.X:
            return np.full(len(U), -np.inf)
        return (U @ np.array(self.X).T).max(axis=1)

    def consider(self, u, s, phase):
        """Accept the support point in direction ``u`` if its open cap is vertex-free."""
        hP = self.hull_support(u[None, :])[0]
        ok = hP <= s + self.margin
        if ok:
            x = np.atleast_2d(self.K.support_point(u))[0]
            hK = float(self.K.support(u))
            depth = hK - s
            vals, errs = cut_volumes(self.K, u[None, :], np.array([s]), self.mode, seed=self.seed)
            method = "exact" if errs[0] == 0 else "montecarlo"
            self.X.append(x)
            self.caps.append(Cap(x, u.copy(), float(depth), self.t,
                                 VolumeEstimate(float(vals[0]), float(errs[0]), 0, method)))
        self.decisions.append([phase, bool(ok)])
        return ok


def greedy_inscribed(K: ConvexBody, t: float, seed: int = 0, rejection_streak_limit: int = 200,
                     max_iterations: int = 20000, threshold: float = THEOREM21_THRESHOLD,
                     batch: int = 64, sweep: bool = True, sweep_directions: int | None = None,
                     mode: str = "auto", keep_decisions: bool = False) -> tuple[VPolytope, GreedyRun]:
    """Greedy inscribed polytope ``P_n`` with ``K_t`` inside ``P_n`` inside ``K``.

    Parameters
    ----------
    threshold : float
        Largest admissible ``t / vol(K)``; defaults to ``e^{-5}/4``.
    sweep : bool
        Run the deterministic saturation sweep after the random phase.

    Raises
    ------
    TargetTooLarge
        If ``t`` exceeds ``threshold * vol(K)``.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    V = volume(K, seed=seed).value
    if t > threshold * V:
        raise TargetTooLarge(f"t = {t:.4g} exceeds {threshold:.4g} * vol(K) = {threshold * V:.4g}")
    d = K.dim
    margin = OPEN_CAP_MARGIN * max(1.0, K.scale)
    g = _Greedy(K, t, margin, mode, seed)
    rng = make_rng(seed, "greedy-candidates")
    streak, tried, terminated = 0, 0, "iteration_cap"
    while tried < max_iterations:
        U = uniform_sphere(rng, batch, d)
        S = g.offsets(U)
        for u, s in zip(U, S):
            tried += 1
            streak = 0 if g.consider(u, s, "random") else streak + 1
            if streak >= rejection_streak_limit:
                terminated = "saturation"
                break
            if tried >= max_iterations:
                break
        if terminated == "saturation":
            break
    sweep_accepts = 0
    if sweep:
        sweep_accepts = _saturation_sweep(g, sweep_directions)
        if sweep_accepts or terminated == "saturation":
            terminated = "saturation"
    if len(g.X) < d + 1:
        raise Degenerate(f"only {len(g.X)} vertices accepted; t is too large for a full-dimensional hull")
    P = VPolytope(np.array(g.X))
    run = GreedyRun(g.X, g.caps, float(t), rejection_streak_limit, terminated, seed, tried,
                    sweep_accepts, g.decisions if keep_decisions else [])
    return P, run


def _saturation_sweep(g: _Greedy, m: int | None) -> int:
    """Accept directions with ``h_P(u) < s(u)`` until none is found on a dense set.

    In the plane the search is certified up to a Lipschitz bound: after the
    grid, every interval whose endpoint values are within ``L * spacing`` of
    zero is minimized by golden section.
    """
    K, d = g.K, g.K.dim
    m = m or (4096 if d == 2 else 8000)
    if d == 2:
        theta = 2 * np.pi * np.arange(m) / m
        U = np.column_stack([np.cos(theta), np.sin(theta)])
    else:
        U = _sweep_directions(d, m)
    S = g.offsets(U)
    c, R = K.bounding_ball()
    lip = 2.0 * (np.linalg.norm(c) + R)
    accepts = 0
    for _ in range(100000):
        f = g.hull_support(U) - S
        j = int(np.argmin(f))
        if f[j] < -g.margin:
            g.consider(U[j], S[j], "sweep")
            accepts += 1
            continue
        found = _refine(g, U, f, lip, m)
        if found is None:
            break
        u, s = found
        g.consider(u, s, "sweep")
        accepts += 1
    return accepts


def _refine(g: _Greedy, U, f, lip, m):
    d = g.K.dim
    if d == 2:
        return _refine_planar(g, f, lip, m)
    # higher dimensions: local descent from the lowest grid values
    order = np.argsort(f, kind="stable")[:8]
    step = 2.0 * math.sqrt(4.0 * math.pi / len(U))
    for j in order:
        u = U[j].copy()
        for _ in range(6):
            improved = False
            for e in plane_basis(u):
                val = lambda th: float(
                    g.hull_support((math.cos(th) * u + math.sin(th) * e)[None, :])[0]
                    - g.offsets((math.cos(th) * u + math.sin(th) * e)[None, :])[0])
                th, v = _golden_min(val, -step, step, 30)
                if v < val(0.0):
                    u = math.cos(th) * u + math.sin(th) * e
                    u /= np.linalg.norm(u)
                    improved = True
                if v < -g.margin:
                    return u, float(g.offsets(u[None, :])[0])
            if not improved:
                break
    return None


def _refine_planar(g: _Greedy, f, lip, m, sub: int = 8, min_width: float = 1e-12):
    """Subdivide angular intervals that the Lipschitz bound cannot clear.

    On ``[a, a + w]`` the gap ``h_P - s`` is at least
    ``min(f(a), f(a + w)) - lip * w``; intervals where this is negative are
    split into ``sub`` pieces and all new angles are evaluated in one batch.
    """
    width = 2 * np.pi / m
    low = np.minimum(f, np.roll(f, -1))
    starts = width * np.nonzero(low < lip * width)[0]
    while len(starts) and width > min_width:
        T = (starts[:, None] + width * np.arange(sub + 1) / sub).ravel()
        U = np.column_stack([np.cos(T), np.sin(T)])
        S = g.offsets(U)
        vals = g.hull_support(U) - S
        j = int(np.argmin(vals))
        if vals[j] < -g.margin:
            return U[j], float(S[j])
        width /= sub
        V = vals.reshape(len(starts), sub + 1)
        lows = np.minimum(V[:, :-1], V[:, 1:])
        keep = lows < lip * width
        starts = (starts[:, None] + width * np.arange(sub))[keep]
    return None


def circumscribed_facets(K: ConvexBody, directions) -> HPolytope:
    """``{y : <y, u_j> <= h_K(u_j)}``, a polytope containing ``K``.

    Raises
    ------
    Unbounded
        If the directions do not positively span the space.
    """
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    U = U / np.linalg.norm(U, axis=1)[:, None]
    h = np.atleast_1d(K.support(U))
    _check_bounded(U, h)
    return HPolytope(U, h)


def ball_inscribed_polytope(d: int, n: int, construction: str = "regular",
                            seed: int | None = None) -> tuple[VPolytope, float]:
    """Polytope with ``n`` vertices on the unit sphere and its Hausdorff distance to the ball.

    ``d_H = 1 - min_i b_i`` over the unit-normal facets ``<a_i, x> <= b_i``.

    Raises
    ------
    Degenerate
        If the points do not surround the origin (random mode retries first).
    """
    if n < d + 1:
        raise ValueError("need at least d + 1 vertices")
    for attempt in range(100):
        if construction == "regular":
            if d != 2:
                raise ValueError("regular construction is planar")
            pts = sphere_directions(2, n, "regular")
        elif construction == "fibonacci":
            pts = sphere_directions(d, n, "fibonacci" if d == 3 else "spread", seed)
        elif construction == "random":
            pts = uniform_sphere(make_rng(0 if seed is None else seed, "ball-inscribed", d, n, attempt), n, d)
        else:
            raise ValueError(f"unknown construction {construction!r}")
        try:
            P = VPolytope(pts)
        except Degenerate:
            if construction != "random":
                raise
            continue
        if P.b.min() > 0:
            return P, float(1.0 - P.b.min())
        if construction != "random":
            break
    raise Degenerate("points are confined to a hemisphere")


def hausdorff_bound(d: int, n: int) -> float:
    """The simplified bound ``(64/7) pi n^{-2/(d-1)}``."""
    return 64.0 / 7.0 * math.pi * n ** (-2.0 / (d - 1))


def lemma32_bound(d: int, n: int) -> float:
    """``(16/7) (vol(S^{d-1}) / vol(B^{d-1}))^{2/(d-1)} n^{-2/(d-1)}``."""
    ratio = d * unit_ball_volume(d) / unit_ball_volume(d - 1)
    return 16.0 / 7.0 * ratio ** (2.0 / (d - 1)) * n ** (-2.0 / (d - 1))


def theorem21_count_bound(d: int, gap: float, t: float) -> float:
    """``e^{16 d} * gap / (t * vol(B^d))``."""
    return math.exp(16 * d) * gap / (t * unit_ball_volume(d))
