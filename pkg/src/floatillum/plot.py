"""Deterministic hand-written SVG figures: planar overlays and log-log scaling curves."""
from __future__ import annotations

import math

import numpy as np

from .bodycore import ConvexBody, Polytope, is_polytope, as_polytope, radial_boundary
from .errors import DimensionUnsupported, EmptyIntersection, TargetTooLarge
from .floating import floating_outer_polytope
from .illumination import illumination_boundary_points

SIZE = 480
PAD = 24
COLORS = {"body": "#222222", "floating": "#1f77b4", "illumination": "#d62728", "inscribed": "#2ca02c"}


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def boundary_polyline(K: ConvexBody, m: int = 720) -> np.ndarray:
    if is_polytope(K):
        P = as_polytope(K)
        c = P.vertices.mean(axis=0)
        ang = np.arctan2(*(P.vertices - c).T[::-1])
        return P.vertices[np.argsort(ang)]
    th = 2 * np.pi * np.arange(m) / m
    U = np.column_stack([np.cos(th), np.sin(th)])
    return radial_boundary(K, K.interior_point(), U)


def polygon_loop(P: Polytope) -> np.ndarray:
    return boundary_polyline(P)


class Canvas:
    """Maps a data box onto a square SVG viewport with y pointing up."""

    def __init__(self, lo, hi, size: int = SIZE):
        self.lo, self.hi, self.size = np.asarray(lo, float), np.asarray(hi, float), size
        span = float(max(self.hi - self.lo))
        self.k = (size - 2 * PAD) / span
        self.items: list[str] = []

    def xy(self, p):
        x = PAD + (p[0] - self.lo[0]) * self.k
        y = self.size - PAD - (p[1] - self.lo[1]) * self.k
        return x, y

    def path(self, pts, color, closed=True, width=1.5, dash=None, label=None):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(self.xy, pts))
        tag = "polygon" if closed else "polyline"
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        title = f"<title>{label}</title>" if label else ""
        self.items.append(f'<{tag} points="{coords}" fill="none" stroke="{color}" '
                          f'stroke-width="{width}"{extra}>{title}</{tag}>')

    def dots(self, pts, color, r=2.5):
        for x, y in map(self.xy, pts):
            self.items.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{color}"/>')

    def text(self, x, y, s, size=12):
        self.items.append(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="monospace" '
                          f'font-size="{size}">{s}</text>')

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
                f'viewBox="0 0 {self.size} {self.size}">')
        return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>', *self.items,
                          "</svg>"]) + "\n"


def overlay_svg(K: ConvexBody, t: float, inscribed: Polytope | None = None, m: int = 256,
                seed: int = 0) -> str:
    """``K`` with the outer floating polygon, the illumination boundary and an optional ``P_n``.

    Raises
    ------
    DimensionUnsupported
        If ``K`` is not planar.
    """
    if K.dim != 2:
        raise DimensionUnsupported("overlays are planar")
    body = boundary_polyline(K)
    th = 2 * np.pi * np.arange(m) / m
    U = np.column_stack([np.cos(th), np.sin(th)])
    illum = illumination_boundary_points(K, t, U)
    layers = [("body", body)]
    try:
        Q = floating_outer_polytope(K, m, t=t, kind="regular")
        layers.append(("floating", polygon_loop(Q.to_vpolytope())))
    except (EmptyIntersection, TargetTooLarge):
        pass
    layers.append(("illumination", illum))
    allpts = np.vstack([p for _, p in layers])
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    pad = 0.05 * float(max(hi - lo))
    cv = Canvas(lo - pad, hi + pad)
    for name, pts in layers:
        cv.path(pts, COLORS[name], dash="6,3" if name == "floating" else None, label=name)
    if inscribed is not None:
        cv.path(polygon_loop(inscribed), COLORS["inscribed"], label="inscribed")
        cv.dots(inscribed.vertices, COLORS["inscribed"])
    cv.text(PAD, PAD - 6, f"t = {t:.4g}")
    return cv.render()


def scaling_svg(n, values, slope: float | None = None, title: str = "d_S vs n") -> str:
    """Log-log plot of ``values`` against ``n`` with the least-squares slope."""
    x, y = np.log10(np.asarray(n, float)), np.log10(np.asarray(values, float))
    if slope is None:
        slope = float(np.polyfit(x, y, 1)[0])
    lo = np.array([x.min(), y.min()])
    hi = np.array([x.max(), y.max()])
    span = hi - lo
    lo, hi = lo - 0.08 * span, hi + 0.08 * span
    cv = Canvas(lo, lo + max(hi - lo))
    cv.path(np.column_stack([x, y]), COLORS["body"], closed=False, label="measured")
    cv.dots(np.column_stack([x, y]), COLORS["illumination"])
    fit = np.polyfit(x, y, 1)
    ends = np.array([x.min(), x.max()])
    cv.path(np.column_stack([ends, np.polyval(fit, ends)]), COLORS["floating"], closed=False,
            dash="4,3", label="fit")
    cv.text(PAD, PAD - 6, f"{title}; slope = {slope:.4f}")
    return cv.render()
