"""Centroid normalization, isotropic position, the width functional Θ and centroid-halfspace ratios."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodycore import AffineImage, ConvexBody
from .errors import IllConditioned, SectionNoise
from .measure import VolumeEstimate, cut_volumes, inertia, sections, volume
from .report import Report, bundle

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MAX_CONDITION = 1e12


def grunbaum_constant(d: int) -> float:
    """``(1 - 1/(d+1))^d``, the smallest centroid-halfspace fraction (attained by cones)."""
    return (d / (d + 1.0)) ** d


def compose(K: ConvexBody, T, v=None) -> AffineImage:
    """``T(K) + v``, flattening nested affine images."""
    T = np.asarray(T, dtype=float)
    v = np.zeros(K.dim) if v is None else np.asarray(v, dtype=float)
    if isinstance(K, AffineImage):
        return AffineImage(K.base, T @ K.T, T @ K.v + v)
    return AffineImage(K, T, v)


def center_at_centroid(K: ConvexBody, mode: str = "auto", samples: int = 10 ** 6,
                       seed: int = 0) -> AffineImage:
    """Translate ``K`` so that its centroid is the origin."""
    c = inertia(K, mode=mode, samples=samples, seed=seed).centroid
    return compose(K, np.eye(K.dim), -c)


def isotropy_residual(M: np.ndarray) -> float:
    """Largest off-diagonal entry relative to the mean diagonal entry."""
    off = M - np.diag(np.diag(M))
    return float(np.abs(off).max() / np.mean(np.diag(M)))


@dataclass(frozen=True)
class IsotropicResult:
    """Transform ``T`` (``det T = 1``) and diagnostics of the image ``T(K)``."""

    transform: np.ndarray
    translated_centroid: np.ndarray
    isotropy_constant: float
    residual: float
    body: AffineImage
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.tolerance


def isotropic_transform(K: ConvexBody, mode: str = "auto", tol: float | None = None,
                        samples: int = 10 ** 6, seed: int = 0) -> IsotropicResult:
    """``T = det(M)^{1/(2d)} M^{-1/2}`` for the second-moment matrix ``M`` of a centered body.

    ``T(K)`` has second moment ``det(M)^{1/d} I`` analytically; the residual
    reported is re-measured on the image.

    Raises
    ------
    IllConditioned
        If the eigenvalues of ``M`` spread over more than twelve decades.
    """
    d = K.dim
    data = inertia(K, np.zeros(d), mode=mode, samples=samples, seed=seed)
    w, Q = np.linalg.eigh(data.second_moment)
    if w[0] <= 0 or w[-1] / w[0] > MAX_CONDITION:
        raise IllConditioned(f"second-moment eigenvalue ratio {w[-1] / max(w[0], 1e-300):.3g}")
    logdet = float(np.sum(np.log(w)))
    T = math.exp(logdet / (2 * d)) * (Q / np.sqrt(w)) @ Q.T
    T = 0.5 * (T + T.T)
    image = compose(K, T)
    after = inertia(image, np.zeros(d), mode=mode, samples=samples, seed=seed)
    if tol is None:
        tol = 1e-9 if after.method == "exact" else 5e-2
    M = after.second_moment
    return IsotropicResult(T, after.centroid, float(np.mean(np.diag(M))), isotropy_residual(M),
                           image, tol)


def _support_interval(K, xi):
    return -float(K.support(-xi)), float(K.support(xi))


def section_profile(K: ConvexBody, xi, offsets, mode="auto", samples=200_000, seed=0):
    xi = np.asarray(xi, dtype=float)
    offsets = np.atleast_1d(offsets)
    est = sections(K, np.tile(xi, (len(offsets), 1)), offsets, mode, samples, seed)
    return np.array([e.value for e in est]), np.array([e.std_error for e in est])


def max_section(K: ConvexBody, xi, scan: int = 64, mode="auto", samples=200_000, seed=0):
    """Largest section parallel to ``xi^perp``: grid scan, then golden refinement.

    Sections are unimodal along a direction, so refining the bracket around
    the best grid point finds the maximum.
    """
    xi = np.asarray(xi, dtype=float)
    lo, hi = _support_interval(K, xi)
    # faces are limits of interior sections, so the scan reaches just inside the ends
    grid = lo + (hi - lo) * np.linspace(1e-12, 1 - 1e-12, scan)
    vals, errs = section_profile(K, xi, grid, mode, samples, seed)
    j = int(np.argmax(vals))
    if errs.max() > 0:
        return float(vals[j]), float(errs[j]), float(grid[j])
    a, b = grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]
    f = lambda s: -float(section_profile(K, xi, s, mode)[0][0])
    c, e = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(60):
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + GOLDEN * (b - a)
            fe = f(e)
    best = max(-fc, -fe, float(vals[j]))
    return best, 0.0, float(c if fc <= fe else e)


@dataclass(frozen=True)
class ThetaResult:
    direction: np.ndarray
    theta: float
    central_section: float
    width_beyond: float
    method: str


def theta(K: ConvexBody, xi, tol: float = 1e-12, mode: str = "auto", samples: int = 200_000,
          seed: int = 0, center=None) -> ThetaResult:
    """Θ(ξ): smallest ``s > 0`` with ``section(c) >= e * section(c + s ξ)``.

    ``K`` should be centered at its centroid (or pass ``center``).  Past the
    maximal section the profile decreases, so the crossing is bisected there;
    if sections never drop below ``central / e`` before the body ends, Θ is
    the width beyond the centroid.

    Raises
    ------
    SectionNoise
        If sampled sections are too noisy to resolve the factor ``e``.
    """
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    c = np.zeros(K.dim) if center is None else np.asarray(center, dtype=float)
    base = float(c @ xi)
    width = float(K.support(xi)) - base
    prof = lambda s: section_profile(K, xi, base + np.atleast_1d(s), mode, samples, seed)
    cv, ce = prof(0.0)
    central = float(cv[0])
    method = "exact" if ce[0] == 0 else "montecarlo"
    if method == "montecarlo" and 3 * ce[0] > (1 - 1 / math.e) * central:
        raise SectionNoise("central section estimate too noisy")
    level = central / math.e
    grid = np.linspace(0.0, width, 65)
    vals, _ = prof(grid[:-1])
    j = int(np.argmax(vals))
    below = np.nonzero((np.arange(len(vals)) > j) & (vals <= level))[0]
    if len(below) == 0:
        a, b = grid[len(vals) - 1], width
        # check whether the profile drops to the level before the end
        if float(prof(b * (1 - 1e-15))[0][0]) > level:
            return ThetaResult(xi, width, central, width, method)
    else:
        a, b = grid[below[0] - 1], grid[below[0]]
    while b - a > tol * max(width, 1.0):
        m = 0.5 * (a + b)
        if float(prof(m)[0][0]) <= level:
            b = m
        else:
            a = m
    return ThetaResult(xi, 0.5 * (a + b), central, width, method)


def grunbaum_ratios(K: ConvexBody, xi, scan: int = 64, mode: str = "auto",
                    samples: int = 10 ** 6, seed: int = 0, centroid=None) -> Report:
    """Centroid-halfspace fractions and section ratios in direction ``xi``.

    Checks the cone bound ``(d/(d+1))^d <= fraction <= 1 - (d/(d+1))^d``, its
    ``1/e`` relaxation, the section bound
    ``(d/(d+1))^{d-1} * max section <= central section`` and its ``e``
    relaxation.
    """
    d = K.dim
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    data = inertia(K, mode=mode, samples=samples, seed=seed)
    cg = data.centroid if centroid is None else np.asarray(centroid, dtype=float)
    V = data.volume
    vals, errs = cut_volumes(K, xi[None, :], np.array([cg @ xi]), mode, samples, seed)
    frac = float(vals[0] / V)
    ftol = float(3 * errs[0] / V) if errs[0] > 0 else 1e-12
    g = grunbaum_constant(d)
    central = section_profile(K, xi, cg @ xi, mode)
    smax, serr, _ = max_section(K, xi, scan, mode)
    stol = 3 * (serr + float(central[1][0])) if serr > 0 else 1e-12 * max(smax, 1.0)
    cs = float(central[0][0])
    params = {"body": K.name, "d": d, "direction": xi, "seed": seed}
    checks = [
        Report("Lemma2.2i", params, lhs=g, rhs=frac, tolerance=ftol, details={"side": "lower"}),
        Report("Lemma2.2i", params, lhs=frac, rhs=1 - g, tolerance=ftol, details={"side": "upper"}),
        Report("Eq2.1", params, lhs=1 / math.e, rhs=frac, tolerance=ftol, details={"side": "lower"}),
        Report("Eq2.1", params, lhs=frac, rhs=1 - 1 / math.e, tolerance=ftol, details={"side": "upper"}),
        Report("Lemma2.2ii", params, lhs=(d / (d + 1.0)) ** (d - 1) * smax, rhs=cs, tolerance=stol),
        Report("Eq2.2", params, lhs=smax, rhs=math.e * cs, tolerance=stol),
    ]
    return bundle("Lemma2.2", checks, params, fraction=frac, central_section=cs, max_section=smax,
                  volume=V)
