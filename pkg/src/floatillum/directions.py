"""Well-spread point sets on the unit sphere.

Constructions
-------------
``regular``    d = 2 only: ``m`` equally spaced angles.
``vdc``        d = 2 only: van der Corput angles; prefixes are nested and a
               prefix of length ``2**k`` is a regular polygon.
``fibonacci``  d = 3 only: the golden-angle spiral with ``z_k = 1 - (2k+1)/m``.
``halton``     any d: Halton points in ``[0,1)^d`` pushed through the inverse
               normal CDF and normalized; prefixes are nested.
``random``     i.i.d. uniform.

All sets except ``random`` are deterministic; a ``seed`` applies a fixed random
rotation (d >= 3) or angular offset (d = 2) so that different seeds give
different but equally well-spread sets.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from .seeding import make_rng, uniform_sphere

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))
_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def radical_inverse(k: np.ndarray, base: int) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64).copy()
    out = np.zeros(k.shape)
    f = 1.0 / base
    while np.any(k > 0):
        out += f * (k % base)
        k //= base
        f /= base
    return out


def random_rotation(d: int, seed: int) -> np.ndarray:
    rng = make_rng(seed, "rotation", d)
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q *= np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _angles(theta: np.ndarray) -> np.ndarray:
    return np.column_stack([np.cos(theta), np.sin(theta)])


def sphere_directions(d: int, m: int, kind: str = "spread", seed: int | None = None,
                      antipodal: bool = False) -> np.ndarray:
    """Return an ``(m, d)`` array of unit vectors.

    Parameters
    ----------
    d, m : int
        Dimension and number of directions.
    kind : str
        One of ``spread`` (regular for d=2, fibonacci for d=3, halton
        otherwise), ``regular``, ``vdc``, ``fibonacci``, ``halton``, ``random``.
    seed : int, optional
        Rotation seed; ``None`` keeps the canonical orientation.
    antipodal : bool
        If true, ``m`` must be even and the set is closed under ``u -> -u``.
    """
    if antipodal:
        if m % 2:
            raise ValueError("antipodal direction sets need an even count")
        half = sphere_directions(d, m // 2, kind, seed)
        return np.vstack([half, -half])
    if kind == "spread":
        kind = {2: "regular", 3: "fibonacci"}.get(d, "halton")
    k = np.arange(m)
    if kind == "random":
        return uniform_sphere(make_rng(0 if seed is None else seed, "directions", d, m), m, d)
    if kind in ("regular", "vdc"):
        if d != 2:
            raise ValueError(f"{kind} directions are planar")
        offset = 0.0 if seed is None else 2 * np.pi * make_rng(seed, "offset").random()
        frac = k / m if kind == "regular" else radical_inverse(k, 2)
        return _angles(offset + 2 * np.pi * frac)
    if kind == "fibonacci":
        if d != 3:
            raise ValueError("fibonacci directions are spatial")
        z = 1.0 - (2 * k + 1) / m
        rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
        phi = k * GOLDEN_ANGLE
        pts = np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    elif kind == "halton":
        if d > len(_PRIMES):
            raise ValueError("halton directions limited to d <= 10")
        u = np.column_stack([radical_inverse(k + 1, p) for p in _PRIMES[:d]])
        g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
        pts = g / np.linalg.norm(g, axis=1)[:, None]
    else:
        raise ValueError(f"unknown direction kind {kind!r}")
    if seed is not None:
        pts = pts @ random_rotation(d, seed).T
    return pts


def covering_radius(d: int, m: int) -> float:
    """Rough angular covering radius of an ``m``-point spread set (radians)."""
    if d == 2:
        return np.pi / m
    # area per point on S^{d-1}, converted to the radius of a spherical cap
    from .bodycore import sphere_area, unit_ball_volume
    cell = sphere_area(d) / m
    return 1.5 * (cell / unit_ball_volume(d - 1)) ** (1.0 / (d - 1))
