"""Body specifications (JSON) and polytope export (OFF for d = 3, CSV otherwise).

Body spec format::

    {"type": "ball", "center": [...], "radius": r}
    {"type": "ellipsoid", "center": [...], "shape": [[...]], "radius": r}
    {"type": "hpoly", "normals": [[...]], "offsets": [...]}
    {"type": "vpoly", "vertices": [[...]]}
    {"type": "affine", "base": {...}, "matrix": [[...]], "shift": [...]}
    {"type": "cube" | "cross" | "simplex", "d": d}

An optional ``"name"`` is kept as the body name.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .bodycore import (AffineImage, Ball, ConvexBody, Ellipsoid, HPolytope, Polytope, VPolytope,
                       cross_polytope, cube, standard_simplex)
from .errors import ConfigError

_FIELDS = {
    "ball": {"center", "radius"},
    "ellipsoid": {"center", "shape", "radius"},
    "hpoly": {"normals", "offsets"},
    "vpoly": {"vertices"},
    "affine": {"base", "matrix", "shift"},
    "cube": {"d", "half"},
    "cross": {"d"},
    "simplex": {"d"},
}


def body_from_spec(spec: dict) -> ConvexBody:
    """Build a body from a spec dict.

    Raises
    ------
    ConfigError
        On an unknown type, unknown or missing fields.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("body spec needs a 'type'")
    kind = spec["type"]
    if kind not in _FIELDS:
        raise ConfigError(f"unknown body type {kind!r}")
    extra = set(spec) - _FIELDS[kind] - {"type", "name"}
    if extra:
        raise ConfigError(f"unknown fields for {kind}: {sorted(extra)}")
    try:
        if kind == "ball":
            K = Ball(spec["center"], spec.get("radius", 1.0))
        elif kind == "ellipsoid":
            K = Ellipsoid(spec["center"], spec["shape"], spec.get("radius", 1.0))
        elif kind == "hpoly":
            K = HPolytope(spec["normals"], spec["offsets"])
        elif kind == "vpoly":
            K = VPolytope(spec["vertices"])
        elif kind == "affine":
            K = AffineImage(body_from_spec(spec["base"]), spec["matrix"], spec.get("shift"))
        elif kind == "cube":
            K = cube(int(spec["d"]), float(spec.get("half", 1.0)))
        elif kind == "cross":
            K = cross_polytope(int(spec["d"]))
        else:
            K = standard_simplex(int(spec["d"]))
    except KeyError as exc:
        raise ConfigError(f"missing field {exc} for {kind}") from None
    K.name = spec.get("name", kind)
    return K


def body_to_spec(K: ConvexBody) -> dict:
    if isinstance(K, Ellipsoid):
        spec = {"type": "ellipsoid", "center": K.center.tolist(), "shape": K.shape.tolist(),
                "radius": K.radius}
    elif isinstance(K, AffineImage):
        spec = {"type": "affine", "base": body_to_spec(K.base), "matrix": K.T.tolist(),
                "shift": K.v.tolist()}
    elif isinstance(K, Ball):
        spec = {"type": "ball", "center": K.center.tolist(), "radius": K.radius}
    elif isinstance(K, HPolytope):
        spec = {"type": "hpoly", "normals": K.constraint_normals.tolist(),
                "offsets": K.constraint_offsets.tolist()}
    elif isinstance(K, Polytope):
        spec = {"type": "vpoly", "vertices": K.vertices.tolist()}
    else:
        raise ConfigError(f"no spec format for {type(K).__name__}")
    spec["name"] = getattr(K, "name", spec["type"])
    return spec


def load_body(path) -> ConvexBody:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"body file not found: {path}")
    try:
        spec = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return body_from_spec(spec)


def save_body(K: ConvexBody, path) -> None:
    Path(path).write_text(json.dumps(body_to_spec(K), indent=2) + "\n")


def polytope_to_off(P: Polytope) -> str:
    """OFF text with facets as vertex cycles ordered around each facet normal."""
    if P.dim != 3:
        raise ValueError("OFF export is three-dimensional")
    V = P.vertices
    faces = []
    for g in range(P.n_facets):
        faces.append(P.ordered_facet(g))
    lines = ["OFF", f"{len(V)} {len(faces)} 0"]
    lines += [" ".join(repr(float(c)) for c in v) for v in V]
    lines += [" ".join(str(int(i)) for i in [len(f), *f]) for f in faces]
    return "\n".join(lines) + "\n"


def polytope_from_off(text: str) -> VPolytope:
    tokens = [ln.split("#")[0].strip() for ln in text.splitlines()]
    tokens = [t for t in tokens if t]
    if not tokens or tokens[0] != "OFF":
        raise ConfigError("not an OFF file")
    nv = int(tokens[1].split()[0])
    return VPolytope(np.array([[float(c) for c in ln.split()] for ln in tokens[2:2 + nv]]))


def polytope_to_csv(P: Polytope) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{i}" for i in range(P.dim)])
    for v in P.vertices:
        w.writerow([repr(float(c)) for c in v])
    return buf.getvalue()


def polytope_from_csv(text: str) -> VPolytope:
    rows = list(csv.reader(io.StringIO(text)))
    return VPolytope(np.array([[float(c) for c in r] for r in rows[1:] if r]))


def export_polytope(P: Polytope, stem) -> Path:
    """Write ``stem.off`` (d = 3) or ``stem.csv`` and return the path."""
    stem = Path(stem)
    if P.dim == 3:
        path = stem.with_suffix(".off")
        path.write_text(polytope_to_off(P))
    else:
        path = stem.with_suffix(".csv")
        path.write_text(polytope_to_csv(P))
    return path


def import_polytope(path) -> VPolytope:
    path = Path(path)
    text = path.read_text()
    return polytope_from_off(text) if path.suffix == ".off" else polytope_from_csv(text)
