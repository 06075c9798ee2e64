"""Command-line front end.

Exit codes: 0 all checks pass, 1 a claim fails, 2 configuration or
precondition error, 3 numeric or solver failure.  Every run writes
``manifest.json`` with the resolved configuration into the output directory
(``--out``, else ``$FLOATILLUM_OUT``, else ``./floatillum-out``).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .approx import circumscribed_facets, greedy_inscribed
from .directions import sphere_directions
from .errors import ConfigError, DimensionUnsupported, GeometryError, TargetTooLarge
from .io import body_to_spec, export_polytope, load_body
from .measure import volume
from .report import FAIL, _jsonable
from . import verify as V

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
OUT_ENV = "FLOATILLUM_OUT"
PRECONDITION_ERRORS = (ConfigError, TargetTooLarge, DimensionUnsupported, FileNotFoundError)


def _add_level(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--t", type=float, help="absolute cap volume")
    g.add_argument("--t-frac", type=float, help="cap volume as a fraction of vol(K)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="floatillum", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./floatillum-out)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10 ** 6, help="Monte Carlo budget")
    sub = ap.add_subparsers(dest="command", required=True)

    ap_approx = sub.add_parser("approx", help="build approximating polytopes")
    asub = ap_approx.add_subparsers(dest="mode", required=True)
    ins = asub.add_parser("inscribe", parents=[common], help="greedy inscribed polytope")
    ins.add_argument("--body", required=True)
    _add_level(ins)
    ins.add_argument("--rejection-streak-limit", type=int, default=200)
    cir = asub.add_parser("circumscribe", parents=[common], help="tangent-facet polytope")
    cir.add_argument("--body", required=True)
    cir.add_argument("--n", type=int, required=True, help="number of facets")

    ver = sub.add_parser("verify", parents=[common], help="check claims")
    ver.add_argument("--claim", required=True, help=f"claim id or 'all' ({', '.join(V.CLAIMS)})")
    ver.add_argument("--body", help="single body instead of the corpus")
    _add_level(ver)
    ver.add_argument("--corpus", default="default")
    ver.add_argument("--trials", type=int, default=10, help="random bodies per dimension")

    plt = sub.add_parser("plot", help="SVG figures")
    psub = plt.add_subparsers(dest="mode", required=True)
    ov = psub.add_parser("overlay", parents=[common], help="K, K_t, K^t and P_n in the plane")
    ov.add_argument("--body", required=True)
    _add_level(ov)
    ov.add_argument("--no-inscribed", action="store_true")
    sc = psub.add_parser("scaling", parents=[common], help="log-log scaling curve")
    sc.add_argument("--csv", help="scaling table with columns n,d_S (default: run the study)")
    sc.add_argument("--d", type=int, default=2)
    return ap


def output_dir(args) -> Path:
    out = Path(args.out or os.environ.get(OUT_ENV) or "floatillum-out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def resolve_level(args, K) -> dict:
    """Both forms of the level; the manifest records both."""
    if getattr(args, "t", None) is None and getattr(args, "t_frac", None) is None:
        return {"t": None, "t_frac": None}
    vol = volume(K, args.samples, args.seed).value
    if args.t is not None:
        if args.t <= 0:
            raise ConfigError("--t must be positive")
        return {"t": args.t, "t_frac": args.t / vol}
    if args.t_frac <= 0:
        raise ConfigError("--t-frac must be positive")
    return {"t": args.t_frac * vol, "t_frac": args.t_frac}


def write_json(path: Path, data) -> None:
    path.write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")


def write_manifest(out: Path, config: dict, outputs: list, status: str) -> None:
    write_json(out / "manifest.json", {"version": __version__, "config": config,
                                       "outputs": sorted(str(p) for p in outputs), "status": status})


def _config(args, **extra) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    cfg.update(extra)
    return cfg


def cmd_approx(args) -> int:
    K = load_body(args.body)
    out = output_dir(args)
    outputs = []
    if args.mode == "inscribe":
        level = resolve_level(args, K)
        if level["t"] is None:
            raise ConfigError("approx inscribe needs --t or --t-frac")
        P, run = greedy_inscribed(K, level["t"], args.seed, args.rejection_streak_limit)
        outputs.append(export_polytope(P, out / "inscribed"))
        (out / "greedy_run.json").write_text(run.to_json() + "\n")
        outputs.append(out / "greedy_run.json")
        cfg = _config(args, **level)
        info = f"n = {run.n}, terminated by {run.terminated_by}"
    else:
        if args.n < K.dim + 1:
            raise ConfigError(f"--n must be at least {K.dim + 1}")
        U = sphere_directions(K.dim, args.n, "spread", args.seed or None)
        H = circumscribed_facets(K, U)
        path = out / "circumscribed.json"
        write_json(path, body_to_spec(H))
        outputs += [path, export_polytope(H.to_vpolytope(), out / "circumscribed")]
        cfg = _config(args)
        info = f"{args.n} facets"
    write_manifest(out, cfg, outputs, "ok")
    print(f"{args.mode}: {info}; wrote {len(outputs)} files to {out}")
    return EXIT_OK


def _body_reports(claim: str, K, level: dict, seed: int) -> list:
    t = level["t"]
    if claim in ("Thm2.1", "Eq2.4"):
        if t is None:
            raise ConfigError(f"{claim} needs --t or --t-frac")
        return [V.verify_theorem21(K, t, seed)]
    if claim == "Thm3.1":
        return [V.theorem31_report(K, t, seed)]
    bodies = [K]
    runners = {
        "Lemma2.2i": lambda: V.verify_grunbaum(bodies, 5, seed, False),
        "Eq2.1": lambda: V.verify_grunbaum(bodies, 5, seed, False),
        "Lemma2.2ii": lambda: V.verify_grunbaum(bodies, 2, seed, True),
        "Eq2.2": lambda: V.verify_grunbaum(bodies, 2, seed, True),
        "Lemma2.3": lambda: V.verify_lemma23(bodies, 3, seed),
        "Lemma2.4": lambda: V.verify_lemma24(bodies, 100, seed),
        "Lemma2.5": lambda: V.verify_lemma25(bodies, 5, seed),
        "Lemma2.6": lambda: V.verify_lemma26(bodies, seed),
        "Lemma2.7": lambda: V.verify_lemma27(bodies, 500, seed),
    }
    if claim not in runners:
        raise ConfigError(f"claim {claim} does not take --body")
    return runners[claim]()


def cmd_verify(args) -> int:
    out = output_dir(args)
    level = {"t": None, "t_frac": None}
    if args.claim != "all" and args.claim not in V.CLAIMS:
        raise ConfigError(f"unknown claim {args.claim!r}")
    if args.body:
        if args.claim == "all":
            raise ConfigError("--body needs a single claim")
        K = load_body(args.body)
        level = resolve_level(args, K)
        reports = {args.claim: _body_reports(args.claim, K, level, args.seed)}
    elif args.claim == "all":
        reports = V.run_all(args.seed, trials=args.trials)
    else:
        reports = {args.claim: V.run_claim(args.claim, args.seed, trials=args.trials)}
    flat = V.flatten(reports)
    paths = [out / "reports.json", out / "reports.csv", out / "summary.md"]
    write_json(paths[0], [r.as_dict() for r in flat])
    paths[1].write_text(V.reports_to_csv(flat))
    paths[2].write_text(V.render_markdown(flat))
    failed = any(r.status == FAIL for r in flat)
    write_manifest(out, _config(args, **level), paths, "fail" if failed else "pass")
    for r in flat:
        print(r.line())
    counts = V.summarize(flat)
    print(f"pass {counts['pass']}, fail {counts['fail']}, hypothesis_unmet {counts['hypothesis_unmet']}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_plot(args) -> int:
    from .plot import overlay_svg, scaling_svg

    out = output_dir(args)
    if args.mode == "overlay":
        K = load_body(args.body)
        if K.dim != 2:
            raise DimensionUnsupported("overlays are planar")
        level = resolve_level(args, K)
        if level["t"] is None:
            raise ConfigError("plot overlay needs --t or --t-frac")
        P = None
        if not args.no_inscribed:
            try:
                P, _ = greedy_inscribed(K, level["t"], args.seed)
            except TargetTooLarge:
                P = None
        path = out / "overlay.svg"
        path.write_text(overlay_svg(K, level["t"], P, seed=args.seed))
        cfg = _config(args, **level)
    else:
        if args.csv:
            rows = list(csv_rows(Path(args.csv)))
            n = [float(r["n"]) for r in rows]
            ds = [float(r["d_S"]) for r in rows]
            slope = None
        else:
            res = V.scaling_study(args.d, seed=args.seed)
            (out / f"scaling_d{args.d}.csv").write_text(res.to_csv())
            n, ds, slope = [r["n"] for r in res.rows], [r["d_S"] for r in res.rows], res.slope
        path = out / "scaling.svg"
        path.write_text(scaling_svg(n, ds, slope))
        cfg = _config(args)
    write_manifest(out, cfg, [path], "ok")
    print(f"wrote {path}")
    return EXIT_OK


def csv_rows(path: Path):
    import csv

    if not path.is_file():
        raise ConfigError(f"csv file not found: {path}")
    with path.open() as fh:
        yield from csv.DictReader(fh)


COMMANDS = {"approx": cmd_approx, "verify": cmd_verify, "plot": cmd_plot}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GeometryError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numeric failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
