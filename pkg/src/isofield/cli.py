"""Command-line front end: validate, eval-cov, simulate, check, spectrum.

Exit codes: 0 success, 1 invalid model or failed check, 2 parse/usage
error, 3 unsupported geometry. The default seed is the fixed constant
DEFAULT_SEED (never time-derived), so default runs are reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import GeometryError, IsoFieldError, ModelError, ModelFormatError, UsageError
from .modelio import load_model
from .simulate import save_realization, simulate_spatial, simulate_spatiotemporal, substream
from .spaces import (
    SpaceFamily,
    make_point,
    parse_space,
    all_reference_spaces,
    sample_uniform,
)
from .spectral import (
    SpatialModel,
    SpatioTemporalModel,
    angular_power_spectrum,
    eval_cov,
    truncation_bound,
    validate_spatial,
    validate_spatiotemporal,
)
from .verify import check_space_identities, mc_funk_hecke, mc_zonal_covariance

DEFAULT_SEED = 0xC0FFEE
DEFAULT_PROBE_LAGS = (-2.0, -1.0, 0.0, 1.0, 2.0)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_GEOMETRY = 3


def _parse_lags(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad lag list {text!r}; expected comma-separated numbers") from exc


def _parse_grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}; expected 'start:stop:count'") from exc
    if n < 1:
        raise UsageError("grid count must be >= 1")
    return np.linspace(a, b, n)


def _parse_times(text: str) -> list[float]:
    times = _parse_lags(text)
    if not times:
        raise UsageError("at least one time is required")
    return sorted(times)


def _fibonacci_sphere(count: int) -> np.ndarray:
    """Deterministic quasi-uniform golden-angle grid on the 2-sphere."""
    i = np.arange(count, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / count
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    theta = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


def _coords_from_row(space, row: list[float]):
    f = space.family
    if f is SpaceFamily.COMPLEX_PROJECTIVE:
        if len(row) % 2:
            raise UsageError("complex coordinates need an even number of reals (re, im pairs)")
        arr = np.asarray(row, dtype=float).reshape(-1, 2)
        return arr[:, 0] + 1j * arr[:, 1]
    if f is SpaceFamily.QUATERNION_PROJECTIVE:
        if len(row) % 4:
            raise UsageError("quaternion coordinates need a multiple of 4 reals")
        return np.asarray(row, dtype=float).reshape(-1, 4)
    return np.asarray(row, dtype=float)


def resolve_points(space, spec: str, seed: int):
    """Point-set specifier: 'random:K', 'fibonacci:K', or a coordinate CSV."""
    if ":" in spec and not Path(spec).exists():
        kind, _, arg = spec.partition(":")
        if kind == "random":
            count = int(arg)
            rng = substream(seed, 2)
            return [sample_uniform(space, rng) for _ in range(count)]
        if kind == "fibonacci":
            if space.family is not SpaceFamily.SPHERE or space.d != 2:
                raise UsageError("fibonacci point sets are defined on sphere:2 only")
            return [make_point(space, row) for row in _fibonacci_sphere(int(arg))]
        raise UsageError(f"unknown point specifier {spec!r}")
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"point file {spec!r} does not exist")
    points = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            points.append(make_point(space, _coords_from_row(space, [float(v) for v in row])))
    if not points:
        raise UsageError(f"no points found in {spec!r}")
    return points


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline=""), True


def _emit_rows(rows: list[dict], header: list[str], fmt: str, out_path: str | None) -> None:
    fh, close = _open_out(out_path)
    try:
        if fmt == "json":
            json.dump(rows, fh, indent=2, sort_keys=True)
            fh.write("\n")
        else:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([row[h] for h in header])
    finally:
        if close:
            fh.close()


def _emit_json(doc, out_path: str | None) -> None:
    fh, close = _open_out(out_path)
    try:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _limit_threads(threads: int | None) -> None:
    if threads is None:
        return
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(limits=threads)
    except ImportError:
        import os

        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(threads)


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_validate(args) -> int:
    model = load_model(args.model)
    if isinstance(model, SpatioTemporalModel):
        report = validate_spatiotemporal(model, _parse_lags(args.lags))
    else:
        report = validate_spatial(model)
    if args.format == "json":
        _emit_json(report.as_dict(), args.out)
    else:
        rows = [v.as_dict() for v in report.violations]
        _emit_rows(rows, ["degree", "lag", "kind", "magnitude"], "csv", args.out)
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_eval_cov(args) -> int:
    model = load_model(args.model)
    rhos = _parse_grid(args.rho_grid)
    lags = _parse_lags(args.lags)
    trunc = args.trunc if args.trunc is not None else model.max_degree
    bound = truncation_bound(model, trunc)
    rows = []
    for rho in rhos:
        for lag in lags:
            cov = eval_cov(model, float(rho), float(lag), trunc)
            for i in range(model.m):
                for j in range(model.m):
                    rows.append(
                        {
                            "rho": float(rho),
                            "lag": float(lag),
                            "component_i": i,
                            "component_j": j,
                            "value": float(cov[i, j]),
                            "tail_bound": bound,
                        }
                    )
    _emit_rows(
        rows,
        ["rho", "lag", "component_i", "component_j", "value", "tail_bound"],
        args.format,
        args.out,
    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = load_model(args.model)
    points = resolve_points(model.space, args.points, args.seed)
    trunc = args.trunc if args.trunc is not None else model.max_degree
    if isinstance(model, SpatioTemporalModel):
        times = _parse_times(args.times)
        real = simulate_spatiotemporal(model, points, times, trunc, args.seed)
    else:
        real = simulate_spatial(model, points, trunc, args.seed)
    out = Path(args.out if args.out else "realization.csv")
    csv_path, meta_path = save_realization(real, out)
    print(f"wrote {csv_path} and {meta_path}", file=sys.stderr)
    return EXIT_OK


def cmd_check(args) -> int:
    _limit_threads(args.threads)
    records = []
    a_scale = 1.01 if args.inject_fault == "a_n" else 1.0
    for space in all_reference_spaces():
        report = check_space_identities(space, a_scale=a_scale)
        for chk in report.checks:
            rec = chk.as_dict()
            rec["space"] = space.label
            rec.update({"estimate": rec.pop("value"), "std_error": None, "z": None})
            records.append(rec)
    mc_spaces = [parse_space(s) for s in args.spaces.split(",")] if args.spaces else [
        s for s in all_reference_spaces() if s.family is not SpaceFamily.OCTONION_PROJECTIVE
    ]
    rep = args.replicates
    for space in mc_spaces:
        rng = substream(args.seed, 3)
        x1 = sample_uniform(space, rng)
        x2 = sample_uniform(space, rng)
        for i, j in ((0, 0), (1, 1), (2, 1), (1, 3)):
            est = mc_funk_hecke(space, i, j, x1, x2, replicates=rep, seed=args.seed + i * 7 + j)
            records.append(
                {
                    "space": space.label,
                    "name": f"funk_hecke_{i}_{j}",
                    "identity": "integral of P_i(cos rho(x1,.)) P_j(cos rho(x2,.)) "
                    "= delta_ij omega/a_i^2 P_i(cos rho(x1,x2))",
                    "target": float(np.asarray(est.target)),
                    "estimate": float(np.asarray(est.value)),
                    "std_error": float(np.asarray(est.std_error)),
                    "z": est.z_score,
                    "pass": est.passed,
                    "tolerance": None,
                }
            )
        for n in (1, 2):
            chk = mc_zonal_covariance(space, n, x1, x2, replicates=rep, seed=args.seed + 13 * n)
            for label, est in (("mean", chk.mean), ("cov", chk.covariance), ("cross", chk.cross)):
                records.append(
                    {
                        "space": space.label,
                        "name": f"zonal_{label}_{n}",
                        "identity": "zonal field a_n P_n(cos rho(x,U)): mean 0, "
                        "cov P_n(cos rho(x1,x2)), distinct degrees uncorrelated",
                        "target": float(np.asarray(est.target)),
                        "estimate": float(np.asarray(est.value)),
                        "std_error": float(np.asarray(est.std_error)),
                        "z": est.z_score,
                        "pass": est.passed,
                        "tolerance": None,
                    }
                )
    all_pass = all(r["pass"] for r in records)
    _emit_json({"pass": all_pass, "checks": records}, args.out)
    if not all_pass:
        failed = [r["name"] for r in records if not r["pass"]]
        print(f"failed identities: {', '.join(failed)}", file=sys.stderr)
    return EXIT_OK if all_pass else EXIT_INVALID


def cmd_spectrum(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, SpatialModel):
        raise UsageError("the angular power spectrum is defined for spatial models")
    rows = []
    for n in range(model.max_degree + 1):
        cn = angular_power_spectrum(model, n)
        for i in range(model.m):
            for j in range(model.m):
                rows.append(
                    {
                        "degree": n,
                        "component_i": i,
                        "component_j": j,
                        "value": float(cn[i, j]),
                    }
                )
    _emit_rows(rows, ["degree", "component_i", "component_j", "value"], args.format, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isofield",
        description="Isotropic vector random fields on spheres and projective spaces: "
        "model validation, covariance evaluation, series simulation, identity checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True, help="model JSON file")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (fixed default)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=None, help="cap worker threads")

    p = sub.add_parser("validate", help="check a model file against the validity conditions")
    common(p)
    p.add_argument("--lags", default=",".join(str(v) for v in DEFAULT_PROBE_LAGS),
                   help="probe lags for temporal models")
    p.set_defaults(func=cmd_validate, format="json")

    p = sub.add_parser("eval-cov", help="tabulate the covariance over a distance/lag grid")
    common(p)
    p.add_argument("--rho-grid", default=f"0:{math.pi}:25", help="distance grid start:stop:count")
    p.add_argument("--lags", default="0", help="comma-separated time lags")
    p.add_argument("--trunc", type=int, default=None, help="series truncation degree")
    p.set_defaults(func=cmd_eval_cov)

    p = sub.add_parser("simulate", help="draw one realization and write CSV plus sidecar")
    common(p)
    p.add_argument("--points", required=True,
                   help="'random:K', 'fibonacci:K' (sphere:2), or a coordinate CSV file")
    p.add_argument("--times", default="0", help="time grid for temporal models")
    p.add_argument("--trunc", type=int, default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", help="run the identity suite and Monte-Carlo oracles")
    common(p, model=False)
    p.add_argument("--spaces", default=None,
                   help="comma-separated spaces for the Monte-Carlo oracles")
    p.add_argument("--replicates", type=int, default=20_000)
    p.add_argument("--inject-fault", choices=("none", "a_n"), default="none",
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check, format="json")

    p = sub.add_parser("spectrum", help="emit the per-degree angular power spectrum")
    common(p)
    p.set_defaults(func=cmd_spectrum)
    return parser


_NUMERIC_LIST_FLAGS = ("--lags", "--times", "--rho-grid")


def _normalize_argv(argv):
    """Join numeric-list flags with values starting in '-' (negative lags),
    which argparse would otherwise read as option strings."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in _NUMERIC_LIST_FLAGS and nxt and len(nxt) > 1 and nxt[0] == "-" and nxt[1].isdigit():
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _normalize_argv(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the parse-error code
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except GeometryError as exc:
        print(f"unsupported geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except ModelError as exc:
        print(f"invalid model: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ModelFormatError, UsageError, json.JSONDecodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
