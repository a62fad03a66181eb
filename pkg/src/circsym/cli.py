"""Command line interface.

Subcommands: symmetrize (radial profiles and boundary polylines of the
image and its symmetrization), map (zipper map JSON), verify (report
JSON plus coefficient CSV), sweep (summary CSV over a family grid),
and report (verify plus rendered figures).

Exit codes are a stable contract: 0 success; 1 input, sampling, or
domain violations; 2 scope or geometry violations; 3 numerical
failures.  Every output is computed fully before anything is written,
and each file goes through a temp file and atomic rename, so a failed
invocation never leaves partial output files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from .errors import (
    BoundaryAmbiguityError,
    BranchError,
    CircSymError,
    DomainViolationError,
    GeometryError,
    InapplicableError,
    InputError,
    InsufficientSamplingError,
    ScopeError,
)
from .families import FAMILIES
from .geometry import (
    area_by_profile,
    boundary_from_series,
    curve_to_csv,
    profile_to_csv,
    radial_profile,
    symmetrize,
    symmetrized_boundary,
)
from .pipeline import PipelineConfig, VerificationReport, run_pipeline, sweep
from .series import PowerSeries
from .zipper import build_map

EXIT_INPUT = 1
EXIT_SCOPE = 2
EXIT_NUMERICAL = 3

_INPUT_ERRORS = (InputError, InsufficientSamplingError, DomainViolationError)
_SCOPE_ERRORS = (ScopeError, GeometryError, BoundaryAmbiguityError, InapplicableError)

SWEEP_COLUMNS = (
    "index",
    "parameter",
    "classification",
    "identity_residual",
    "identity_pass",
    "hayman_pass",
    "n1",
    "n2",
    "margin1",
    "margin2",
    "error",
)


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors under the exit-code contract
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _read_series(path: str) -> PowerSeries:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object with coefficients")
    return PowerSeries.from_json_dict(data)


def _write_outputs(out_dir: str, files: dict) -> None:
    """Write every file through a temp sibling and atomic rename."""
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {out_dir}: {exc}") from exc
    for name, content in files.items():
        path = os.path.join(out_dir, name)
        fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.")
        try:
            if isinstance(content, bytes):
                with os.fdopen(fd, "wb") as fh:
                    fh.write(content)
            else:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(content)
            os.replace(tmp, path)
        except OSError as exc:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise InputError(f"cannot write {path}: {exc}") from exc


def _config(args) -> PipelineConfig:
    overrides = {
        "rho": args.rho,
        "M_boundary": args.boundary,
        "m_slices": args.slices,
        "N_degree": args.degree,
        "r_extract": args.extract_radius,
        "M_samples": args.samples,
        "delta": args.delta,
        "identity_rel_tol": args.tol,
        "double_check": args.double_check,
    }
    return PipelineConfig(**{k: v for k, v in overrides.items() if v is not None})


def _config_echo(command: str, args, cfg: PipelineConfig) -> str:
    blob = {"command": command, "input": args.input, "config": cfg.to_json_dict()}
    return json.dumps(blob, indent=2, sort_keys=True) + "\n"


def _geometry_stages(f: PowerSeries, cfg: PipelineConfig):
    work_rho = cfg.rho if cfg.rho is not None else f.rho
    if work_rho > f.rho:
        raise InputError(
            f"working radius {work_rho} exceeds the trusted radius {f.rho}"
        )
    f_work = f.restrict(work_rho) if work_rho < 1.0 else f
    curve = boundary_from_series(f_work, cfg.M_boundary)
    profile = radial_profile(curve, cfg.m_slices)
    star_profile = symmetrize(profile)
    return f_work, curve, profile, star_profile


def cmd_symmetrize(args) -> int:
    f = _read_series(args.input)
    cfg = _config(args)
    f_work, curve, profile, star_profile = _geometry_stages(f, cfg)
    star_curve = symmetrized_boundary(star_profile)
    files = {
        "profile.csv": profile_to_csv(profile),
        "star_profile.csv": profile_to_csv(star_profile),
        "boundary.csv": curve_to_csv(curve),
        "star_boundary.csv": curve_to_csv(star_curve),
        "config.json": _config_echo("symmetrize", args, cfg),
    }
    _write_outputs(args.out, files)
    lo, hi = profile.slices[0].t, profile.slices[-1].t
    print(
        f"profile: {len(profile.slices)} slices, radial support "
        f"[{lo:.6g}, {hi:.6g}]"
    )
    print(
        f"area: profile {area_by_profile(profile):.9g}, "
        f"symmetrized {area_by_profile(star_profile):.9g}"
    )
    print(f"wrote {len(files)} files to {args.out}")
    return 0


def cmd_map(args) -> int:
    f = _read_series(args.input)
    cfg = _config(args)
    f_work, _, _, star_profile = _geometry_stages(f, cfg)
    star_curve = symmetrized_boundary(star_profile)
    zm = build_map(star_curve, abs(f_work.coefficients[0]))
    files = {
        "map.json": json.dumps(zm.to_json_dict(), indent=2, sort_keys=True) + "\n",
        "config.json": _config_echo("map", args, cfg),
    }
    _write_outputs(args.out, files)
    print(
        f"map: {len(zm.steps)} elementary steps, F(0) = {zm.target:.9g}, "
        f"rotation {zm.lam:.3e}"
    )
    print(f"wrote {len(files)} files to {args.out}")
    return 0


def _print_summary(report: VerificationReport) -> None:
    areas = report.areas
    print(f"classification: {report.classification}")
    print(
        f"identity: residual {areas['residual']:.3e} "
        f"({'pass' if areas['passed'] else 'FAIL'})"
    )
    h = report.hayman
    print(
        f"hayman: |a1| = {h['abs_a1']:.9g}, A1 = {h['abs_A1']:.9g} "
        f"({'pass' if h['passed'] else 'FAIL'})"
    )
    if report.witness is not None:
        w = report.witness
        print(
            f"witness: n1={w.n1} (margin {w.margin1:.6g}), "
            f"n2={w.n2} (margin {w.margin2:.6g})"
        )
    else:
        print("witness: none" + (
            " (equality case suspected)"
            if report.status["equality_suspected"]
            else ""
        ))


def cmd_verify(args) -> int:
    f = _read_series(args.input)
    cfg = _config(args)
    report = run_pipeline(f, cfg)
    files = {
        "report.json": json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
        + "\n",
        "coefficients.csv": report.coefficient_csv(),
    }
    _write_outputs(args.out, files)
    _print_summary(report)
    print(f"wrote {len(files)} files to {args.out}")
    return 0


def cmd_report(args) -> int:
    from .report import render_figures

    f = _read_series(args.input)
    cfg = _config(args)
    artifacts: dict = {}
    report = run_pipeline(f, cfg, artifacts_out=artifacts)
    files = {
        "report.json": json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
        + "\n",
        "coefficients.csv": report.coefficient_csv(),
    }
    files.update(render_figures(report, artifacts["artifacts"]))
    _write_outputs(args.out, files)
    _print_summary(report)
    print(f"wrote {len(files)} files to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    data = _read_json(args.input)
    if not isinstance(data, dict) or "family" not in data or "grid" not in data:
        raise InputError(
            f"{args.input}: expected a JSON object with 'family' and 'grid'"
        )
    family = data["family"]
    if family not in FAMILIES:
        raise InputError(
            f"unknown family {family!r}; available: {sorted(FAMILIES)}"
        )
    try:
        grid = [float(v) for v in data["grid"]]
    except (TypeError, ValueError) as exc:
        raise InputError(f"{args.input}: grid must be a list of numbers") from exc
    cfg = _config(args)
    rows = sweep(family, grid, cfg)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_format_cell(row[c]) for c in SWEEP_COLUMNS])
    files = {
        "sweep.csv": buf.getvalue(),
        "config.json": _config_echo("sweep", args, cfg),
    }
    _write_outputs(args.out, files)

    counts: dict = {}
    for row in rows:
        key = row["classification"] or "error"
        counts[key] = counts.get(key, 0) + 1
    print(
        f"sweep: {len(rows)} members ("
        + ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
        + ")"
    )
    print(f"wrote {len(files)} files to {args.out}")
    return 0


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _add_shared_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="input JSON path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--rho", type=float, default=None,
                   help="working radius (replaces f by f(rho z))")
    p.add_argument("--boundary", type=int, default=None, metavar="M",
                   help="boundary sample count")
    p.add_argument("--slices", type=int, default=None, metavar="m",
                   help="radial slice count")
    p.add_argument("--degree", type=int, default=None, metavar="N",
                   help="extracted coefficient degree")
    p.add_argument("--extract-radius", type=float, default=None, metavar="r",
                   help="coefficient extraction circle radius")
    p.add_argument("--samples", type=int, default=None, metavar="M",
                   help="extraction sample count")
    p.add_argument("--delta", type=float, default=None,
                   help="witness margin threshold")
    p.add_argument("--tol", type=float, default=None,
                   help="area identity relative tolerance")
    p.add_argument("--double-check", action=argparse.BooleanOptionalAction,
                   default=None, help="two-resolution error estimation")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="circsym",
        description="circular symmetrization coefficient verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, txt in (
        ("symmetrize", cmd_symmetrize, "write radial profiles and boundaries"),
        ("map", cmd_map, "write the zipper map of the symmetrized image"),
        ("verify", cmd_verify, "run the verification pipeline"),
        ("sweep", cmd_sweep, "run the pipeline over a family grid"),
        ("report", cmd_report, "verify and render figures"),
    ):
        p = sub.add_parser(name, help=txt)
        _add_shared_flags(p)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _SCOPE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCOPE
    except CircSymError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
