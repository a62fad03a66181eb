"""End-to-end verification pipeline.

For a univalent series f the pipeline traces the image boundary,
slices it radially, symmetrizes, builds the normalized Riemann map F
of the disk onto the symmetrized domain, extracts its coefficients, and
evaluates the coefficient relations: the weighted area identity
sum n |a_n|^2 = sum n |A_n|^2, the first-coefficient inequality
|a_1| <= A_1, the constant-term identity A_0 = |a_0|, integral means,
and the witness pair search (indices where |a_n| < |A_n| and where
|A_n| < |a_n|).

Every quantity is computed twice, at the configured resolution and
with boundary vertices, slice count, and sample count doubled; the
refined values are reported, the difference between the two runs is
the error estimate, and no inequality or witness is trusted beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    BranchError,
    CircSymError,
    InapplicableError,
    InputError,
    ScopeError,
)
from .families import family_member
from .geometry import (
    BoundaryCurve,
    RadialProfile,
    area_by_profile,
    area_by_shoelace,
    boundary_from_series,
    radial_profile,
    symmetrize,
    symmetrized_boundary,
)
from .series import (
    LittlewoodRow,
    PowerSeries,
    dirichlet_area,
    littlewood_check,
    periodic_trapezoid_mean,
)
from .zipper import ZipperMap, build_map, eval_map, series_of_map

SCHEMA_VERSION = 1

# absolute floor added to per-row error bands so exact-zero rows do not
# produce empty tolerance intervals
ROW_ERR_FLOOR = 1e-12


@dataclass(frozen=True)
class PipelineConfig:
    """Resolutions and tolerances for one verification run."""

    rho: float | None = None
    M_boundary: int = 1024
    m_slices: int = 512
    N_degree: int = 64
    r_extract: float | None = None
    M_samples: int | None = None
    identity_rel_tol: float = 1e-2
    delta: float | None = None
    reality_tol: float = 1e-4
    phis: tuple = ("exp", "exp2")
    mean_radii: tuple[float, ...] = (0.3, 0.6, 0.9)
    double_check: bool = True

    def __post_init__(self):
        if self.M_boundary < 16:
            raise InputError("M_boundary must be >= 16")
        if self.m_slices < 16:
            raise InputError("m_slices must be >= 16")
        if self.N_degree < 1:
            raise InputError("N_degree must be >= 1")
        if self.r_extract is None:
            # extraction divides by r^n, amplifying evaluation roundoff
            # (~1e-14) at the top degree; keep r^N >= 1e-8 so that noise
            # stays two orders below the reality tolerance
            object.__setattr__(
                self, "r_extract", max(0.8, 10.0 ** (-8.0 / self.N_degree))
            )
        if not (0.0 < self.r_extract < 1.0):
            raise InputError("r_extract must lie in (0, 1)")
        if self.M_samples is None:
            object.__setattr__(
                self, "M_samples", max(256, 2 * self.N_degree + 2)
            )
        if self.M_samples < 2 * self.N_degree + 2:
            raise InputError("M_samples must be >= 2*N_degree + 2")
        if self.delta is not None and not (self.delta > 0.0):
            raise InputError("delta must be positive")
        if self.rho is not None and not (0.0 < self.rho <= 1.0):
            raise InputError("rho must lie in (0, 1]")
        for r in self.mean_radii:
            if not (0.0 < r < 1.0):
                raise InputError(f"mean radius {r} not in (0, 1)")

    def to_json_dict(self) -> dict:
        return {
            "rho": self.rho,
            "M_boundary": self.M_boundary,
            "m_slices": self.m_slices,
            "N_degree": self.N_degree,
            "r_extract": self.r_extract,
            "M_samples": self.M_samples,
            "identity_rel_tol": self.identity_rel_tol,
            "delta": self.delta,
            "reality_tol": self.reality_tol,
            "phis": [list(p) if isinstance(p, (list, tuple)) else p for p in self.phis],
            "mean_radii": list(self.mean_radii),
            "double_check": self.double_check,
        }


class CoefficientRow(NamedTuple):
    n: int
    abs_a: float
    abs_A: float
    diff: float
    err: float


class MeanRow(NamedTuple):
    phi: str
    r: float
    mean_f: float
    mean_F: float
    margin: float
    err: float
    passed: bool
    underflow: bool


class Witness(NamedTuple):
    n1: int
    n2: int
    margin1: float
    margin2: float


@dataclass(frozen=True)
class VerificationReport:
    config: dict
    delta: float
    rows: tuple[CoefficientRow, ...]
    areas: dict
    hayman: dict
    a0: dict
    means: tuple[MeanRow, ...]
    littlewood: tuple[LittlewoodRow, ...] | None
    littlewood_skipped: str | None
    witness: Witness | None
    error_estimates: dict
    classification: str
    status: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": self.config,
            "delta": self.delta,
            "coefficients": [list(r) for r in self.rows],
            "areas": self.areas,
            "hayman": self.hayman,
            "a0": self.a0,
            "means": [
                {
                    "phi": m.phi,
                    "r": m.r,
                    "mean_f": m.mean_f,
                    "mean_F": m.mean_F,
                    "margin": m.margin,
                    "err": m.err,
                    "passed": m.passed,
                    "underflow": m.underflow,
                }
                for m in self.means
            ],
            "littlewood": None
            if self.littlewood is None
            else [list(r) for r in self.littlewood],
            "littlewood_skipped": self.littlewood_skipped,
            "witness": None if self.witness is None else dict(self.witness._asdict()),
            "error_estimates": self.error_estimates,
            "classification": self.classification,
            "status": self.status,
        }

    def coefficient_csv(self) -> str:
        lines = ["n,abs_a,abs_A,diff,err"]
        lines.extend(
            f"{r.n},{r.abs_a:.17g},{r.abs_A:.17g},{r.diff:.17g},{r.err:.17g}"
            for r in self.rows
        )
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PipelineArtifacts:
    """Intermediate geometry retained for rendering."""

    f_work: PowerSeries
    curve: BoundaryCurve
    profile: RadialProfile
    star_profile: RadialProfile
    star_curve: BoundaryCurve
    zmap: ZipperMap
    A_series: PowerSeries


def _stage(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except CircSymError as exc:
        cls = type(exc)
        try:
            wrapped = cls(f"[stage {name}] {exc}")
        except TypeError:
            wrapped = CircSymError(f"[stage {name}] {exc}")
        raise wrapped from exc


class _RawRun(NamedTuple):
    artifacts: PipelineArtifacts
    abs_a: np.ndarray
    abs_A: np.ndarray
    dirichlet_f: float
    dirichlet_F: float
    profile_area: float
    star_profile_area: float
    shoelace: float
    star_shoelace: float
    residual: float
    means: list[tuple[str, float, float, float, bool]]


def _phi_label(phi) -> str:
    if isinstance(phi, str):
        return phi
    name, param = phi
    return f"{name}:{param:g}"


def _evaluate(
    f_work: PowerSeries, cfg: PipelineConfig, M_boundary: int, m_slices: int,
    M_samples: int,
) -> _RawRun:
    curve = _stage("boundary", boundary_from_series, f_work, M_boundary)
    profile = _stage("profile", radial_profile, curve, m_slices)
    if profile.contains_origin:
        raise ScopeError(
            "[stage profile] image contains the origin; symmetrization "
            "produces a slit domain, out of scope"
        )
    star_profile = symmetrize(profile)
    star_curve = _stage("star-boundary", symmetrized_boundary, star_profile)
    target = abs(f_work.coefficients[0])
    zmap = _stage("map", build_map, star_curve, target)
    A_series = _stage(
        "coefficients", series_of_map, zmap, cfg.r_extract, M_samples, cfg.N_degree
    )

    A_arr = np.asarray(A_series.coefficients)
    imag_max = float(np.max(np.abs(A_arr.imag)))
    scale = float(np.max(np.abs(A_arr)))
    if imag_max > cfg.reality_tol * scale:
        raise BranchError(
            f"[stage coefficients] extracted coefficients are not real within "
            f"tolerance (max |Im| = {imag_max:.3e}, scale {scale:.3e}); the "
            "symmetric-domain map should have real coefficients"
        )

    L = max(f_work.degree, cfg.N_degree) + 1
    abs_a = np.zeros(L)
    abs_A = np.zeros(L)
    abs_a[: f_work.degree + 1] = np.abs(f_work.coefficients)
    abs_A[: cfg.N_degree + 1] = np.abs(A_arr)

    dirichlet_f = dirichlet_area(f_work)
    dirichlet_F = dirichlet_area(A_series)
    if dirichlet_f == 0.0:
        raise InapplicableError("constant map: sum n |a_n|^2 vanishes")
    residual = abs(dirichlet_f - dirichlet_F) / dirichlet_f

    M_mean = max(256, 2 * M_samples, 8 * cfg.N_degree)
    unit = np.exp(2j * np.pi * np.arange(M_mean) / M_mean)
    means = []
    for r in cfg.mean_radii:
        mod_f = np.abs(f_work.eval(r * unit))
        mod_F = np.abs(eval_map(zmap, r * unit))
        for phi in cfg.phis:
            res_f = periodic_trapezoid_mean(mod_f, phi)
            res_F = periodic_trapezoid_mean(mod_F, phi)
            means.append(
                (
                    _phi_label(phi), r, res_f.value, res_F.value,
                    res_f.underflow or res_F.underflow,
                )
            )

    return _RawRun(
        artifacts=PipelineArtifacts(
            f_work, curve, profile, star_profile, star_curve, zmap, A_series
        ),
        abs_a=abs_a,
        abs_A=abs_A,
        dirichlet_f=dirichlet_f,
        dirichlet_F=dirichlet_F,
        profile_area=area_by_profile(profile),
        star_profile_area=area_by_profile(star_profile),
        shoelace=area_by_shoelace(curve),
        star_shoelace=area_by_shoelace(star_curve),
        residual=residual,
        means=means,
    )


def check_area_identity(
    lhs: float, rhs: float, identity_rel_tol: float, err_estimate: float | None
) -> tuple[float, float, float, bool]:
    """Relative residual of sum n|a_n|^2 = sum n|A_n|^2.

    With a two-resolution error estimate available the residual must
    also be explained by it (within a factor 3); otherwise the fixed
    relative tolerance alone decides.
    """
    if lhs == 0.0:
        raise InapplicableError("identity inapplicable: left side vanishes")
    residual = abs(lhs - rhs) / lhs
    passed = residual < identity_rel_tol
    if err_estimate is not None:
        passed = passed and residual <= 3.0 * err_estimate
    return lhs, rhs, residual, passed


def check_hayman(
    abs_a1: float, abs_A1: float, err: float
) -> tuple[float, float, bool]:
    """|a_1| <= A_1, up to the per-row error estimate."""
    return abs_a1, abs_A1, abs_A1 >= abs_a1 - err


def find_witness(
    abs_a: Sequence[float],
    abs_A: Sequence[float],
    delta: float,
    row_err: Sequence[float],
) -> Witness | None:
    """Indices n1 (|a| < |A|) and n2 (|A| < |a|) with the largest
    margins; both margins must clear delta plus the per-row error."""
    diff = np.asarray(abs_A, dtype=float) - np.asarray(abs_a, dtype=float)
    err = np.asarray(row_err, dtype=float)
    if len(diff) < 2:
        return None
    n1 = int(np.argmax(diff[1:])) + 1
    n2 = int(np.argmax(-diff[1:])) + 1
    margin1 = float(diff[n1])
    margin2 = float(-diff[n2])
    if margin1 > delta + err[n1] and margin2 > delta + err[n2]:
        return Witness(n1, n2, margin1, margin2)
    return None


def run_pipeline(
    f: PowerSeries, cfg: PipelineConfig | None = None, artifacts_out: dict | None = None
) -> VerificationReport:
    """Execute every check on one series and assemble the report."""
    cfg = cfg or PipelineConfig()
    if abs(f.coefficients[0]) == 0.0:
        raise InapplicableError("pipeline requires |a_0| > 0 (f(0) != 0)")
    work_rho = cfg.rho if cfg.rho is not None else f.rho
    if work_rho > f.rho:
        raise InputError(
            f"working radius {work_rho} exceeds the trusted radius {f.rho}"
        )
    f_work = f.restrict(work_rho) if work_rho < 1.0 else f

    base = _evaluate(f_work, cfg, cfg.M_boundary, cfg.m_slices, cfg.M_samples)
    L = len(base.abs_a)

    if cfg.double_check:
        # the refined run is what gets reported; the base run only sizes
        # the error bands, which overestimate the refined error whenever
        # refinement actually converges
        fine = _evaluate(
            f_work, cfg, 2 * cfg.M_boundary, 2 * cfg.m_slices, 2 * cfg.M_samples
        )
        shown = fine
        row_err = np.abs(base.abs_A - fine.abs_A) + ROW_ERR_FLOOR
        # refinement comparisons use the same degree N on both grids, so
        # they are blind to the truncated tail sum_{n>N} n|A_n|^2; size
        # that component by the top-octave mass of the extracted series
        n_idx = np.arange(L)
        half = cfg.N_degree // 2
        tail = math.pi * float(
            np.sum(n_idx[half + 1 :] * fine.abs_A[half + 1 :] ** 2)
        )
        err_est = {
            "dirichlet_F": abs(base.dirichlet_F - fine.dirichlet_F),
            "identity_residual": abs(base.residual - fine.residual)
            + tail / max(fine.dirichlet_f, ROW_ERR_FLOOR)
            + ROW_ERR_FLOOR,
            "coefficient_max": float(np.max(np.abs(base.abs_A - fine.abs_A))),
            "profile_area": abs(base.profile_area - fine.profile_area),
            "shoelace": abs(base.shoelace - fine.shoelace),
            "star_shoelace": abs(base.star_shoelace - fine.star_shoelace),
            "means": {
                f"{label}@{r:g}": abs(v_F - w_F) + abs(v_f - w_f) + ROW_ERR_FLOOR
                for (label, r, v_f, v_F, _), (_, _, w_f, w_F, _) in zip(
                    base.means, fine.means
                )
            },
        }
        identity_err = err_est["identity_residual"]
    else:
        shown = base
        row_err = np.full(L, ROW_ERR_FLOOR)
        err_est = {}
        identity_err = None

    lhs, rhs, residual, identity_pass = check_area_identity(
        shown.dirichlet_f, shown.dirichlet_F, cfg.identity_rel_tol, identity_err
    )

    rows = tuple(
        CoefficientRow(
            n,
            float(shown.abs_a[n]),
            float(shown.abs_A[n]),
            float(shown.abs_A[n] - shown.abs_a[n]),
            float(row_err[n]),
        )
        for n in range(L)
    )

    abs_a1, abs_A1, hayman_pass = check_hayman(
        float(shown.abs_a[1]), float(shown.abs_A[1]), float(row_err[1])
    )

    A0 = complex(shown.artifacts.A_series.coefficients[0])
    a0_diff = abs(A0 - shown.abs_a[0])

    mean_rows = []
    for label, r, m_f, m_F, under in shown.means:
        if cfg.double_check:
            err = err_est["means"][f"{label}@{r:g}"]
        else:
            err = ROW_ERR_FLOOR
        margin = m_F - m_f
        mean_rows.append(
            MeanRow(label, r, m_f, m_F, margin, err, margin >= -err, under)
        )
    mean_rows = tuple(mean_rows)

    boundary_moduli = np.abs(
        f_work.eval(f_work.rho * np.exp(2j * np.pi * np.arange(1024) / 1024))
    )
    littlewood: tuple[LittlewoodRow, ...] | None
    if float(boundary_moduli.min()) > 0.0 and not shown.artifacts.profile.contains_origin:
        littlewood = tuple(littlewood_check(f_work))
        littlewood_skipped = None
    else:
        littlewood = None
        littlewood_skipped = "not verified nonvanishing on the boundary grid"

    delta = cfg.delta if cfg.delta is not None else 1e-3 * float(np.max(shown.abs_a))
    witness = find_witness(shown.abs_a, shown.abs_A, delta, row_err)

    # dual of the witness rule: a witness margin must exceed delta plus
    # the row error, equality requires every row to stay below that same
    # bar, so the two classifications are mutually exclusive by
    # construction
    equality = bool(np.all(np.abs(shown.abs_A - shown.abs_a) < delta + row_err))
    if witness is not None and equality:
        classification = "inconclusive"
    elif witness is not None:
        classification = "witness-found"
    elif equality:
        classification = "equality-suspected"
    else:
        classification = "inconclusive"

    status = {
        "identity": identity_pass,
        "hayman": hayman_pass,
        "a0": bool(a0_diff < 1e-6 * (1.0 + shown.abs_a[0])),
        "means": all(m.passed for m in mean_rows),
        "witness_present": witness is not None,
        "equality_suspected": equality,
        "littlewood": littlewood is None or all(r.passed for r in littlewood),
    }

    report = VerificationReport(
        config=cfg.to_json_dict(),
        delta=float(delta),
        rows=rows,
        areas={
            "dirichlet_f": lhs,
            "dirichlet_F": rhs,
            "residual": residual,
            "passed": identity_pass,
            "profile_area": shown.profile_area,
            "star_profile_area": shown.star_profile_area,
            "shoelace": shown.shoelace,
            "star_shoelace": shown.star_shoelace,
        },
        hayman={
            "abs_a1": abs_a1,
            "abs_A1": abs_A1,
            "err": float(row_err[1]),
            "passed": hayman_pass,
        },
        a0={
            "abs_a0": float(shown.abs_a[0]),
            "A0_re": A0.real,
            "A0_im": A0.imag,
            "diff": float(a0_diff),
        },
        means=mean_rows,
        littlewood=littlewood,
        littlewood_skipped=littlewood_skipped,
        witness=witness,
        error_estimates=err_est,
        classification=classification,
        status=status,
    )
    if artifacts_out is not None:
        artifacts_out["artifacts"] = shown.artifacts
    return report


def sweep(
    family: str, grid: Sequence[float], cfg: PipelineConfig | None = None
) -> list[dict]:
    """Run the pipeline over a parameter grid; failures are recorded
    per member and never abort the sweep."""
    cfg = cfg or PipelineConfig()
    summaries = []
    for index, parameter in enumerate(grid):
        row = {
            "index": index,
            "parameter": float(parameter),
            "classification": "",
            "identity_residual": "",
            "identity_pass": "",
            "hayman_pass": "",
            "n1": "",
            "n2": "",
            "margin1": "",
            "margin2": "",
            "error": "",
        }
        try:
            member = family_member(family, float(parameter))
            report = run_pipeline(member, cfg)
        except CircSymError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            summaries.append(row)
            continue
        row["classification"] = report.classification
        row["identity_residual"] = report.areas["residual"]
        row["identity_pass"] = report.areas["passed"]
        row["hayman_pass"] = report.hayman["passed"]
        if report.witness is not None:
            row["n1"] = report.witness.n1
            row["n2"] = report.witness.n2
            row["margin1"] = report.witness.margin1
            row["margin2"] = report.witness.margin2
        summaries.append(row)
    return summaries
