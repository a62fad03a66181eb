"""Figure rendering for verification reports.

Renders the coefficient comparison, the area cross-checks, the
integral-means table, and the boundary overlay to PNG bytes, so the
command line can write them atomically alongside the delimited output.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .pipeline import PipelineArtifacts, VerificationReport

# log-scale floor for coefficient magnitudes that are exactly zero
LOG_FLOOR = 1e-17


def _fig_bytes(fig) -> bytes:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=120, bbox_inches="tight")
    plt.close(fig)
    return buf.getvalue()


def _coefficients_figure(report: VerificationReport) -> bytes:
    n = np.array([r.n for r in report.rows])
    abs_a = np.array([r.abs_a for r in report.rows])
    abs_A = np.array([r.abs_A for r in report.rows])
    diff = np.array([r.diff for r in report.rows])
    err = np.array([r.err for r in report.rows])
    bar = report.delta + err

    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7.5, 6.5), sharex=True)
    top.semilogy(n, np.maximum(abs_a, LOG_FLOOR), "o", label=r"$|a_n|$")
    top.semilogy(
        n, np.maximum(abs_A, LOG_FLOOR), "x", markersize=8, label=r"$|A_n|$"
    )
    top.set_ylabel("coefficient modulus")
    top.legend()
    top.set_title(f"classification: {report.classification}")

    bottom.axhline(0.0, color="gray", linewidth=0.8)
    bottom.fill_between(
        n, -bar, bar, alpha=0.25, color="gray", label=r"$\pm(\delta + err)$"
    )
    bottom.plot(n, diff, ".-", label=r"$|A_n| - |a_n|$")
    if report.witness is not None:
        w = report.witness
        bottom.plot([w.n1], [diff[w.n1]], "^", color="tab:green", markersize=10)
        bottom.plot([w.n2], [diff[w.n2]], "v", color="tab:red", markersize=10)
        bottom.annotate(f"n1={w.n1}", (w.n1, diff[w.n1]))
        bottom.annotate(f"n2={w.n2}", (w.n2, diff[w.n2]))
    bottom.set_xlabel("n")
    bottom.set_ylabel("difference")
    bottom.legend()
    return _fig_bytes(fig)


def _areas_figure(report: VerificationReport) -> bytes:
    areas = report.areas
    labels = [
        "$\\pi\\sum n|a_n|^2$",
        "$\\pi\\sum n|A_n|^2$",
        "profile",
        "profile*",
        "shoelace",
        "shoelace*",
    ]
    values = [
        areas["dirichlet_f"],
        areas["dirichlet_F"],
        areas["profile_area"],
        areas["star_profile_area"],
        areas["shoelace"],
        areas["star_shoelace"],
    ]
    fig, ax = plt.subplots(figsize=(7.5, 4.0))
    bars = ax.bar(labels, values, color="tab:blue", alpha=0.8)
    ax.bar_label(bars, fmt="%.6g", fontsize=8)
    ax.set_ylabel("area")
    ax.set_title(
        f"area identity residual {areas['residual']:.2e} "
        f"({'pass' if areas['passed'] else 'FAIL'})"
    )
    ax.tick_params(axis="x", labelsize=8)
    return _fig_bytes(fig)


def _means_figure(report: VerificationReport) -> bytes:
    phis = []
    for m in report.means:
        if m.phi not in phis:
            phis.append(m.phi)
    fig, axes = plt.subplots(
        1, max(1, len(phis)), figsize=(4.0 * max(1, len(phis)), 3.6), squeeze=False
    )
    for ax, phi in zip(axes[0], phis):
        rows = [m for m in report.means if m.phi == phi]
        r = [m.r for m in rows]
        ax.plot(r, [m.mean_f for m in rows], "o-", label="mean f")
        ax.plot(r, [m.mean_F for m in rows], "s--", label="mean F")
        ax.set_xlabel("r")
        ax.set_title(f"$\\Phi$ = {phi}")
        ax.legend()
    axes[0][0].set_ylabel("integral mean")
    return _fig_bytes(fig)


def _boundary_figure(artifacts: PipelineArtifacts) -> bytes:
    crv = np.asarray(artifacts.curve.points)
    star = np.asarray(artifacts.star_curve.points)
    crv = np.append(crv, crv[0])
    star = np.append(star, star[0])
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.plot(crv.real, crv.imag, "-", label=r"$\partial D$")
    ax.plot(star.real, star.imag, "-", label=r"$\partial D^*$")
    ax.plot([0.0], [0.0], "+", color="black", markersize=10)
    ax.plot([artifacts.zmap.target], [0.0], "*", color="tab:green", markersize=10,
            label="F(0)")
    ax.set_aspect("equal")
    ax.legend()
    ax.set_title("image boundary and its circular symmetrization")
    return _fig_bytes(fig)


def render_figures(
    report: VerificationReport, artifacts: PipelineArtifacts | None = None
) -> dict[str, bytes]:
    """PNG bytes keyed by file name; the boundary overlay needs the
    pipeline artifacts and is skipped without them."""
    out = {
        "coefficients.png": _coefficients_figure(report),
        "areas.png": _areas_figure(report),
        "means.png": _means_figure(report),
    }
    if artifacts is not None:
        out["boundary.png"] = _boundary_figure(artifacts)
    return out
