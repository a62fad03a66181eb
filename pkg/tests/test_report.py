"""Figure rendering: PNG payloads for every report, with or without
retained geometry artifacts."""

import math

import pytest

from circsym.families import quadratic, rotated_disk
from circsym.pipeline import PipelineConfig, run_pipeline
from circsym.report import render_figures

SMALL = PipelineConfig(M_boundary=256, m_slices=64, N_degree=32, M_samples=128)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(scope="module")
def quad_run():
    artifacts: dict = {}
    report = run_pipeline(quadratic(math.pi / 2), SMALL, artifacts_out=artifacts)
    return report, artifacts["artifacts"]


def test_render_without_artifacts(quad_run):
    report, _ = quad_run
    figures = render_figures(report)
    assert set(figures) == {"coefficients.png", "areas.png", "means.png"}
    for name, data in figures.items():
        assert data[:8] == PNG_MAGIC, name
        assert len(data) > 1000, name


def test_render_with_artifacts_adds_boundary(quad_run):
    report, artifacts = quad_run
    figures = render_figures(report, artifacts)
    assert "boundary.png" in figures
    assert figures["boundary.png"][:8] == PNG_MAGIC


def test_render_is_deterministic(quad_run):
    report, artifacts = quad_run
    first = render_figures(report, artifacts)
    second = render_figures(report, artifacts)
    assert first.keys() == second.keys()
    for name in first:
        assert first[name] == second[name], name


def test_render_handles_equality_report():
    # no witness markers to draw; must still render all three figures
    report = run_pipeline(rotated_disk(0.0), SMALL)
    figures = render_figures(report)
    assert set(figures) == {"coefficients.png", "areas.png", "means.png"}
    for data in figures.values():
        assert data[:8] == PNG_MAGIC
