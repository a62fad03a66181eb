"""CLI contract tests: exit codes, file outputs, atomicity, summaries."""

import csv
import json
import math

import pytest

from circsym.cli import main
from circsym.families import mobius_disk, quadratic, rotated_disk

FAST = [
    "--boundary", "256",
    "--slices", "64",
    "--degree", "32",
    "--samples", "128",
]


def write_series(path, f):
    path.write_text(json.dumps(f.to_json_dict()))
    return str(path)


@pytest.fixture()
def quad_input(tmp_path):
    return write_series(tmp_path / "f.json", quadratic(math.pi / 2))


@pytest.fixture()
def disk_input(tmp_path):
    return write_series(tmp_path / "disk.json", rotated_disk(0.0))


# -- symmetrize --------------------------------------------------------------


def test_symmetrize_writes_profiles_and_boundaries(quad_input, tmp_path, capsys):
    out = tmp_path / "sym"
    rc = main(["symmetrize", "--input", quad_input, "--out", str(out)] + FAST)
    assert rc == 0
    for name in ("profile.csv", "star_profile.csv", "boundary.csv",
                 "star_boundary.csv", "config.json"):
        assert (out / name).exists(), name
    text = capsys.readouterr().out
    assert "slices" in text and "area" in text


def test_symmetrize_preserves_slice_measure(quad_input, tmp_path):
    out = tmp_path / "sym"
    main(["symmetrize", "--input", quad_input, "--out", str(out)] + FAST)
    rows = list(csv.DictReader((out / "profile.csv").open()))
    star = list(csv.DictReader((out / "star_profile.csv").open()))
    assert len(rows) == len(star) == 64
    for a, b in zip(rows, star):
        assert a["t"] == b["t"]
        # symmetrization carries each slice measure through bitwise
        assert float(a["alpha"]) == float(b["alpha"])


def test_symmetrize_disk_profile_matches_arccos(disk_input, tmp_path):
    # the unit disk about 2 has slice measure 2*arccos((t^2+3)/(4t))
    out = tmp_path / "sym"
    main(["symmetrize", "--input", disk_input, "--out", str(out)] + FAST)
    rows = list(csv.DictReader((out / "profile.csv").open()))
    for row in rows:
        t, alpha = float(row["t"]), float(row["alpha"])
        expected = 2.0 * math.acos(min(1.0, (t * t + 3.0) / (4.0 * t)))
        assert alpha == pytest.approx(expected, abs=2e-2)


def test_symmetrize_config_echoes_flags(quad_input, tmp_path):
    out = tmp_path / "sym"
    main(["symmetrize", "--input", quad_input, "--out", str(out)] + FAST)
    blob = json.loads((out / "config.json").read_text())
    assert blob["command"] == "symmetrize"
    assert blob["input"] == quad_input
    assert blob["config"]["M_boundary"] == 256
    assert blob["config"]["m_slices"] == 64


# -- map ---------------------------------------------------------------------


def test_map_writes_chain_json(quad_input, tmp_path, capsys):
    out = tmp_path / "map"
    rc = main(["map", "--input", quad_input, "--out", str(out)] + FAST)
    assert rc == 0
    blob = json.loads((out / "map.json").read_text())
    assert blob["normalization"]["target"] == pytest.approx(4.0)
    assert len(blob["steps"]) > 0
    assert "F(0) = 4" in capsys.readouterr().out


# -- verify ------------------------------------------------------------------


def test_verify_outputs_and_summary(quad_input, tmp_path, capsys):
    out = tmp_path / "verify"
    rc = main(["verify", "--input", quad_input, "--out", str(out)] + FAST)
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["schema_version"] == 1
    assert report["classification"] == "witness-found"
    assert report["witness"]["n1"] == 1
    assert report["witness"]["n2"] == 2
    rows = list(csv.DictReader((out / "coefficients.csv").open()))
    assert len(rows) == 33
    text = capsys.readouterr().out
    assert "classification: witness-found" in text
    assert "witness: n1=1" in text
    assert "hayman" in text


def test_verify_equality_summary_line(disk_input, tmp_path, capsys):
    out = tmp_path / "verify"
    main(["verify", "--input", disk_input, "--out", str(out)] + FAST)
    assert "equality case suspected" in capsys.readouterr().out


def test_verify_flags_reach_the_report(quad_input, tmp_path):
    out = tmp_path / "verify"
    main(["verify", "--input", quad_input, "--out", str(out)] + FAST
         + ["--delta", "0.01", "--tol", "0.5", "--no-double-check"])
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["delta"] == pytest.approx(0.01)
    assert report["config"]["identity_rel_tol"] == pytest.approx(0.5)
    assert report["config"]["double_check"] is False
    assert report["error_estimates"] == {}


def test_verify_high_degree_resolves_sample_count(disk_input, tmp_path):
    # --degree 128 without --samples must auto-resolve M >= 2N+2
    out = tmp_path / "verify"
    rc = main(["verify", "--input", disk_input, "--out", str(out),
               "--boundary", "512", "--slices", "64", "--degree", "128",
               "--no-double-check"])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["M_samples"] >= 2 * 128 + 2
    assert len(report["coefficients"]) == 129


def test_verify_rho_restricts_the_series(quad_input, tmp_path):
    out = tmp_path / "verify"
    main(["verify", "--input", quad_input, "--out", str(out)] + FAST
         + ["--rho", "0.5"])
    report = json.loads((out / "report.json").read_text())
    # coefficient rows serialize as [n, abs_a, abs_A, diff, err]
    assert report["coefficients"][1][1] == pytest.approx(0.5)


def test_verify_is_deterministic(quad_input, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["verify", "--input", quad_input, "--out", str(out1)] + FAST)
    main(["verify", "--input", quad_input, "--out", str(out2)] + FAST)
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "coefficients.csv").read_bytes() == (
        out2 / "coefficients.csv"
    ).read_bytes()


# -- sweep -------------------------------------------------------------------


def test_sweep_rows_match_grid(tmp_path, capsys):
    spec = tmp_path / "family.json"
    grid = [k * math.pi / 12 for k in range(13)]
    spec.write_text(json.dumps({"family": "rotated_disk", "grid": grid}))
    out = tmp_path / "sweep"
    rc = main(["sweep", "--input", str(spec), "--out", str(out)] + FAST)
    assert rc == 0
    rows = list(csv.DictReader((out / "sweep.csv").open()))
    assert len(rows) == 13
    assert [int(r["index"]) for r in rows] == list(range(13))
    assert all(r["classification"] == "equality-suspected" for r in rows)
    assert all(r["error"] == "" for r in rows)
    assert "13 members" in capsys.readouterr().out


def test_sweep_quadratic_finds_witnesses(tmp_path):
    spec = tmp_path / "family.json"
    spec.write_text(json.dumps({"family": "quadratic", "grid": [math.pi / 2]}))
    out = tmp_path / "sweep"
    main(["sweep", "--input", str(spec), "--out", str(out)] + FAST)
    (row,) = csv.DictReader((out / "sweep.csv").open())
    assert row["classification"] == "witness-found"
    assert (int(row["n1"]), int(row["n2"])) == (1, 2)
    assert float(row["margin1"]) > 0 and float(row["margin2"]) > 0
    assert row["identity_pass"] == "True"


def test_sweep_unknown_family_is_input_error(tmp_path):
    spec = tmp_path / "family.json"
    spec.write_text(json.dumps({"family": "nope", "grid": [0.0]}))
    rc = main(["sweep", "--input", str(spec), "--out", str(tmp_path / "o")] + FAST)
    assert rc == 1
    assert not (tmp_path / "o").exists()


def test_sweep_requires_family_and_grid(tmp_path):
    spec = tmp_path / "family.json"
    spec.write_text(json.dumps({"grid": [0.0]}))
    rc = main(["sweep", "--input", str(spec), "--out", str(tmp_path / "o")] + FAST)
    assert rc == 1


def test_sweep_rejects_non_numeric_grid(tmp_path):
    spec = tmp_path / "family.json"
    spec.write_text(json.dumps({"family": "rotated_disk", "grid": ["x"]}))
    rc = main(["sweep", "--input", str(spec), "--out", str(tmp_path / "o")] + FAST)
    assert rc == 1


# -- report ------------------------------------------------------------------


def test_report_renders_figures(quad_input, tmp_path):
    out = tmp_path / "report"
    rc = main(["report", "--input", quad_input, "--out", str(out)] + FAST)
    assert rc == 0
    for name in ("report.json", "coefficients.csv"):
        assert (out / name).exists(), name
    for name in ("coefficients.png", "areas.png", "means.png", "boundary.png"):
        data = (out / name).read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n", name
        assert len(data) > 1000, name


def test_report_json_matches_verify(quad_input, tmp_path):
    out1, out2 = tmp_path / "v", tmp_path / "r"
    main(["verify", "--input", quad_input, "--out", str(out1)] + FAST)
    main(["report", "--input", quad_input, "--out", str(out2)] + FAST)
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()


# -- exit codes and atomicity ------------------------------------------------


def test_malformed_json_exits_1_without_output(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    out = tmp_path / "out"
    rc = main(["verify", "--input", str(bad), "--out", str(out)] + FAST)
    assert rc == 1
    assert not out.exists()
    assert "malformed JSON" in capsys.readouterr().err


def test_missing_input_exits_1(tmp_path):
    rc = main(["verify", "--input", str(tmp_path / "no.json"),
               "--out", str(tmp_path / "o")] + FAST)
    assert rc == 1


def test_non_object_input_exits_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    rc = main(["verify", "--input", str(bad), "--out", str(tmp_path / "o")] + FAST)
    assert rc == 1


def test_origin_in_image_exits_2(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"rho": 1.0, "coefficients": [[0.1, 0.0], [1.0, 0.0]]}))
    out = tmp_path / "out"
    rc = main(["verify", "--input", str(f), "--out", str(out)] + FAST)
    assert rc == 2
    assert not out.exists()


def test_vanishing_center_exits_2(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"rho": 1.0, "coefficients": [[0.0, 0.0], [1.0, 0.0]]}))
    rc = main(["verify", "--input", str(f), "--out", str(tmp_path / "o")] + FAST)
    assert rc == 2


def test_rho_above_trusted_radius_exits_1(quad_input, tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"rho": 0.5, "coefficients": [[4.0, 0.0], [1.0, 0.0]]}))
    rc = main(["verify", "--input", str(f), "--out", str(tmp_path / "o")] + FAST
              + ["--rho", "0.9"])
    assert rc == 1


def test_bad_config_exits_1(quad_input, tmp_path):
    rc = main(["verify", "--input", quad_input, "--out", str(tmp_path / "o")]
              + FAST + ["--extract-radius", "1.5"])
    assert rc == 1


def test_unknown_flag_exits_1(quad_input, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--input", quad_input, "--out", str(tmp_path / "o"),
              "--nope"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_missing_subcommand_exits_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
    capsys.readouterr()


def test_no_stray_temp_files(quad_input, tmp_path):
    out = tmp_path / "out"
    main(["verify", "--input", quad_input, "--out", str(out)] + FAST)
    names = {p.name for p in out.iterdir()}
    assert names == {"report.json", "coefficients.csv"}


def test_mobius_truncation_round_trips(tmp_path):
    # a degree-12 truncation is enough for coefficient agreement at 1e-3
    path = write_series(tmp_path / "m.json", mobius_disk(12))
    out = tmp_path / "out"
    rc = main(["verify", "--input", path, "--out", str(out)] + FAST)
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    for n in range(1, 8):
        expected = 3.0 / 2.0 ** (n + 1)
        assert report["coefficients"][n][2] == pytest.approx(expected, abs=1e-3)
