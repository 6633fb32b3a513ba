"""End-to-end CLI tests driving main() in process, plus one console-script run."""

import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from sysanom.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_pairs(path, n=120, seed=1):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    y = x + 0.1 * rng.normal(size=n)
    with open(path, "w", newline="") as fh:
        for xv, yv in zip(x, y):
            fh.write(f"{float(xv)!r},{float(yv)!r}\n")


def test_preset_list(capsys):
    code, out, _ = run_cli(capsys, "preset-list")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["presets"]) == 21
    assert payload["effective_config"]["command"] == "preset-list"


def test_indices_happy_path(tmp_path, capsys):
    src = tmp_path / "pairs.csv"
    write_pairs(src)
    out_csv = tmp_path / "curve.csv"
    out_svg = tmp_path / "curve.svg"
    code, out, _ = run_cli(
        capsys,
        "indices",
        "--input", str(src),
        "--out", str(out_csv),
        "--svg", str(out_svg),
        "--min-points", "10",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["classification"] in {"anomaly_affected", "anomaly_free", "inconclusive"}
    cfg = payload["effective_config"]
    assert cfg["n_min"] == 20
    assert cfg["detector"]["min_points"] == 10
    first_row = out_csv.read_text().splitlines()[1]
    assert first_row.startswith("20,")
    assert out_svg.read_bytes().startswith(b"<?xml")

    # byte-identical outputs on re-run
    before_csv = out_csv.read_bytes()
    before_svg = out_svg.read_bytes()
    code2, out2, _ = run_cli(
        capsys,
        "indices",
        "--input", str(src),
        "--out", str(out_csv),
        "--svg", str(out_svg),
        "--min-points", "10",
    )
    assert code2 == 0
    assert out2 == out
    assert out_csv.read_bytes() == before_csv
    assert out_svg.read_bytes() == before_svg


def test_analyze_alias_matches_indices(tmp_path, capsys):
    src = tmp_path / "pairs.csv"
    write_pairs(src, n=80, seed=2)
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    code_a, stdout_a, _ = run_cli(
        capsys, "indices", "--input", str(src), "--out", str(out_a), "--min-points", "5"
    )
    code_b, stdout_b, _ = run_cli(
        capsys, "analyze", "--input", str(src), "--out", str(out_b), "--min-points", "5"
    )
    assert code_a == code_b == 0
    assert json.loads(stdout_a)["classification"] == json.loads(stdout_b)["classification"]
    assert out_a.read_bytes() == out_b.read_bytes()


def test_indices_with_diff_transform(tmp_path, capsys):
    src = tmp_path / "pairs.csv"
    rng = np.random.default_rng(3)
    levels_x = 100.0 + np.cumsum(rng.normal(size=100))
    levels_y = 50.0 + np.cumsum(rng.normal(size=100))
    with open(src, "w", newline="") as fh:
        fh.write("x,y\n")
        for xv, yv in zip(levels_x, levels_y):
            fh.write(f"{float(xv)!r},{float(yv)!r}\n")
    out_csv = tmp_path / "curve.csv"
    code, out, _ = run_cli(
        capsys,
        "indices",
        "--input", str(src),
        "--has-header",
        "--x-col", "x",
        "--y-col", "y",
        "--transform", "diff:1",
        "--min-points", "10",
        "--out", str(out_csv),
    )
    assert code == 0
    assert json.loads(out)["effective_config"]["transform"] == "diff:1"
    # 100 levels difference to 99, so the curve ends at n=99
    assert out_csv.read_text().splitlines()[-1].startswith("99,")


def test_indices_zero_base_returns_is_data_error(tmp_path, capsys):
    src = tmp_path / "pairs.csv"
    src.write_text("0.0,1.0\n2.0,3.0\n4.0,5.0\n")
    code, out, err = run_cli(
        capsys, "indices", "--input", str(src), "--transform", "returns",
        "--out", str(tmp_path / "c.csv"),
    )
    assert code == 2
    assert out == ""
    assert "data error" in err


def test_indices_bad_transform_is_usage_error(tmp_path, capsys):
    src = tmp_path / "pairs.csv"
    write_pairs(src, n=30)
    for bad in ("diff:0", "diff:x", "wavelet"):
        code, _, err = run_cli(
            capsys, "indices", "--input", str(src), "--transform", bad,
            "--out", str(tmp_path / "c.csv"),
        )
        assert code == 1
        assert "usage error" in err


def test_indices_missing_file_no_partial_output(tmp_path, capsys):
    out_csv = tmp_path / "curve.csv"
    code, _, err = run_cli(
        capsys, "indices", "--input", str(tmp_path / "absent.csv"), "--out", str(out_csv)
    )
    assert code == 2
    assert "data error" in err
    assert not out_csv.exists()


def test_unknown_flag_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "preset-list", "--nope")
    assert code == 1
    assert "usage error" in err


def test_simulate_preset_outputs(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out, _ = run_cli(
        capsys,
        "simulate",
        "--preset", "precise-tf2-a1.2",
        "--replications", "2",
        "--svg",
        "--out-dir", str(out_dir),
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["classifications"]) == 2
    for name in (
        "sample_000.csv", "curve_000.csv", "curve_000.svg",
        "sample_001.csv", "curve_001.csv", "verdicts.json",
        "result.json", "result.csv",
    ):
        assert (out_dir / name).exists()
    assert payload["effective_config"]["spec"]["seed"] == 54321

    # a second run into a fresh directory reproduces every file exactly
    out_dir2 = tmp_path / "run2"
    code2, _, _ = run_cli(
        capsys,
        "simulate",
        "--preset", "precise-tf2-a1.2",
        "--replications", "2",
        "--svg",
        "--out-dir", str(out_dir2),
    )
    assert code2 == 0
    for child in sorted(out_dir.iterdir()):
        assert (out_dir2 / child.name).read_bytes() == child.read_bytes()


def test_simulate_strict_none_monotone(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out, _ = run_cli(
        capsys, "simulate", "--preset", "strict-none", "--out-dir", str(out_dir)
    )
    assert code == 0
    rows = (out_dir / "curve_000.csv").read_text().splitlines()[1:]
    for row in rows:
        i_cell = row.split(",")[1]
        assert i_cell in ("", "1.0")


def test_simulate_unknown_preset_is_usage_error(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "simulate", "--preset", "nope-none", "--out-dir", str(tmp_path / "x")
    )
    assert code == 1
    assert "usage error" in err


def test_simulate_spec_json(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "arma": {"mean": 120.0, "ar_coeffs": [0.6], "ma_coeffs": [0.4], "noise_sd": 1.87},
        "service_range": [117.0, 123.0],
        "mode": "tf2",
        "output_anomaly": {"shape": 11.0, "scale": 1.0},
        "n_max": 120,
        "replications": 1,
        "seed": 5,
    }))
    code, out, _ = run_cli(
        capsys, "simulate", "--spec", str(spec_path), "--out-dir", str(tmp_path / "r")
    )
    assert code == 0
    assert json.loads(out)["effective_config"]["spec"]["n_max"] == 120


def test_simulate_spec_inverted_range_is_usage_error(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "arma": {"mean": 120.0},
        "service_range": [123.0, 117.0],
        "mode": "tf2",
    }))
    code, _, err = run_cli(
        capsys, "simulate", "--spec", str(spec_path), "--out-dir", str(tmp_path / "r")
    )
    assert code == 1
    assert "a <= b" in err


def test_limit_clamped(tmp_path, capsys):
    path = tmp_path / "baseline.json"
    path.write_text(json.dumps({"breakpoints": [114.0, 126.0], "values": [114.0, 126.0]}))
    code, out, _ = run_cli(capsys, "limit", "--baseline", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["limit_index"] == 1.0
    assert payload["lambda"] == 1.0


def test_limit_constant_prints_null_markers(tmp_path, capsys):
    path = tmp_path / "baseline.json"
    path.write_text(json.dumps({"breakpoints": [0.0, 1.0], "values": [5.0, 5.0]}))
    code, out, _ = run_cli(capsys, "limit", "--baseline", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["limit_index"] is None
    assert payload["lambda"] is None


def test_limit_tent(tmp_path, capsys):
    path = tmp_path / "baseline.json"
    path.write_text(json.dumps({"breakpoints": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 0.0]}))
    code, out, _ = run_cli(capsys, "limit", "--baseline", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["limit_index"] == 0.5
    assert payload["lambda"] == 0.0


def test_limit_unparseable_is_data_error(tmp_path, capsys):
    path = tmp_path / "baseline.json"
    path.write_text("{not json")
    code, _, err = run_cli(capsys, "limit", "--baseline", str(path))
    assert code == 2
    assert "data error" in err


def test_version_flag():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


@pytest.mark.skipif(shutil.which("sysanom") is None, reason="console script not on PATH")
def test_console_script_runs():
    proc = subprocess.run(
        ["sysanom", "preset-list"], capture_output=True, text=True, timeout=60
    )
    assert proc.returncode == 0
    assert "strict-none" in proc.stdout


def test_python_dash_m_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "sysanom.cli", "preset-list"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    assert "precise-tf2-a1.2" in proc.stdout
