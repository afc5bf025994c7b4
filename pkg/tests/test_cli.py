import json
import subprocess
import sys

import pytest

from signedlp.cli import main
from signedlp.pipeline import RunConfig, run_pipeline

from conftest import curve_path


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_unknown_flag_exits_2():
    proc = subprocess.run(
        [sys.executable, "-m", "signedlp", "signed", "--bogus"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert "usage" in proc.stderr.lower()


def test_signed_reports_gcd_x(capsys):
    code, out, _ = run_cli(
        ["signed", "--curve", curve_path("53a1"), "--p", "3",
         "--level", "2", "--prec", "8", "--digits", "14"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["gcd"] == "X" and payload["gcd_certified"]
    assert payload["method"] == "linear-system"


def test_verify_passes(capsys):
    code, out, _ = run_cli(
        ["verify", "--curve", curve_path("53a1"), "--p", "5",
         "--level", "2", "--prec", "8", "--digits", "14", "--fine-char", "1"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["delta_E"] == 1
    assert all(c["status"] == "PASS" for c in payload["checks"])


def test_ordinary_prime_fails_at_extract_stage(capsys):
    # symbols, thetas and compatibility are meaningful at any good prime;
    # only the signed extraction demands supersingular reduction
    code, _, err = run_cli(
        ["signed", "--curve", curve_path("37a1"), "--p", "5",
         "--digits", "14"],
        capsys,
    )
    assert code == 1
    assert "WrongReductionType" in err
    assert "stage: extract" in err


def test_bad_prime_fails_at_classify_stage(capsys):
    code, _, err = run_cli(
        ["signed", "--curve", curve_path("37a1"), "--p", "37",
         "--digits", "14"],
        capsys,
    )
    assert code == 1
    assert "WrongReductionType" in err
    assert "stage: classify" in err


def test_curve_info(capsys):
    code, out, _ = run_cli(
        ["curve-info", "--curve", curve_path("37a1"), "--p", "17"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["conductor"] == 37
    assert payload["reduction_at_p"]["type"] == "good-supersingular"
    assert abs(payload["omega_plus"] - 5.9869172924639) < 1e-10


def test_imported_table_matches_computed(tmp_path, capsys):
    table_file = tmp_path / "53a1_p3.csv"
    code, out1, _ = run_cli(
        ["signed", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--prec", "8", "--digits", "14", "--table", str(table_file), "--export"],
        capsys,
    )
    assert code == 0 and table_file.exists()
    code, out2, _ = run_cli(
        ["signed", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--prec", "8", "--digits", "14", "--table", str(table_file), "--import"],
        capsys,
    )
    assert code == 0
    assert json.loads(out1) == json.loads(out2)


def test_run_config_validates_inputs():
    with pytest.raises(ValueError):
        RunConfig(curve_file=curve_path("53a1"), p=9)
    with pytest.raises(ValueError):
        RunConfig(curve_file=curve_path("53a1"), p=2)
    with pytest.raises(ValueError):
        RunConfig(curve_file=curve_path("53a1"), p=5, precision=1)
    cfg = RunConfig(curve_file=curve_path("53a1"), p=5)
    assert cfg.n_max == 2
    assert RunConfig(curve_file=curve_path("53a1"), p=11).n_max == 1


def test_gcd_stable_under_p_precision():
    results = {}
    for M in (2, 8):
        cfg = RunConfig(
            curve_file=curve_path("53a1"), p=5, n_max=2,
            precision=M, digits=14,
        )
        results[M] = run_pipeline(cfg).gcd.as_string()
    assert results[2] == results[8] == "X"


def test_report_deterministic(tmp_path, capsys):
    paths = []
    for i in (0, 1):
        out = tmp_path / f"report{i}.json"
        code, _, _ = run_cli(
            ["report", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
             "--prec", "8", "--digits", "14", "--fine-char", "1",
             "--out", str(out)],
            capsys,
        )
        assert code == 0
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_report_csv_format(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code, _, _ = run_cli(
        ["report", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--prec", "8", "--digits", "14", "--fine-char", "1",
         "--format", "csv", "--out", str(out)],
        capsys,
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("curve,p,gcd")
    assert len(lines) > 2


def test_symbols_subcommand(tmp_path, capsys):
    table_file = tmp_path / "t.csv"
    code, out, _ = run_cli(
        ["symbols", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--digits", "14", "--table", str(table_file), "--export"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["hecke"] == "PASS" and table_file.exists()


def test_theta_subcommand(capsys):
    code, out, _ = run_cli(
        ["theta", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--digits", "14"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["compat"] == {"2": True}
    assert all(v["value_at_zero_vanishes"] for v in payload["thetas"].values())


def test_report_embeds_certification(capsys):
    code, out, _ = run_cli(
        ["report", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
         "--digits", "14", "--fine-char", "1"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    sym = payload["run"]["stages"]["symbols"]
    assert sym["certification"]["functional_equation_signs"] == [-1, -1]
    assert set(sym["certification"]["tail_bounds"]) == {"1", "2", "3"}


@pytest.mark.extended
def test_spec_invocation_37a1_p17(capsys):
    # the documented invocation shape, at an explicit fast digit count
    code, out, _ = run_cli(
        ["signed", "--curve", curve_path("37a1"), "--p", "17",
         "--level", "1", "--prec", "6", "--digits", "13"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["gcd"] == "X"


def test_cache_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SIGNEDLP_CACHE_DIR", str(tmp_path))
    args = ["gcd", "--curve", curve_path("53a1"), "--p", "3", "--level", "2",
            "--prec", "8", "--digits", "14"]
    code, out1, _ = run_cli(args, capsys)
    assert code == 0
    cached = list(tmp_path.glob("*.csv"))
    assert len(cached) == 1
    code, out2, _ = run_cli(args, capsys)
    assert code == 0 and json.loads(out1) == json.loads(out2)
