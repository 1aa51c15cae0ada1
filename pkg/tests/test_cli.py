"""CLI contract tests: dispatch, config handling, emission, determinism."""

import json

import pytest

from cosetmoe.cli import SWEEP_COLUMNS, _json_text, dispatch, emit_report


def _run(capsys, *argv):
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bounds_n10(capsys):
    code, out, _ = _run(capsys, "bounds", "--n", "10")
    assert code == 0
    report = json.loads(out)
    assert report["moe_bound"] == pytest.approx(0.747, abs=5e-4)
    assert report["version"]
    assert report["config"] == {"n": 10}
    assert len(report["config_sha256"]) == 64


def test_bounds_full_parameter_set(capsys):
    code, out, _ = _run(
        capsys, "bounds", "--n", "100", "--d", "10", "--eta", "0.2",
        "--gamma", "0.01", "--delta", "0.005", "--kappa", "4.0", "--ell", "2",
        "--s", "20",
    )
    assert code == 0
    report = json.loads(out)
    for field in ("binding_bound", "completeness_bound", "secrecy_bound",
                  "extractor_epsilon", "kappa_max_commitment"):
        assert field in report


def test_unknown_flag_exits_2(capsys):
    code, _, err = _run(capsys, "moe", "--bogus")
    assert code == 2
    assert "Usage" in err


def test_unknown_subcommand_exits_2(capsys):
    code, _, err = _run(capsys, "teleport")
    assert code == 2
    assert "teleport" in err


def test_unknown_config_key_exits_2(capsys):
    code, _, err = _run(capsys, "qecm", "--set", "warp=9")
    assert code == 2
    assert "warp" in err


def test_unknown_file_key_exits_2(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 8, "mystery": 1}))
    code, _, err = _run(capsys, "qecm", "--config", str(path))
    assert code == 2
    assert "mystery" in err


def test_malformed_override_exits_2(capsys):
    code, _, err = _run(capsys, "qecm", "--set", "justakey")
    assert code == 2
    assert "key=value" in err


def test_bad_domain_value_exits_2(capsys):
    code, _, err = _run(capsys, "bounds", "--n", "7")
    assert code == 2
    assert "even" in err


def test_config_file_and_flag_precedence(capsys, tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 4, "ell": 1, "trials": 50, "seed": 1}))
    code, out, _ = _run(
        capsys, "qecm", "--config", str(path), "--seed", "9", "--trials", "40"
    )
    assert code == 0
    report = json.loads(out)
    # the dedicated flags override the file values
    assert report["config"]["seed"] == 9
    assert report["config"]["trials"] == 40
    assert report["config"]["n"] == 4


def test_identical_argv_gives_identical_bytes(capsys):
    argv = ("qkd", "--seed", "7", "--trials", "100")
    _, out1, _ = _run(capsys, *argv)
    _, out2, _ = _run(capsys, *argv)
    assert out1 == out2


def test_moe_report_passes_bound(capsys):
    code, out, _ = _run(
        capsys, "moe", "--set", "kind=charlie_all", "--trials", "4000",
        "--seed", "2", "--threads", "2",
    )
    assert code == 0
    report = json.loads(out)
    assert report["estimate"] <= report["bound"] + 0.05
    assert report["analytic"] == pytest.approx(1 / 16)
    assert report["pass"] is True


def test_moe_keep_and_substitute_custom_record(capsys):
    code, out, _ = _run(
        capsys, "moe", "--set", "kind=keep_and_substitute",
        "--set", 'substitute_x="10101010"', "--trials", "2000", "--seed", "3",
    )
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_tfkw_attack_reports_broken(capsys):
    code, out, _ = _run(
        capsys, "tfkw", "--set", "eve=substitute_zero", "--trials", "30",
        "--seed", "4",
    )
    assert code == 0
    report = json.loads(out)
    assert report["broken"] is True and report["pass"] is True


def test_failed_criterion_exits_1(capsys):
    # total channel noise makes every honest run abort
    code, out, _ = _run(
        capsys, "tfkw", "--set", "dx=1.0", "--set", "dz=1.0", "--trials", "10",
        "--seed", "5",
    )
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_sweep_seven_rows_fixed_header(capsys):
    code, out, _ = _run(
        capsys, "sweep", "--experiment", "urbc", "--param", "eta",
        "--from", str(1 / 7), "--to", str(6 / 7), "--steps", "6",
        "--set", "kind=binding", "--trials", "400", "--seed", "6",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 7
    # binding acceptance falls as the spot check grows
    rates = [float(line.split(",")[2]) for line in lines[1:]]
    assert rates[0] > rates[-1]


def test_empty_sweep_is_header_only(capsys):
    code, out, _ = _run(
        capsys, "sweep", "--experiment", "moe", "--param", "n",
        "--from", "4", "--to", "12", "--steps", "0",
    )
    assert code == 0
    assert out == ",".join(SWEEP_COLUMNS) + "\n"


def test_sweep_rejects_unknown_param(capsys):
    code, _, err = _run(
        capsys, "sweep", "--experiment", "qkd", "--param", "warp",
        "--from", "0", "--to", "1", "--steps", "2",
    )
    assert code == 2
    assert "warp" in err


def test_json_report_round_trips(capsys):
    _, out, _ = _run(capsys, "qkd", "--seed", "3", "--trials", "50")
    text = out.strip()
    assert _json_text(json.loads(text)) == text


def test_emit_report_csv_single_report(tmp_path):
    report = {"version": "x", "value": 0.125, "flag": True, "note": None}
    path = tmp_path / "r.csv"
    text = emit_report(report, "csv", str(path))
    assert path.read_text() == text
    lines = text.splitlines()
    assert lines[0] == "version,value,flag,note"
    assert lines[1] == "x,0.125,true,"


def test_emit_report_twelve_significant_digits():
    text = emit_report({"pi": 3.14159265358979323}, "json", None)
    assert '"pi":3.14159265359' in text


def test_selftest_passes_and_is_thread_invariant(capsys):
    code1, out1, _ = _run(capsys, "selftest", "--seed", "3", "--threads", "1")
    code2, out2, _ = _run(capsys, "selftest", "--seed", "3", "--threads", "4")
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["all_pass"] is True
    names = [c["name"] for c in report["checks"]]
    assert "tfkw_substitution_attack" in names and "urbc_binding_n14" in names


def test_dispatch_help_exits_0(capsys):
    code, out, _ = _run(capsys, "--help")
    assert code == 0
    assert "selftest" in out
