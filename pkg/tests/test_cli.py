from __future__ import annotations

import json

import pytest

from jsk.cli import main
from jsk.diffop import LinearDiffOp
from jsk.report import SCHEMA
from jsk.scenarios.operators import airy2, divergence_sym2, exterior_derivative, killing


def write_op(path, op: LinearDiffOp):
    path.write_text(json.dumps(op.to_record(), indent=2) + "\n", encoding="utf-8")
    return str(path)


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def section(record: dict, title: str):
    return next(s["payload"] for s in record["sections"] if s["title"] == title)


# ----- exit codes -----

def test_counts_run_passes(capsys):
    code, rec = run_json(capsys, "run", "counts", "--n", "4")
    assert code == 0
    assert rec["schema"] == SCHEMA and rec["verdict"] is True
    assert rec["scenario"] == {"name": "counts", "params": {"n": 4, "signature": "euclid"}}


def test_failed_check_exits_one(tmp_path, capsys):
    d = write_op(tmp_path / "div.json", divergence_sym2())
    p = write_op(tmp_path / "p.json", LinearDiffOp(2, [["d2^2"], ["d1*d2"], ["d1^2"]]))
    code = main(["op", d, "--mode", "parametrize", "--with", p])
    err = capsys.readouterr().err
    assert code == 1
    assert "check failed: D ∘ P = 0" in err


def test_unknown_scenario_exits_two(capsys):
    assert main(["run", "no-such-scenario"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_small_n_exits_two(capsys):
    assert main(["run", "counts", "--n", "1"]) == 2
    assert "n must be ≥ 2" in capsys.readouterr().err


def test_irrelevant_parameter_exits_two(capsys):
    assert main(["run", "affine", "--n", "3"]) == 2


def test_parse_error_reports_line_and_column(tmp_path, capsys):
    rec = killing(2).to_record()
    rec["entries"][1][0] = "d2 + + d1"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rec, indent=2), encoding="utf-8")
    assert main(["op", str(path), "--mode", "cc"]) == 2
    err = capsys.readouterr().err
    lines = path.read_text(encoding="utf-8").splitlines()
    line_no = next(i for i, text in enumerate(lines, 1) if "d2 + + d1" in text)
    assert f"{path}:{line_no}:" in err


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 2,\n  "entries": [\n', encoding="utf-8")
    assert main(["op", str(path), "--mode", "adjoint"]) == 2
    assert f"{path}:4:" in capsys.readouterr().err


def test_missing_with_for_parametrize(tmp_path, capsys):
    d = write_op(tmp_path / "div.json", divergence_sym2())
    assert main(["op", d, "--mode", "parametrize"]) == 2


def test_bad_seed_is_a_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("JSK_SEED", "not-a-number")
    assert main(["run", "maurer-cartan"]) == 2


# ----- determinism -----

@pytest.mark.parametrize("argv", [["run", "counts", "--n", "3"], ["run", "killing2"], ["run", "maurer-cartan"]])
def test_json_is_byte_identical(capsys, argv):
    main([*argv, "--json"])
    first = capsys.readouterr().out
    main([*argv, "--json"])
    assert capsys.readouterr().out == first


def test_seed_changes_random_payloads(monkeypatch, capsys):
    monkeypatch.setenv("JSK_SEED", "1")
    main(["run", "maurer-cartan", "--json"])
    one = capsys.readouterr().out
    monkeypatch.setenv("JSK_SEED", "2")
    main(["run", "maurer-cartan", "--json"])
    assert capsys.readouterr().out != one


# ----- scenario reports -----

def test_affine_report_rows(capsys):
    code, rec = run_json(capsys, "run", "affine")
    assert code == 0
    rows = {s["title"]: s["payload"] for s in rec["sections"] if s["kind"] == "dims"}
    assert [tuple(r["full"]) for r in rows.values()] == [(2, 2), (1, 3, 2), (1, 1)]


def test_counts_report_values(capsys):
    _, rec = run_json(capsys, "run", "counts", "--n", "4")
    text = json.dumps(rec)
    for key in ("riemann", "weyl", "ricci"):
        assert key in text
    assert all(c["pass"] for c in rec["checks"])


def test_text_output_shows_the_diagram(capsys):
    assert main(["run", "killing2"]) == 0
    out = capsys.readouterr().out
    assert "⑨" in out and "✓" in out and "✗" not in out


def test_run_all(capsys):
    assert main(["run", "--all", "--json"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert [r["scenario"]["name"] for r in records] == [
        "affine", "cosserat1d", "killing2", "cosserat2", "airy", "counts", "conformal", "maurer-cartan",
        "gauging", "elations-em", "poincare",
    ]
    assert all(r["verdict"] for r in records)


# ----- user operators -----

def test_user_killing2_cc_is_the_riemann_row(tmp_path, capsys):
    path = write_op(tmp_path / "killing2.json", killing(2))
    code, rec = run_json(capsys, "op", path, "--mode", "cc")
    assert code == 0
    cc = section(rec, "compatibility conditions")
    assert cc["entries"] in ([["d2^2", "-2*d1*d2", "d1^2"]], [["-d2^2", "2*d1*d2", "-d1^2"]])


def test_user_adjoint_of_gradient_is_minus_divergence(tmp_path, capsys):
    path = write_op(tmp_path / "d0.json", exterior_derivative(3, 0))
    code, rec = run_json(capsys, "op", path, "--mode", "adjoint")
    assert code == 0
    assert section(rec, "adjoint")["entries"] == [["-d1", "-d2", "-d3"]]


def test_user_parametrize_airy(tmp_path, capsys):
    d = write_op(tmp_path / "div.json", divergence_sym2())
    p = write_op(tmp_path / "airy.json", airy2())
    code, rec = run_json(capsys, "op", d, "--mode", "parametrize", "--with", p)
    assert code == 0 and rec["verdict"] is True


def test_user_solutions(tmp_path, capsys):
    path = write_op(tmp_path / "killing2.json", killing(2))
    code, rec = run_json(capsys, "op", path, "--mode", "solutions")
    assert code == 0
    assert len(section(rec, "polynomial solutions")) == 3
