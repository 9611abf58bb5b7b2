import json

import pytest

from naraforge.main import main, parse_args


def test_seq_csv(output_dir, capsys):
    assert main(["seq", "28", "31", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "n,value\n28,18560\n29,27201\n30,39865\n31,58425\n"


def test_seq_negative_indices(output_dir, capsys):
    assert main(["seq", "-4", "-1", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["value"] for r in rows] == [-1, 0, 1, 0]


def test_seq_export(output_dir, tmp_path, capsys):
    assert main(["seq", "0", "5", "--format", "csv", "--export-dir", str(tmp_path / "x")]) == 0
    out = capsys.readouterr()
    assert "STATUS: OK" in out.err
    assert "STATUS" not in out.out
    assert (tmp_path / "x" / "sequence.csv").read_text(encoding="utf-8") == out.out


def test_search_with_nothing_to_find(output_dir, capsys):
    assert main(["search", "--base-min", "2", "--base-max", "2", "--n-max", "5", "--format", "csv"]) == 0
    assert capsys.readouterr().out == "n,value,base,digits,patterns\n"


def test_search_base_five(output_dir, capsys):
    assert main(["search", "--base-min", "5", "--base-max", "5", "--n-max", "35", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {"n": 31, "value": 58425, "base": 5, "digits": "3332200",
            "patterns": "(3^3)(2^2)(0^2)"} in rows


def test_bad_base_exits_with_usage_error(output_dir, capsys):
    assert main(["search", "--base-min", "1", "--base-max", "3"]) == 1
    assert capsys.readouterr().out == ""


def test_argparse_error_exits_with_one(output_dir):
    with pytest.raises(SystemExit) as info:
        parse_args(["seq", "1"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        parse_args(["search", "--format", "xml"])
    assert info.value.code == 1


def test_big_m_accepts_scientific_notation(output_dir):
    assert parse_args(["reduce", "--big-m", "2e51"]).big_m == 2 * 10 ** 51


def test_bound_rows(output_dir, capsys):
    assert main(["bound", "--rho", "2", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["rho"] == 2
    assert row["log_h_check"] is True


def test_bound_table_includes_audit(output_dir, capsys):
    assert main(["bound", "--rho", "3"]) == 0
    out = capsys.readouterr().out
    assert "Linear-form" in out
    assert "rho=3" in out
    assert "majorant" in out


def test_reduce_step_one(output_dir, capsys):
    assert main(["reduce", "--rho", "2", "--step", "1", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["step"] == 1
    assert row["variable"] == "ell"
    assert row["certified"] is True


def test_bound_base_two_magnitude(output_dir, capsys):
    assert main(["bound", "--rho", "2", "--format", "json"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert float(row["lemma3_bound"]) == pytest.approx(4.21e47, rel=5e-3)
    assert float(row["capped_bound"]) == pytest.approx(4.21e47, rel=5e-3)


@pytest.mark.slow
def test_reduce_all_steps_base_two(output_dir, capsys):
    assert main(["reduce", "--rho", "2", "--step", "all", "--format", "json", "--workers", "4"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["step"] for r in rows] == [1, 2, 3]
    assert rows[0]["convergent_index"] == 115
    for row, published in zip(rows, (184, 192, 201)):
        assert abs(row["bound"] - published) <= 5
        assert row["certified"] is True


def test_verify_without_reduction(output_dir, capsys):
    assert main(["verify", "--no-reduction", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == "value,n,representations"
    assert len(lines) == 22
    assert "58425,31,3332200_5;332223_7" in lines
    assert (output_dir / "run.log").exists()

    assert main(["verify", "--no-reduction", "--format", "csv", "--workers", "2"]) == 0
    assert capsys.readouterr().out == out


def test_verify_mismatch_exit_code(output_dir, capsys):
    assert main(["verify", "--no-reduction", "--base-max", "4", "--n-max", "40"]) == 2
    assert "Verification mismatch" in capsys.readouterr().err
