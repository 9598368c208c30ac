import io
import json
import subprocess
import sys
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epipolar.cli import main
from epipolar.errors import InputParseError
from epipolar.io import InputDocument, parse_input, serialize_input
from epipolar.report import REPORT_SCHEMA

import worked_examples

coord = st.fractions(min_value=-100, max_value=100, max_denominator=50)
pair = st.tuples(st.tuples(coord, coord), st.tuples(coord, coord))


def test_csv_single_row():
    doc = parse_input(io.StringIO("3,0,2,0\n"), "csv")
    assert doc.correspondences == (((3, 0), (2, 0)),)
    assert doc.to_correspondences().pairs[0] == ((3, 0, 1), (2, 0, 1))


def test_json_fraction_string_is_exact():
    doc = parse_input(io.StringIO('{"correspondences": [{"x": [3, 0], "y": ["-5/12", 0.25]}]}'), "json")
    assert doc.correspondences[0][1] == (Fraction(-5, 12), Fraction(1, 4))


def test_decimal_literal_is_exact_in_csv():
    doc = parse_input(io.StringIO("0.1,0,0,0\n"), "csv")
    assert doc.correspondences[0][0][0] == Fraction(1, 10)


def test_bad_token_names_line():
    with pytest.raises(InputParseError, match="line 3"):
        parse_input(io.StringIO("x1,x2,y1,y2\n1,2,3,4\n1,two,3,4\n"), "csv")


def test_wrong_field_count_names_line():
    with pytest.raises(InputParseError, match="line 1"):
        parse_input(io.StringIO("1,2,3\n"), "csv")


def test_empty_input_is_an_error():
    with pytest.raises(InputParseError):
        parse_input(io.StringIO("# nothing\n"), "csv")


@pytest.mark.parametrize("name,example", [
    ("rank_one_and_three", worked_examples.RANK_ONE_AND_THREE),
    ("cube_with_rank_two", worked_examples.CUBE_WITH_RANK_TWO),
    ("five_points_no_real_e", worked_examples.FIVE_POINTS_NO_REAL_E),
])
def test_fixture_files_match_worked_examples(fixture_dir, name, example):
    doc = parse_input(fixture_dir / f"{name}.csv")
    assert list(doc.correspondences) == worked_examples.pairs(example)
    assert doc.name == name


@given(st.lists(pair, min_size=1, max_size=8), st.sampled_from(["json", "csv"]))
def test_serialize_parse_roundtrip(pairs, fmt):
    doc = InputDocument(tuple(pairs), name="t" if fmt == "json" else None)
    back = parse_input(io.StringIO(serialize_input(doc, fmt)), fmt)
    assert back.correspondences == doc.correspondences
    if fmt == "json":
        assert back == doc


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


@pytest.mark.parametrize("name,command,code", [
    ("rank_one_and_three", "decide-f", 1),
    ("cube_with_rank_two", "decide-f", 0),
    ("five_points_no_real_e", "decide-e", 2),
])
def test_exit_codes_agree_with_verdict(capsys, fixture_dir, name, command, code):
    got, out = run_cli(capsys, command, fixture_dir / f"{name}.csv")
    assert got == code
    report = json.loads(out.out)
    jsonschema.validate(report, REPORT_SCHEMA)
    section = report["fundamental" if command == "decide-f" else "essential"]
    assert {"EXISTS": 0, "NOT_EXISTS": 1, "UNDECIDED": 2}[section["verdict"]] == code


def test_text_output_names_branch(capsys, fixture_dir):
    code, out = run_cli(capsys, "decide", fixture_dir / "rank_one_and_three.csv", "--format", "text")
    assert code == 1
    assert "CUBE_NO_MINOR" in out.out and "(b.u)^3" in out.out


def test_input_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,x,4\n")
    code, out = run_cli(capsys, "decide", bad)
    assert code == 64 and "line 1" in out.err


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _ = run_cli(capsys, "decide", tmp_path / "absent.csv")
    assert code == 64


def test_verify_accepts_shift_matrix(capsys, fixture_dir):
    code, out = run_cli(capsys, "verify", fixture_dir / "cube_with_rank_two.csv",
                        "--matrix", "0 1 0; 0 0 1; 0 0 0")
    result = json.loads(out.out)
    assert code == 0 and result["rank"] == 2 and result["satisfies_constraints"]


def test_verify_rejects_identity(capsys, fixture_dir):
    code, out = run_cli(capsys, "verify", fixture_dir / "cube_with_rank_two.csv",
                        "--matrix", "1,0,0;0,1,0;0,0,1")
    assert code == 1 and json.loads(out.out)["rank"] == 3


def test_witness_command(capsys, fixture_dir):
    code, out = run_cli(capsys, "witness", fixture_dir / "cube_with_rank_two.csv", "--format", "text")
    assert code == 0 and out.out.splitlines()[0] == "0 1 0"


def test_classify_command(capsys, fixture_dir):
    code, out = run_cli(capsys, "classify", fixture_dir / "rank_one_and_three.csv")
    data = json.loads(out.out)
    assert code == 0 and data["rank_one_kernel"]["in_rank_one"] is False


def test_batch_mode_reports_every_file(capsys, fixture_dir):
    code, out = run_cli(capsys, "decide", fixture_dir, "--which", "fundamental")
    data = json.loads(out.out)
    assert set(data["exit_codes"]) == {p.name for p in fixture_dir.iterdir() if p.suffix in (".csv", ".json")}
    assert code == max(data["exit_codes"].values())


def test_module_entry_point(fixture_dir):
    proc = subprocess.run([sys.executable, "-m", "epipolar", "decide-f",
                           str(fixture_dir / "rank_one_and_three.csv")], capture_output=True)
    assert proc.returncode == 1
