"""Tests for command-line interface module."""

import json
import math

import pytest

from bsgeom.cli import main, parse_args


@pytest.fixture
def dilation_file(tmp_path):
    """Write the conjugate of x -> 2x by a map with one bump of slope 2 on [0, 1]."""
    path = tmp_path / "f.json"
    path.write_text(
        json.dumps({"breakpoints": [["1", "2"], ["2", "3"]], "tails": {"lo": "2", "hi": "2"}})
    )
    return path


def _run(capsys, *args):
    status = main(list(args))
    return status, capsys.readouterr().out


def test_parse_args_common_switches():
    """Test that shared switches are accepted before and after the subcommand."""
    before = parse_args(["--n", "3", "word", "--word", "ab"])
    after = parse_args(["word", "--word", "ab", "--n", "3"])
    assert before.n == 3
    assert after.n == 3
    assert after.command == "word"
    assert parse_args(["census"]).n is None


def test_word_json(capsys):
    """Test the JSON envelope of the word command."""
    status, out = _run(capsys, "word", "--word", "bAbaa")
    assert status == 0
    document = json.loads(out)
    assert document["command"] == "word"
    assert len(document["configHash"]) == 64
    assert document["config"]["n"] == 2
    assert document["result"]["map"] == "x -> 2^2 x + 6"
    assert document["result"]["certificate"] == "exact"


def test_output_is_deterministic(capsys):
    """Test that two runs with the same configuration print the same bytes."""
    _, first = _run(capsys, "growth", "--radius", "4", "--seed", "5")
    _, second = _run(capsys, "growth", "--radius", "4", "--seed", "5")
    assert first == second
    assert json.loads(first)["result"]["counts"][:2] == [1, 5]


def test_invalid_config(capsys):
    """Test that an invalid base gives an error document and exit status 2."""
    status, out = _run(capsys, "--n", "1", "word", "--word", "a")
    assert status == 2
    document = json.loads(out)
    assert document["error"] == "ValidationError"
    assert document["configHash"] is None


def test_usage_error(capsys):
    """Test that an unknown command is reported as a usage error."""
    status, out = _run(capsys, "frobnicate")
    assert status == 2
    assert json.loads(out)["error"] == "UsageError"


def test_conjugate_from_file(capsys, dilation_file):
    """Test conjugating a PL map read from a plhomeo.v1 file."""
    status, out = _run(capsys, "conjugate", "--input", str(dilation_file))
    assert status == 0
    result = json.loads(out)["result"]
    assert result["case"] == "dilation"
    assert result["s"] == 2.0
    assert len(result["rows"]) == 21


def test_missing_input_file(capsys, tmp_path):
    """Test that a missing input file gives exit status 2."""
    status, out = _run(capsys, "conjugate", "--input", str(tmp_path / "absent.json"))
    assert status == 2
    assert json.loads(out)["error"] == "FileNotFoundError"


def test_classify_csv(capsys):
    """Test the reflection table of case 3ii as CSV."""
    status, out = _run(capsys, "classify", "--case", "3ii", "--m", "5", "--format", "csv")
    assert status == 0
    lines = out.splitlines()
    assert lines[0].startswith("# bsgeom classify configHash=")
    assert lines[1] == "i,image"
    assert lines[2] == "-5,-23"
    assert "0,2" in lines


def test_commensurable_table(capsys):
    """Test the key/value table for a result without rows."""
    status, out = _run(capsys, "commensurable", "--m", "8", "--other", "2", "--format", "table")
    assert status == 0
    assert out.startswith("bsgeom commensurable  configHash=")
    assert "commensurable" in out
    assert "True" in out


def test_svg_unavailable(capsys):
    """Test that svg output is refused for commands without a drawing."""
    status, out = _run(capsys, "word", "--word", "ab", "--format", "svg")
    assert status == 2
    assert json.loads(out)["error"] == "ValueError"


def test_census(capsys):
    """Test the standard block census at radius 3."""
    status, out = _run(capsys, "census", "--radius", "3")
    assert status == 0
    result = json.loads(out)["result"]
    assert result["counts"] == [1, 3, 7, 7]
    assert result["rows"][-1] == {"radius": 3, "count": 7}


def test_classify_rejects_bad_parameter(capsys):
    """Test that an even m in case 3ii is an error document."""
    status, out = _run(capsys, "classify", "--case", "3ii", "--m", "4")
    assert status == 2
    assert json.loads(out)["error"] == "PresentationConstraintError"


def test_malformed_input_file(capsys, tmp_path):
    """Test that a document missing required fields gives a ParseError document."""
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"tails": {"lo": "1"}}))
    status, out = _run(capsys, "conjugate", "--input", str(path))
    assert status == 2
    document = json.loads(out)
    assert document["error"] == "ParseError"
    assert len(document["configHash"]) == 64


def test_dist_common_plane(capsys):
    """Test dist on two points of one plane leaf: the bounds coincide."""
    status, out = _run(capsys, "dist", "--n", "2", "--pt1", "0,1", "--pt2", "3,1")
    assert status == 0
    result = json.loads(out)["result"]
    assert {"lo", "hi", "commonPlane"} <= set(result)
    assert result["commonPlane"] is not None
    assert result["certificate"] == "exact"
    assert result["lo"] == pytest.approx(2 * math.asinh(1.5), abs=1e-9)
    assert result["hi"] == pytest.approx(result["lo"], abs=1e-9)


def test_dist_across_leaves(capsys):
    """Test dist on points of diverging plane leaves: a bracket is returned."""
    status, out = _run(capsys, "dist", "--n", "2", "--pt1", "0,4,0", "--pt2", "3,4,1")
    assert status == 0
    result = json.loads(out)["result"]
    assert result["commonPlane"] is None
    assert result["certificate"] == "bracket"
    assert result["lo"] <= result["hi"]


def test_dist_requires_both_points(capsys):
    """Test that the old single-letter switches are rejected."""
    status, out = _run(capsys, "dist", "--p", "0,1", "--q", "3,1")
    assert status == 2
    assert json.loads(out)["error"] == "UsageError"
