import csv
import io
import json
from fractions import Fraction

import pytest

from tvdw import cli, verify
from tvdw.cli import main, parse_rational

F = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- parsing ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,value",
    [("5/16", F(5, 16)), ("3/2^4", F(3, 16)), ("0.3125", F(5, 16)), ("7", F(7)), (" 11 / 4^2 ", F(11, 16))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["abc", "1/0", "2^3", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(cli.UsageError):
        parse_rational(text)


# --- eval ---------------------------------------------------------------------


@pytest.mark.parametrize("argv,expected", [
    (["--r", "2", "--x", "5/16"], "5/8"),
    (["--r", "2", "--x", "1/2"], "1/2"),
    (["--r", "10", "--x", "0"], "0"),
    (["--x", "3/8"], "5/8"),
])
def test_eval_examples(capsys, argv, expected):
    code, out, _ = run(capsys, "eval", *argv)
    assert code == 0 and out.strip() == expected


def test_eval_non_radic(capsys):
    code, out, _ = run(capsys, "eval", "--x", "1/3", "--depth", "2")
    assert code == 0
    assert out.strip() == "1/2 +- 1/4"  # partial at depth 2 plus r/(2(r-1)r^2)


def test_eval_json_and_float(capsys):
    code, out, _ = run(capsys, "eval", "--x", "5/16", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "5/8" and doc["exact"] is True
    code, out, _ = run(capsys, "eval", "--x", "5/16", "--float")
    assert out.strip() == "0.625"
    code, out, _ = run(capsys, "eval", "--x", "1/3", "--format", "json")
    doc = json.loads(out)
    assert doc["exact"] is False and doc["depth"] == 40


@pytest.mark.parametrize("argv", [
    ["eval", "--x", "banana"],
    ["eval", "--x", "3/2"],
    ["eval"],
    ["eval", "--r", "3", "--x", "1/2"],
    ["eval", "--x", "1/2", "--threads", "0"],
    ["nonsense"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


# --- graph-data ---------------------------------------------------------------


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_graph_data_depth_two(capsys):
    code, out, _ = run(capsys, "graph-data", "--r", "2", "--depth", "2")
    rows = _csv(out)
    assert code == 0
    assert [(r["x"], r["y"]) for r in rows] == [
        ("0/1", "0/1"), ("1/4", "1/2"), ("1/2", "1/2"), ("3/4", "1/2"), ("1/1", "0/1"),
    ]


def test_graph_data_depth_one(capsys):
    _, out, _ = run(capsys, "graph-data", "--depth", "1")
    assert [(F(r["x"]), F(r["y"])) for r in _csv(out)] == [(0, 0), (F(1, 2), F(1, 2)), (1, 0)]


def test_graph_data_hump_overlay(capsys):
    _, out, _ = run(capsys, "graph-data", "--depth", "2", "--order", "1")
    humps = [r for r in _csv(out) if r["kind"] == "hump"]
    boxes = {(F(r["x"]), F(r["x_hi"]), F(r["y"]), F(r["y_hi"])) for r in humps}
    assert boxes == {(F(1, 4), F(1, 2), F(1, 2), F(2, 3)), (F(1, 2), F(3, 4), F(1, 2), F(2, 3))}


def test_graph_data_json(capsys):
    _, out, _ = run(capsys, "graph-data", "--depth", "1", "--order", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["points"] == [["0/1", "0/1"], ["1/2", "1/2"], ["1/1", "0/1"]]
    assert len(doc["humps"]) == 2


def test_graph_data_cap(capsys):
    assert run(capsys, "graph-data", "--depth", "30")[0] == 2


# --- census / levelset / nloc ------------------------------------------------


def test_census(capsys):
    code, out, _ = run(capsys, "census", "--order", "4", "--format", "csv")
    rows = _csv(out)
    assert code == 0 and [int(r["count_leading"]) for r in rows] == [0, 5, 5, 3, 1]
    _, out, _ = run(capsys, "census", "--r", "4", "--order", "1")
    doc = json.loads(out)
    assert doc["total_humps"] == 8 and doc["total_leading"] == 2


def test_levelset(capsys):
    code, out, _ = run(capsys, "levelset", "--y", "0", "--depth", "8")
    doc = json.loads(out)
    assert code == 0 and doc["components"] == 2 and doc["cells"] == [[0, 256], [255, 256]]
    _, out, _ = run(capsys, "levelset", "--y", "1", "--depth", "4")
    assert json.loads(out)["certified_empty"] is True
    _, out, _ = run(capsys, "levelset", "--y", "0", "--depth", "2", "--format", "csv")
    assert _csv(out) == [{"lo": "0/1", "hi": "1/4"}, {"lo": "3/4", "hi": "1/1"}]


def test_levelset_depth_cap(capsys):
    assert run(capsys, "levelset", "--y", "1/2", "--depth", "99")[0] == 2


def test_nloc(capsys):
    code, out, _ = run(capsys, "nloc", "--y", "51/100", "--M", "2")
    assert code == 0 and json.loads(out)["count"] == 2
    _, out, _ = run(capsys, "nloc", "--y", "1/5", "--order", "3")
    assert json.loads(out)["count"] == 1


# --- series / mc --------------------------------------------------------------


def test_series(capsys):
    code, out, _ = run(capsys, "series", "--M", "1")
    doc = json.loads(out)
    assert code == 0 and doc["partial"] == "15/16" and doc["closed_form"] == "3/2"
    _, out, _ = run(capsys, "series", "--M", "5", "--format", "csv")
    assert [int(r["M"]) for r in _csv(out)] == [0, 1, 2, 4, 5]


def test_mc(capsys):
    argv = ["mc", "--r", "2", "--M", "2", "--samples", "20000", "--seed", "3"]
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0 and doc["exact_truncated_mean"] == "33/32"
    assert run(capsys, *argv)[1] == out
    assert run(capsys, *argv, "--threads", "4")[1] == out
    assert run(capsys, "mc", "--M", "13")[0] == 2


# --- verify -------------------------------------------------------------------


def test_verify_counts(capsys):
    code, out, _ = run(capsys, "verify", "counts")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["failures"] == 0 and doc["checks"] > 0


def test_verify_series(capsys):
    code, out, _ = run(capsys, "verify", "series", "--r", "4", "--M", "1024")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]


def test_verify_failure_exit_1(capsys, monkeypatch):
    def broken(name, **kw):
        res = verify.SuiteResult(name)
        res.record(False, "forced")
        return [res]

    monkeypatch.setattr(verify, "run", broken)
    code, out, _ = run(capsys, "verify", "counts")
    assert code == 1 and json.loads(out)["passed"] is False


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "everything")[0] == 2


# --- output plumbing ----------------------------------------------------------


def test_out_path(tmp_path, capsys):
    path = tmp_path / "census.csv"
    code, out, _ = run(capsys, "census", "--order", "2", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    assert path.read_text().splitlines()[0] == "r,m,n,count_leading,count_humps_total"


def test_byte_identical_runs(capsys):
    argv = ["graph-data", "--r", "4", "--depth", "3", "--order", "1"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_float_rendering(capsys):
    _, out, _ = run(capsys, "series", "--M", "1", "--float")
    assert json.loads(out)["partial"] == 0.9375
