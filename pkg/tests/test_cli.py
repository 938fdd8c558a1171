import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

import estate_shares.multi_mistress as multi_mistress
from estate_shares import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def estate_file(tmp_path):
    path = tmp_path / "estate.json"
    path.write_text(
        json.dumps(
            {
                "legitimate": 1,
                "mistresses": [{"children": 1, "fraction": "1/2"}, {"children": 1, "fraction": "1/3"}],
            }
        )
    )
    return str(path)


def test_share_flags_exact(capsys):
    code, out, _ = run(capsys, "share", "--legit", "2", "--mistress", "3:1/3", "--method", "backward", "--exact")
    assert code == 0
    assert out.startswith("legitimate: 97/270\n")
    assert "total: 1\n" in out


def test_share_json_document(capsys, estate_file):
    code, out, _ = run(capsys, "share", "--spec", estate_file, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["legitimate_share"] == "23/36"
    assert doc["illegitimate_shares"] == ["2/9", "5/36"]
    assert doc["total"] == "1"
    assert doc["method"] == "recursive"
    assert doc["per_class_totals"] == {"legitimate": "23/36", "illegitimate": ["2/9", "5/36"]}


def test_json_round_trip_is_byte_identical(capsys, estate_file):
    _, out, _ = run(capsys, "share", "--spec", estate_file, "--json")
    assert cli.dump_json(json.loads(out)) == out
    _, out, _ = run(capsys, "whatif", "add-illegitimate", "2", "--spec", estate_file, "--json")
    assert cli.dump_json(json.loads(out)) == out


def test_flags_override_document(capsys, estate_file):
    _, out, _ = run(capsys, "share", "--spec", estate_file, "--mistress", "1:1/3", "--json")
    assert json.loads(out)["legitimate_share"] == "5/6"
    _, out, _ = run(capsys, "share", "--spec", estate_file, "--legit", "3", "--mistress", "0:1/3", "--json")
    assert json.loads(out)["legitimate_share"] == "1/3"


def test_naive_warning(capsys):
    code, out, _ = run(capsys, "share", "--legit", "3", "--method", "naive")
    assert code == 0
    assert out.startswith("legitimate: 1/3 (WARNING: naive model)\n")


def test_decimal_mode(capsys):
    _, out, _ = run(capsys, "share", "--legit", "2", "--mistress", "3:1/3", "--decimal", "6")
    assert out.startswith("legitimate: 0.359259\n")


@pytest.mark.parametrize(
    "argv, field",
    [
        (["--legit", "0", "--mistress", "2:1/3"], "legitimate"),
        (["--legit", "2", "--mistress", "1:4/3"], "mistresses[0].fraction"),
        (["--legit", "2", "--mistress", "1:1/0"], "--mistress[0].fraction"),
        (["--legit", "2", "--mistress=-1:1/3"], "mistresses[0].children"),
        (["--legit", "2", "--mistress", "x:1/3"], "--mistress[0]"),
        (["--legit", "2", "--mistress", "1-1/3"], "--mistress[0]"),
        ([], "legitimate"),
    ],
)
def test_input_errors_exit_2(capsys, argv, field):
    code, _, err = run(capsys, "share", *argv)
    assert code == 2
    assert field in err


def test_bad_document(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"legitimate": 2, "mistresses": [{"children": 1, "fraction": "2/3"}, {"children": 1}]}')
    code, _, err = run(capsys, "share", "--spec", str(path))
    assert code == 2
    assert "mistresses[1].fraction" in err
    path.write_text("{not json")
    code, _, err = run(capsys, "share", "--spec", str(path))
    assert code == 2
    code, _, _ = run(capsys, "share", "--spec", str(tmp_path / "missing.json"))
    assert code == 2


def test_precondition_errors_exit_3(capsys):
    code, _, _ = run(capsys, "share", "--legit", "1", "--mistress", "1:1/2", "--mistress", "1:1/3", "--method", "series")
    assert code == 3
    code, _, err = run(capsys, "share", "--legit", "1", "--mistress", "17:1/3", "--method", "oracle")
    assert code == 3
    assert "oracle" in err


def test_whatif_add_illegitimate(capsys):
    code, out, _ = run(capsys, "whatif", "add-illegitimate", "--legit", "1", "--mistress", "1:1/3")
    assert code == 0
    assert "path: incremental" in out
    assert "legitimate: 5/6 -> 19/27" in out


def test_whatif_legitimize(capsys):
    code, out, _ = run(capsys, "whatif", "legitimize", "--legit", "1", "--mistress", "1:1/3", "--json")
    assert code == 0
    doc = json.loads(out)
    assert (doc["before"]["legitimate_share"], doc["after"]["legitimate_share"]) == ("5/6", "1/2")
    assert doc["after"]["illegitimate_shares"] == [None]
    assert doc["deltas"]["legitimate_share"] == "-1/3"
    assert doc["path"] == "incremental"


def test_whatif_delegitimize_last_child(capsys):
    code, _, _ = run(capsys, "whatif", "delegitimize", "--legit", "1", "--mistress", "1:1/3")
    assert code == 3


@pytest.mark.parametrize("edit", ["add-illegitimate", "legitimize", "delegitimize"])
@pytest.mark.parametrize("x", ["0", "1/3", "1"])
def test_whatif_paths_agree_with_recomputation(capsys, edit, x):
    code, out, _ = run(capsys, "whatif", edit, "--legit", "2", "--mistress", f"2:{x}", "--json")
    assert code == 0
    doc = json.loads(out)
    f = cli.apply_edit(
        cli.validate({"legitimate": 2, "mistresses": [{"children": 2, "fraction": x}]}), edit, 1
    )
    expected = cli.breakdown_json(multi_mistress.breakdown(f), cli.Method.RECURSIVE)
    assert doc["after"] == expected
    assert doc["path"] == ("recompute" if edit == "legitimize" and x == "0" else "incremental")


def test_whatif_multi_mistress_recomputes(capsys, estate_file):
    code, out, _ = run(capsys, "whatif", "legitimize", "2", "--spec", estate_file, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["path"] == "recompute"
    assert doc["before"]["legitimate_share"] == "23/36"
    # promoting mistress 2's child leaves family (2; (1, 1/2), (0, 1/3))
    assert doc["after"]["legitimate_share"] == "5/12"
    assert doc["after"]["illegitimate_shares"] == ["1/6", None]


def test_whatif_missing_mistress(capsys):
    code, _, _ = run(capsys, "whatif", "add-illegitimate", "3", "--legit", "1", "--mistress", "1:1/3")
    assert code == 3
    code, _, _ = run(capsys, "whatif", "legitimize", "--legit", "1", "--mistress", "0:1/3")
    assert code == 3


def test_selfcheck_pass(capsys):
    code, out, _ = run(capsys, "selfcheck", "--max-l", "4", "--max-n", "5")
    assert code == 0
    assert out.startswith("PASS:")
    assert "conservation exact" in out


def test_selfcheck_guard(capsys):
    code, _, err = run(capsys, "selfcheck", "--max-n", "40")
    assert code == 2
    assert "oracle guard" in err


def test_selfcheck_reports_divergence(capsys, monkeypatch):
    real = multi_mistress.legitimate_share

    def broken(f, method, count=None):
        value = real(f, method, count)
        if method is cli.Method.CLOSED_FORM and f.legitimate == 2 and f.counts == (3,):
            value += Fraction(1, 10**9)
        return value

    monkeypatch.setattr(multi_mistress, "legitimate_share", broken)
    code, out, _ = run(capsys, "selfcheck", "--max-l", "3", "--max-n", "4")
    assert code == 1
    assert out.startswith("FAIL: methods disagree at l=2 [(3, 0)]")
    assert "closed-form=" in out


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--n-max", "64")
    assert code == 0
    assert out.splitlines()[0] == "n,method,adds,muls,divs"
    rows = {(int(r["n"]), r["method"]): r for r in csv.DictReader(io.StringIO(out))}
    ops = lambda r: int(r["adds"]) + int(r["muls"]) + int(r["divs"])  # noqa: E731
    step = lambda n: (rows[(n, "add_illegitimate")]["adds"], rows[(n, "add_illegitimate")]["muls"], rows[(n, "add_illegitimate")]["divs"])  # noqa: E731
    assert step(8) == step(64)
    base = ops(rows[(0, "backward")])
    assert ops(rows[(64, "backward")]) - base == 8 * (ops(rows[(8, "backward")]) - base)


def test_bench_limit(capsys):
    code, _, _ = run(capsys, "bench", "--n-max", "10001")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "estate_shares", "share", "--legit", "1", "--mistress", "2:1/3", "--json"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["legitimate_share"] == "19/27"
