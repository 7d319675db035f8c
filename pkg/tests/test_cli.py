import csv
import io
import json
import subprocess
import sys

import pytest

from minovl import cli, formulas
from minovl.fillings import Filling


@pytest.fixture
def run(capsys):
    def go(*argv):
        code = cli.run(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return go


def parse_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0][len("# config: "):])
    return config, list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


@pytest.fixture
def pattern_file(tmp_path):
    def write(P, name="p.txt"):
        path = tmp_path / name
        path.write_text(P.to_text())
        return str(path)

    return write


def test_count_csv(run):
    code, out, _ = run("count", "--class", "F", "--k", "2", "--n", "3", "--enumerate")
    assert code == 0
    config, rows = parse_csv(out)
    assert config["command"] == "count" and config["k"] == 2
    assert rows == [{"family": "F", "k": "2", "n": "3", "count": "90", "enumerated": "90"}]


def test_json_layout(run):
    code, out, _ = run("count", "--class", "ST", "--k", "2", "--n", "4", "--format", "json")
    body = json.loads(out)
    assert code == 0
    assert list(body) == ["config", "rows"]
    assert list(body["rows"][0]) == ["family", "k", "n", "count"]
    assert body["rows"][0]["count"] == 14


def test_enumerate(run):
    code, out, _ = run("enumerate", "--class", "ST", "--k", "2", "--n", "2")
    _, rows = parse_csv(out)
    assert [r["filling"] for r in rows] == ["1.2|3.4", "1.3|2.4"]
    code2, out2, _ = run("enumerate", "--class", "ST", "--k", "2", "--n", "2", "--oracle")
    assert parse_csv(out2)[1] == rows and code == code2 == 0


def test_classify_pattern(run, pattern_file):
    path = pattern_file(Filling.from_sigma((1, 3, 2, 4), 1))
    code, out, _ = run("classify", "--pattern", path, "--oracle")
    _, rows = parse_csv(out)
    assert code == 0
    assert rows[0]["verdict"] == rows[0]["oracle"] == "overlapping"
    assert rows[0]["self_overlaps"] == "2"


def test_classify_width(run):
    code, out, _ = run("classify", "--k", "1", "--n", "4", "--oracle")
    _, rows = parse_csv(out)
    assert code == 0 and len(rows) == 24
    assert sum(r["verdict"] == "minimal" for r in rows) == 12


def test_proportion(run):
    code, out, _ = run("proportion", "--n", "6", "--workers", "2")
    assert code == 0 and parse_csv(out)[1][0]["proportion"] == "7/18"


def test_bounds(run):
    code, out, _ = run("bounds", "--family", "L", "--k", "1")
    row = parse_csv(out)[1][0]
    assert code == 0 and row["decimal"].startswith("0.28171817")
    code, out, _ = run("bounds", "--family", "CAT")
    assert parse_csv(out)[1][0]["decimal"].startswith("1.806133050")


def test_recursion(run):
    code, out, _ = run("recursion", "--k", "1", "--n", "7")
    row = parse_csv(out)[1][0]
    assert code == 0 and row["recursion"] == row["bruteforce"] == "233/630"


def test_verify_main(run, pattern_file):
    path = pattern_file(Filling.from_sigma((1, 2, 3, 4), 2))
    code, out, _ = run("verify", "--theorem", "main", "--pattern", path, "--order", "4")
    body = json.loads(out)
    assert code == 0 and body["verdict"] == "verified"
    assert list(body)[0] == "config"


def test_verify_dr_mismatch_exit(run, pattern_file):
    path = pattern_file(Filling.from_sigma((1, 3, 2, 4), 1))
    code, _, err = run("verify", "--theorem", "DR", "--pattern", path, "--order", "5")
    # 1324 is not minimal, so the hypothesis check refuses it
    assert code == 2 and "not minimal" in err


def test_verify_dr_samples(run, pattern_file):
    path = pattern_file(Filling.from_sigma((1, 3, 2), 1))
    code, out, _ = run("verify", "--theorem", "DR", "--pattern", path, "--order", "5",
                       "--sample", "1/2,3,1/5", "--sample", "2,1,1")
    body = json.loads(out)
    assert code == 0 and body["samples"] == [["1/2", "3", "1/5"], ["2", "1", "1"]]


def test_mc_seed_env(run, monkeypatch):
    monkeypatch.setenv("MINOVL_SEED", "77")
    _, out, _ = run("mc", "--target", "a", "--n", "8", "--samples", "2000")
    body = json.loads(out)
    assert body["seed"] == 77 and body["config"]["seed"] == 77
    _, out2, _ = run("mc", "--target", "a", "--n", "8", "--samples", "2000", "--seed", "77")
    assert json.loads(out2)["hits"] == body["hits"]


def test_mc_prefix_default_width(run):
    _, out, _ = run("mc", "--target", "prefix", "--m", "7", "--samples", "1000", "--seed", "1")
    assert json.loads(out)["target"] == "prefix(20,m=7)"


def test_wilf(run, pattern_file):
    p = pattern_file(Filling.from_sigma((1, 3, 2), 1), "p.txt")
    q = pattern_file(Filling.from_sigma((2, 3, 1), 1), "q.txt")
    code, out, _ = run("wilf", "--pattern", p, "--pattern2", q, "--max-n", "6")
    assert code == 0 and json.loads(out)["verdict"] == "equivalent-so-far"


def test_overlap_commands(run):
    code, out, _ = run("overlap-syt", "--n", "3", "4")
    rows = parse_csv(out)[1]
    assert code == 0 and [r["agree"] for r in rows] == ["true", "true"]
    code, out, _ = run("overlap-euler", "--n", "3", "4")
    assert code == 0 and parse_csv(out)[1][1]["enumerated"] == "269"


def test_mismatch_exit(run, monkeypatch):
    monkeypatch.setattr(formulas, "overlap4_formula", lambda n: 0)
    code, out, err = run("overlap-euler", "--n", "3")
    assert code == 4 and "verification failed" in err
    assert parse_csv(out)[1][0]["agree"] == "false"


def test_budget_exit(run):
    code, _, err = run("count", "--k", "3", "--n", "5", "--enumerate")
    assert code == 3 and "budget" in err


def test_usage_exits(run):
    assert run("count", "--class", "Q", "--n", "3")[0] == 2
    assert run("verify", "--theorem", "main", "--pattern", "/nonexistent")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.run(["count"])
    assert exc.value.code == 2


def test_output_file(run, tmp_path):
    target = tmp_path / "out.csv"
    code, out, _ = run("count", "--n", "3", "--output", str(target))
    assert code == 0 and out == ""
    assert parse_csv(target.read_text())[1][0]["count"] == "6"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "minovl", "count", "--n", "4"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[-1] == "F,1,4,24"
