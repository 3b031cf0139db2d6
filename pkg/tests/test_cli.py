import json
import os
import shutil
import subprocess
import sys

import pytest

from mhslin import cli
from mhslin import serialize as ser
from mhslin.exactlin import shift_matrix
from mhslin.fixtures import corpus, expected_status, write_corpus
from mhslin.report import InternalInvariantError

CORPUS = os.path.join(os.path.dirname(__file__), os.pardir, "corpus")


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_mf_pure_jordan_three(tmp_path, capsys):
    p = write(tmp_path, "n.json", {"dim": 3, "N": ser.dump_matrix(shift_matrix(3))})
    code, out, _ = run(["mf", "pure", "--in", p], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass"
    assert rep["payload"]["jordan_type"] == [3]


def test_text_format(tmp_path, capsys):
    p = write(tmp_path, "n.json", {"dim": 2, "N": [[0, 1], [0, 0]]})
    code, out, _ = run(["mf", "pure", "--in", p, "--format", "text"], capsys)
    assert code == 0 and out.startswith("status: pass")


def test_relative_non_example_is_a_verdict(tmp_path, capsys):
    job = corpus()["mf_relative_nonexist2d.json"]
    p = write(tmp_path, "j.json", job)
    code, out, _ = run(["mf", "relative", "--in", p], capsys)
    assert code == 0
    assert json.loads(out)["status"] == "not_exists"


def test_malformed_input_exit_one(tmp_path, capsys):
    p = write(tmp_path, "bad.json", '{"dim": 2, "N": [[0, 1], [0')
    code, _, err = run(["mf", "pure", "--in", p], capsys)
    assert code == 1 and "line 1" in err
    p = write(tmp_path, "float.json", {"dim": 1, "N": [[0.5]]})
    code, _, err = run(["mf", "pure", "--in", p], capsys)
    assert code == 1 and "N[0][0]" in err


def test_missing_file_exit_one(tmp_path, capsys):
    code, _, _ = run(["koszul", "--in", str(tmp_path / "nope.json")], capsys)
    assert code == 1


def test_not_nilpotent_exit_one(tmp_path, capsys):
    p = write(tmp_path, "i.json", {"dim": 1, "N": [[1]]})
    code, _, _ = run(["mf", "pure", "--in", p], capsys)
    assert code == 1


def test_internal_invariant_exit_two(tmp_path, capsys, monkeypatch):
    def boom(inp, opts):
        raise InternalInvariantError("forced")

    monkeypatch.setitem(cli.COMMANDS, ("koszul",), boom)
    p = write(tmp_path, "k.json", {"family": {"dim": 1, "operators": [[[0]]]}})
    code, _, err = run(["koszul", "--in", p], capsys)
    assert code == 2 and "forced" in err


def test_out_file(tmp_path, capsys):
    p = write(tmp_path, "n.json", {"dim": 2, "N": [[0, 1], [0, 0]]})
    out = tmp_path / "r.json"
    code, stdout, _ = run(["mf", "pure", "--in", p, "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["status"] == "pass"


def test_batch_empty_dir(tmp_path, capsys):
    code, out, _ = run(["batch", str(tmp_path)], capsys)
    assert code == 0
    assert json.loads(out)["payload"]["files"] == []


def test_batch_missing_dir(tmp_path, capsys):
    code, _, _ = run(["batch", str(tmp_path / "missing")], capsys)
    assert code == 1


@pytest.fixture(scope="module")
def corpus_run():
    out = subprocess.run([sys.executable, "-m", "mhslin", "batch", CORPUS], capture_output=True, text=True)
    return out.returncode, out.stdout


def test_batch_corpus_meets_expectations(corpus_run):
    code, out = corpus_run
    rep = json.loads(out)
    assert code == 0
    assert rep["status"] == "pass", [f for f in rep["findings"] if not f["passed"]][:3]
    assert len(rep["payload"]["files"]) == len(corpus())


def test_batch_with_corrupted_file(tmp_path, capsys):
    d = tmp_path / "c"
    shutil.copytree(CORPUS, d)
    (d / "zz_broken.json").write_text("{ not json")
    code, out, _ = run(["batch", str(d), "--suite", "filtrations"], capsys)
    rep = json.loads(out)
    broken = [f for f in rep["payload"]["files"] if f["file"] == "zz_broken.json"]
    assert broken and broken[0]["exit"] == 1 and broken[0]["status"] == "error"
    assert code == 0


def test_batch_suite_filter(capsys):
    code, out, _ = run(["batch", CORPUS, "--suite", "filtrations"], capsys)
    files = json.loads(out)["payload"]["files"]
    assert files and all(f["file"].startswith(("mf_", "star_", "shriek_", "wj_", "check_distributive_"))
                         for f in files)


def test_corpus_on_disk_matches_generator(tmp_path):
    names = write_corpus(str(tmp_path))
    assert sorted(names) == sorted(f for f in os.listdir(CORPUS) if f.endswith(".json"))
    for name in names:
        assert (tmp_path / name).read_text() == open(os.path.join(CORPUS, name)).read(), name
        assert json.loads((tmp_path / name).read_text())["expect"] == expected_status(name)


def test_deterministic_reports_under_seed(corpus_run, capsys):
    code, out, _ = run(["batch", CORPUS], capsys)
    assert (code, out) == corpus_run


def test_module_entry_point(tmp_path):
    p = write(tmp_path, "n.json", {"dim": 2, "N": [[0, 1], [0, 0]]})
    r = subprocess.run([sys.executable, "-m", "mhslin", "mf", "pure", "--in", p], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["status"] == "pass"


@pytest.mark.parametrize("name", ["check_orbit_elliptic.json", "check_imhs_elliptic2.json"])
def test_seed_flag_changes_nothing_in_verdict(name, capsys):
    p = os.path.join(CORPUS, name)
    cmd = json.load(open(p))["command"]
    a = run(cmd + ["--in", p, "--seed", "1"], capsys)
    b = run(cmd + ["--in", p, "--seed", "1"], capsys)
    c = run(cmd + ["--in", p, "--seed", "7"], capsys)
    assert a == b
    assert json.loads(a[1])["status"] == json.loads(c[1])["status"] == "pass"
