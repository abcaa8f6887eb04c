import json
import subprocess
import sys

import pytest

from hallorbits.cli import main

SMALL = [
    {"name": "GL23", "kind": "mat", "field": "GF(3)", "dim": 2,
     "gens": [[1, 1, 0, 1], [0, 2, 1, 0], [2, 0, 0, 1]]},
    {"name": "S4", "kind": "perm", "degree": 4, "gens": ["(0 1 2 3)", "(0 1)"]},
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def small_corpus(tmp_path):
    p = tmp_path / "corpus.json"
    p.write_text(json.dumps(SMALL))
    return str(p)


def test_verify_orbits_gl23(capsys):
    code, out, _ = run(capsys, "verify", "orbits", "--group", "GL:2:3", "--pi", "2", "--mode", "lenient")
    data = json.loads(out)
    assert code == 0 and data["qualifying"] == 3 and data["threshold_met"]


def test_verify_orbits_g_unit_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "orbits", "--entry", "GL23", "--pi", "2", "--mode", "lenient", "--unit", "G")
    assert code == 1 and json.loads(out)["qualifying"] == 1


def test_verify_inequality_csv(capsys):
    code, out, _ = run(capsys, "verify", "inequality", "--entry", "S4", "--pi", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1] == "S4,3,main-inequality,HOLDS,true,1,1,,,"


def test_verify_pair_and_lemma(capsys):
    code, out, _ = run(capsys, "verify", "pair", "--entry", "GL23", "--pi", "2", "--mode", "lenient")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run(capsys, "verify", "lemma", "--entry", "GL23")
    assert code == 0 and json.loads(out)["details"]["centralizer_order"] == 6


def test_scan_fd(capsys):
    code, out, _ = run(capsys, "scan", "fd", "--p", "3", "--d", "1:4")
    rows = json.loads(out)
    assert code == 0 and [r["sign"] for r in rows] == ["non-positive", "non-positive", "positive", "positive"]
    code, out, _ = run(capsys, "scan", "fd", "--p", "2", "--d", "4:5", "--format", "csv")
    assert out.splitlines()[0] == "d,value,sign"


def test_group_info(capsys):
    code, out, _ = run(capsys, "group", "info", "--entry", "S4")
    info = json.loads(out)
    assert code == 0 and info["order"] == 24 and info["character_degrees"] == [1, 1, 2, 3, 3]
    code, out, _ = run(capsys, "group", "info", "--group", "Gamma:2:3")
    assert json.loads(out)["order"] == 21


def test_corpus_list(capsys, small_corpus):
    code, out, _ = run(capsys, "corpus", "list", "--corpus", small_corpus)
    assert code == 0 and [e["name"] for e in json.loads(out)] == ["GL23", "S4"]


def test_corpus_run(capsys, small_corpus, tmp_path):
    out_dir = tmp_path / "rep"
    code, _, err = run(capsys, "corpus", "run", "--corpus", small_corpus, "--out", str(out_dir), "--seed", "7")
    assert code == 0
    assert (out_dir / "report.jsonl").exists() and (out_dir / "summary.csv").exists()
    code, _, err = run(capsys, "corpus", "run", "--corpus", small_corpus, "--out", str(out_dir),
                       "--unit", "G", "--mode", "lenient", "--checks", "orbit-theorem")
    assert code == 1 and "VIOLATION" in err


def test_config_errors_exit_2(capsys, tmp_path, small_corpus):
    code, _, err = run(capsys, "corpus", "run", "--corpus", small_corpus, "--jobs", "0", "--out", str(tmp_path))
    assert code == 2
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"bogus": 1}')
    code, _, err = run(capsys, "corpus", "run", "--config", str(cfg), "--out", str(tmp_path))
    assert code == 2 and "bogus" in err
    code, _, _ = run(capsys, "verify", "orbits", "--entry", "GL23", "--pi", "2,x")
    assert code == 2
    code, _, _ = run(capsys, "verify", "nothing")
    assert code == 2
    code, _, err = run(capsys, "group", "info", "--entry", "NoSuchEntry")
    assert code == 2 and "NoSuchEntry" in err
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "corpus" in out


def test_corpus_errors_exit_3(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[{")
    code, _, err = run(capsys, "corpus", "run", "--corpus", str(bad), "--out", str(tmp_path))
    assert code == 3 and "line 1" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hallorbits", "scan", "fd", "--p", "2", "--d", "5:5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)[0]["sign"] == "positive"
