import csv
import json
import shutil
import subprocess

import pytest

from seqdecomp.cli import BENCH_COLUMNS, main, truth_path


@pytest.fixture
def golden(tmp_path):
    path = tmp_path / "golden.json"
    assert main(["gen", "--spec", "golden", "--field", "10009", "--out", str(path)]) == 0
    return path


def read(path):
    return json.loads(path.read_text())


def test_truth_path():
    assert truth_path("out/x.json") == "out/x.truth.json"


def test_gen_writes_instance_and_truth(golden):
    inst = read(golden)
    truth = read(golden.with_name("golden.truth.json"))
    assert inst["dim"] == 6 and inst["n"] == 2
    assert truth["components"][0]["ek"] == 2 and truth["components"][0]["fk"] == 2


def test_gen_spec_and_random(tmp_path, capsys):
    assert main(["gen", "--spec", "fat:origin:e=2"]) == 0
    assert json.loads(capsys.readouterr().out)["dim"] == 3
    out = tmp_path / "r.json"
    assert main(["gen", "--random", "--n", "3", "--max-dim", "12", "--conjugate", "--seed", "4", "--out", str(out)]) == 0
    assert read(out)["dim"] <= 12


def test_decompose_and_verify(golden, tmp_path):
    report = tmp_path / "report.json"
    rc = main(["decompose", "--input", str(golden), "--repr", "lex,ext,origin", "--seed", "42", "--out", str(report)])
    assert rc == 0
    doc = read(report)
    (comp,) = doc["components"]
    assert (comp["ek"], comp["fk"], comp["dk"]) == (2, 2, 6)
    truth = golden.with_name("golden.truth.json")
    assert main(["verify", "--report", str(report), "--instance", str(golden), "--truth", str(truth)]) == 0
    assert main(["verify", "--report", str(report), "--instance", str(golden), "--mode", "probabilistic"]) == 0


def test_verify_rejects_tampered_report(golden, tmp_path):
    report = tmp_path / "report.json"
    main(["decompose", "--input", str(golden), "--out", str(report)])
    doc = read(report)
    doc["components"][0]["lex_gb"]["generators"][0][-1][-1] += 1
    report.write_text(json.dumps(doc))
    assert main(["verify", "--report", str(report), "--instance", str(golden)]) == 3


def test_ann_algorithms_agree(golden, tmp_path, capsys):
    forms = tmp_path / "forms.json"
    forms.write_text(json.dumps({"forms": [[1, 2, 3, 4, 5, 6], [6, 0, 1, 0, 2, 7]]}))
    results = {}
    for algo, extra in [("mmm", []), ("generic", ["--bound", "4"]), ("brute", [])]:
        assert main(["ann", "--input", str(golden), "--forms", str(forms), "--algorithm", algo, *extra]) == 0
        doc = json.loads(capsys.readouterr().out)
        results[algo] = doc["generators"]
        if algo != "brute":
            assert doc["cost"]["matvec"] > 0
    assert results["mmm"] == results["generic"] == results["brute"]
    assert len(results["mmm"]) == 3


def test_minpoly(golden, capsys):
    assert main(["minpoly", "--input", str(golden), "--seed", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["pmin"] == [4, 4, 5, 2, 1]
    assert doc["radical"] == {"p": [2, 1, 1], "g": [[1, 1]]}


def test_bench_writes_csv_and_png(tmp_path):
    out, png = tmp_path / "bench.csv", tmp_path / "bench.png"
    assert main(["bench", "--count", "3", "--max-dim", "8", "--csv", str(out), "--plot", str(png)]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == BENCH_COLUMNS
    assert len(rows) == 6 and {r["strategy"] for r in rows} == {"mmm", "generic"}
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_exit_codes(golden, tmp_path):
    assert main(["gen", "--spec", "golden", "--field", "10"]) == 4
    assert main(["gen", "--spec", "golden", "--field", "10007"]) == 4  # Z^2+Z+2 splits mod 10007
    assert main(["decompose", "--input", str(tmp_path / "missing.json")]) == 4
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert main(["decompose", "--input", str(junk)]) == 4
    assert main(["decompose", "--input", str(golden), "--retries", "0"]) == 2
    assert main(["bench", "--strategy", "fast"]) == 4


def test_paranoid_catches_non_commuting(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": {"char": 7, "ext": None}, "n": 2, "dim": 2, "one": [1, 0],
                               "matrices": [[[1, 0, 1]], [[0, 1, 1]]]}))
    assert main(["minpoly", "--input", str(bad), "--paranoid"]) == 4


@pytest.mark.skipif(shutil.which("seqdecomp") is None, reason="console script not installed")
def test_console_script(golden):
    done = subprocess.run(["seqdecomp", "decompose", "--input", str(golden)], capture_output=True, text=True)
    assert done.returncode == 0
    assert json.loads(done.stdout)["components"][0]["dk"] == 6
