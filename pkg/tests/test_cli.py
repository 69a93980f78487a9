import json
import subprocess
import sys
from pathlib import Path

import pytest

from lodaymay.apps import hh_exterior_expected
from lodaymay.cli import main
from lodaymay.fileio import load_algebra

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_hh_totals_match_expected(capsys):
    code, out, _ = run(capsys, "hh", "--algebra", str(DATA / "exterior3.json"), "--max-internal", "16",
                       "--max-level", "8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    want = hh_exterior_expected(3, 3, 16)
    for n in range(17):
        assert doc["totals"].get(str(n), 0) == want[n]


def test_hh_tsv_is_deterministic(capsys):
    args = ("hh", "--algebra", str(DATA / "x4weights.json"), "--max-internal", "8")
    first = run(capsys, *args)
    assert first == run(capsys, *args)
    assert first[1].startswith("# h_valid=3\tt_valid=")


def test_gr_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "gr", "--algebra", str(DATA / "x4weights.json"))
    assert code == 0
    path = tmp_path / "gr.json"
    path.write_text(out)
    g = load_algebra(path)
    assert g.is_split()
    code, again, _ = run(capsys, "gr", "--algebra", str(path))
    assert again == out


def test_pages_and_fundamental(capsys):
    code, out, _ = run(capsys, "pages", "--algebra", str(DATA / "x4weights.json"), "--max-internal", "10")
    assert code == 0 and out.startswith("kind\tr\tn\tw\tvalue")
    assert any(line.startswith("rank\t1\t") for line in out.splitlines())
    code, out, _ = run(capsys, "check-fundamental", "--algebra", str(DATA / "x4weights.json"), "--space", "torus:2",
                       "--max-internal", "5", "--max-level", "4")
    assert code == 0 and "fail" not in out


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--algebra", str(DATA / "x4weights.json"), "--max-internal", "10",
                       "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["strict"]


def test_poincare_and_vanishing(capsys):
    code, out, _ = run(capsys, "poincare", "--p", "3", "--n", "2", "--N", "10")
    assert code == 0 and out.strip() == "1,0,0,0,1,2,1,0,1,2,2"
    code, out, _ = run(capsys, "vanishing", "--p", "5", "--n", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["degrees"] == [2, 4, 8, 14] and doc["certified"]


def test_poset_and_selftest(capsys):
    assert run(capsys, "poset-check")[0] == 0
    code, out, _ = run(capsys, "selftest", "--count", "3", "--seed", "1")
    assert code == 0 and "fail" not in out


@pytest.mark.parametrize("argv", [
    ("hh", "--algebra", "does-not-exist.json"),
    ("hh", "--algebra", str(DATA / "x4weights.json"), "--max-level", "1"),
    ("hh",),
    ("hh", "--algebra", str(DATA / "x4weights.json"), "--space", "torus:0"),
    ("poincare", "--p", "3", "--n", "0", "--N", "5"),
    ("pages", "--algebra", str(DATA / "x4weights.json"), "--r-max", "0"),
])
def test_validation_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_broken_algebra_file(capsys, tmp_path):
    doc = json.loads((DATA / "x4weights.json").read_text())
    doc["products"].append(dict(doc["products"][-1]))
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "hh", "--algebra", str(path))[0] == 2


def test_check_failure_exit_code(capsys, monkeypatch):
    from lodaymay import mayfilt

    class Failing:
        passed = False
        first_failure = (1, 2, 3)
        results = {(1, 2, 3): False}

    monkeypatch.setattr(mayfilt, "check_fundamental", lambda fc: Failing())
    code, out, _ = run(capsys, "check-fundamental", "--algebra", str(DATA / "x4weights.json"))
    assert code == 1 and "first failure" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "lodaymay.cli", "poincare", "--p", "3", "--n", "2", "--N", "4"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "1,0,0,0,1"
