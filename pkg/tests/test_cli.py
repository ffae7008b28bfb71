import csv
import io
import json

import pytest

from mbonacci.cli import dispatch, fmt, write_atomic


def run(capsys, *args):
    code = dispatch(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--n", "10")
    assert code == 0
    assert out.strip() == '{"n":10,"L":6,"bits":"1101"}'


def test_perron(capsys):
    code, out, _ = run(capsys, "perron", "--m", "3")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == 1
    assert {"m", "rho", "eigenvector", "poly_residual", "eig_residual"} <= doc.keys()
    assert f"{doc['rho']:.5f}" == "1.83929"


def test_perron_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("MBONACCI_PRECISION_DIGITS", "40")
    code, out, _ = run(capsys, "perron", "--m", "2")
    doc = json.loads(out)
    assert doc["digits"] == 40
    assert doc["rho_digits"].startswith("1.618033988749894848204586834365638117")


def test_word_formats(capsys):
    code, out, _ = run(capsys, "word", "--m", "2", "--length", "8")
    assert out.strip() == "12112121"
    code, out, _ = run(capsys, "word", "--m", "2", "--length", "3", "--left", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["index", "digit"], ["-2", "2"], ["-1", "1"], ["0", "1"], ["1", "2"], ["2", "1"]]


def test_chain(capsys):
    code, out, _ = run(capsys, "chain", "--m", "2", "--from", "0", "--to", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["0", "1", "2", "3"]
    assert rows[2]["lambda"] == "1"
    assert [r["gap_digit"] for r in rows] == ["1", "2", "1", "1"]


def test_density_csv_and_summary(capsys, tmp_path):
    summary = tmp_path / "summary.json"
    code, out, _ = run(capsys, "density", "--m", "2", "--rmin", "250", "--rmax", "500",
                       "--step", "50", "--points", "20000", "--summary", str(summary))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 6
    assert all(abs(float(r["ratio"]) - 1.89443) / 1.89443 < 0.02 for r in rows)
    doc = json.loads(summary.read_text())
    assert doc["lower_bound"] == 1.25 and round(doc["closed_form"], 5) == 1.89443


def test_gaps(capsys):
    code, out, _ = run(capsys, "gaps", "--m", "2", "--nmax", "5", "--krange", "1000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["holds"] for r in rows] == ["true"] * 5
    code, out, _ = run(capsys, "gaps", "--m", "3", "--nmax", "3", "--krange", "100")
    assert list(csv.DictReader(io.StringIO(out)))[0]["gamma_sharp"] == ""


def test_frame(capsys):
    code, out, err = run(capsys, "frame", "--m", "2", "--k", "10", "--lmin", "5", "--lmax", "15", "--steps", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["regime"] for r in rows] == ["below-threshold", "below-threshold", "above-threshold"]
    assert json.loads(err)["threshold"] == pytest.approx(11.903037092, abs=1e-8)


@pytest.mark.parametrize(
    "args",
    [
        ["bogus"],
        ["perron"],
        ["perron", "--m", "1"],
        ["gaps", "--m", "4", "--nmax", "3", "--krange", "10"],
        ["density", "--m", "2", "--rmin", "5", "--rmax", "1", "--step", "1"],
        ["expand", "--n", "0"],
    ],
)
def test_usage_errors(capsys, args):
    code, _, err = run(capsys, *args)
    assert code == 2
    assert err.startswith("error:")


def test_computation_errors(capsys):
    code, _, err = run(capsys, "density", "--m", "2", "--rmin", "500", "--rmax", "600", "--step", "1", "--points", "10")
    assert code == 1 and err.startswith("error:")
    code, _, err = run(capsys, "word", "--m", "2", "--length", "1000", "--max-digits", "100")
    assert code == 1 and err.startswith("error:")


def test_output_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert dispatch(["chain", "--m", "3", "--from", "-50", "--to", "50", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert not list(tmp_path.glob(".*tmp"))


def test_atomic_write_leaves_nothing_on_failure(tmp_path):
    target = tmp_path / "out.txt"
    with pytest.raises(TypeError):
        write_atomic(target, object())
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_float_format():
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(True) == "true" and fmt(None) == "" and fmt(7) == "7"


def test_repro_fast(capsys, tmp_path):
    code, out, _ = run(capsys, "repro", "--fast", "--outdir", str(tmp_path))
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["schema"] == 1
    assert sorted(p.name for p in tmp_path.iterdir()) == ["density.csv", "frame.csv", "gaps_m2.csv", "gaps_m3.csv"]
    assert doc["tribonacci_example"]["expansion"] == {"n": 10, "L": 6, "bits": "1101"}
    code, out2, _ = run(capsys, "repro", "--fast", "--json-only")
    doc2 = json.loads(out2)
    assert "side_files" not in doc2
    doc.pop("side_files")
    assert doc == doc2
