import csv
import io
import json

import pytest

from zetamoments.cli import main

from .conftest import ZEROS_FILE


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_rmt_rows(capsys):
    code, out, _ = _run(["rmt", "--k", "1", "--orders", "1", "--n", "5,10,20", "--samples", "4000", "--seed", "7"], capsys)
    assert code == 0
    rows = _rows(out)
    assert [r["N"] for r in rows] == ["5", "10", "20"]
    for r in rows:
        assert {"seed", "config_hash", "version"} <= set(r)
        assert r["seed"] == "7"
        assert abs(float(r["ratio_exact_re"]) - 1) < 0.3


def test_rmt_json_mirrors_csv(capsys):
    argv = ["rmt", "--k", "2", "--orders", "1", "--n", "6", "--samples", "500", "--seed", "3"]
    _, out_csv, _ = _run(argv, capsys)
    _, out_json, _ = _run(argv + ["--format", "json"], capsys)
    rows = _rows(out_csv)
    data = json.loads(out_json)
    assert len(data) == len(rows) == 1
    assert list(data[0]) == list(rows[0])
    assert float(rows[0]["mc_re"]) == data[0]["mc_re"]


def test_rmt_usage_errors(capsys):
    assert _run(["rmt", "--k", "1", "--n", "5"], capsys)[0] == 2
    assert _run(["rmt", "--k", "2", "--orders", "1,2,3", "--n", "5"], capsys)[0] == 2
    assert _run([], capsys)[0] == 2


def test_output_is_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["rmt", "--k", "1", "--orders", "2", "--n", "8", "--samples", "800", "--seed", "11"]
    assert main(argv + ["-o", str(a)]) == 0
    assert main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_hybrid_smcheck(capsys):
    code, out, err = _run(["hybrid", "smcheck", "--logx", "5", "--y", "10"], capsys)
    assert code == 0
    assert "max |delta s_m|" in err
    assert max(float(r["abs_diff"]) for r in _rows(out)) <= 1e-6


def test_hybrid_t13(capsys):
    code, out, _ = _run(["hybrid", "t13", "--k", "1", "--n", "20", "--samples", "2000"], capsys)
    assert code == 0
    row = _rows(out)[0]
    assert "ratio_re" in row and "exact_finite_n_re" in row
    assert _run(["hybrid", "t13", "--k", "-3", "--n", "20"], capsys)[0] == 2
    assert _run(["hybrid", "smcheck", "--logx", "5", "--y", "1"], capsys)[0] == 2


@pytest.mark.skipif(not ZEROS_FILE.is_file(), reason="bundled zeros missing")
def test_zeta_commands(tmp_path, capsys):
    code, out, _ = _run(["zeta", "moments", "--orders", "1", "--zeros", str(ZEROS_FILE), "--checkpoints", "100,1000"], capsys)
    assert code == 0
    rows = _rows(out)
    assert len(rows) == 2 and "ratio_log_t_re" in rows[0] and "prediction_re" in rows[0]
    code, out, _ = _run(["zeta", "landau", "--m", "2", "--zeros", str(ZEROS_FILE), "--count", "5000"], capsys)
    assert code == 0 and abs(float(_rows(out)[0]["ratio_re"]) - 1) < 0.1
    code, out, _ = _run(["zeta", "px", "--k", "1.5", "--x", "auto", "--zeros", str(ZEROS_FILE), "--count", "2000"], capsys)
    assert code == 0 and _rows(out)[0]["error_class"] == "all_zero"
    assert _run(["zeta", "moments", "--orders", "1", "--zeros", str(tmp_path / "nope"), "--checkpoints", "5"], capsys)[0] == 2
    assert _run(["zeta", "moments", "--orders", "1", "--zeros", str(ZEROS_FILE), "--checkpoints", "0"], capsys)[0] == 2


@pytest.mark.skipif(not ZEROS_FILE.is_file(), reason="bundled zeros missing")
def test_zeta_cache_reuse(tmp_path, capsys):
    cache = tmp_path / "c.jsonl"
    argv = ["zeta", "moments", "--orders", "1,1", "--zeros", str(ZEROS_FILE), "--checkpoints", "50,200", "--cache", str(cache)]
    _, first, _ = _run(argv, capsys)
    assert cache.read_text().count("\n") == 1
    _, second, _ = _run(argv, capsys)
    assert first == second and cache.read_text().count("\n") == 1


def test_genzeros(tmp_path, capsys):
    out = tmp_path / "z.txt"
    assert main(["zeta", "genzeros", "--count", "30", "-o", str(out)]) == 0
    lines = out.read_text().split()
    assert len(lines) == 30 and lines[0].startswith("14.134725141")
    capsys.readouterr()


def test_selftest_subset(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["selftest", "--quick", "--only", "1,3,8", "-o", str(out)]) == 0
    rows = _rows(out.read_text())
    assert [r["criterion"] for r in rows] == ["1", "3", "8"]
    assert all(r["passed"] == "true" for r in rows)
    assert json.loads(rows[0]["metrics"])
    assert "criterion  1 PASS" in capsys.readouterr().err
    assert main(["selftest", "--only", "13"]) == 2
