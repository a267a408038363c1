from __future__ import annotations

import json
import subprocess
import sys

import pytest

from kforms import QQ, FieldSpec, catalog, io
from kforms.algebra import get_budget_mb
from kforms.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from kforms.tensor import matrix


def _analyze(tmp_path, *args):
    out = tmp_path / "report.json"
    code = main(["analyze", *args, "--emit", "json", "--output", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_sklyanin_passes(tmp_path):
    code, rep = _analyze(tmp_path, "--catalog", "sklyanin3", "--check", "gorenstein,koszul,preregular", "--hypothesis", "N=2,D=3")
    assert code == EXIT_OK and rep["ok"]
    assert list(rep["checks"]) == ["gorenstein", "koszul", "preregular"]
    assert rep["dims"][:4] == [1, 3, 6, 10]


def test_counterexample_fails_at_position_two(tmp_path):
    code, rep = _analyze(tmp_path, "--catalog", "counterexample_d", "--check", "gorenstein", "--hypothesis", "N=2,D=3")
    assert code == EXIT_FAIL and not rep["ok"]
    g = rep["checks"]["gorenstein"]
    assert g["first_failure"] == {"total_degree": 4, "position": 2}
    assert g["witness"]
    code, _ = _analyze(
        tmp_path, "--catalog", "counterexample_d", "--check", "gorenstein", "--hypothesis", "N=2,D=3", "--report-only"
    )
    assert code == EXIT_OK


def test_reports_are_deterministic(tmp_path):
    args = ["--catalog", "qdef3", "--check", "3regular,frobenius,orbit,preregular", "--hypothesis", "N=2,D=3"]
    _, a = _analyze(tmp_path, *args)
    _, b = _analyze(tmp_path, *args)
    assert a.pop("timings").keys() == b.pop("timings").keys()
    assert a == b


def test_text_output(capsys):
    assert main(["analyze", "--catalog", "manin_plane:q=3", "--check", "preregular,volume-cycle", "--hypothesis", "N=2"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] preregular" in out and "[PASS] volume-cycle" in out and out.rstrip().endswith("overall: PASS")
    main(["analyze", "--catalog", "counterexample_d", "--check", "gorenstein", "--hypothesis", "N=2,D=3", "--emit", "text"])
    out = capsys.readouterr().out
    assert "[FAIL] gorenstein" in out and "first failure at position 2, total degree 4" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--catalog", "nope"],
        ["analyze", "--catalog", "manin_plane:q=1"],
        ["analyze", "--catalog", "sklyanin3", "--check", "bogus"],
        ["analyze", "--catalog", "sklyanin3", "--hypothesis", "M=3"],
        ["analyze", "--catalog", "sklyanin3", "--hypothesis", "N=x"],
        ["analyze", "--catalog", "sklyanin3", "--max-degree", "-1"],
        ["analyze", "--catalog", "sklyanin3", "--field", "fp:4"],
        ["analyze", "--input", "/nonexistent/form.json"],
        ["analyze"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.startswith("error:")


def test_budget_exit_code_and_restore(capsys):
    before = get_budget_mb()
    argv = ["analyze", "--catalog", "yang_mills", "--check", "preregular", "--hypothesis", "N=3", "--budget-mb", "0.001"]
    assert main(argv) == EXIT_BUDGET
    assert get_budget_mb() == before
    assert "error:" in capsys.readouterr().err


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(catalog.names())
    assert all(any(line.startswith(n) for line in lines) for n in catalog.names())


def test_export_then_analyze(tmp_path):
    path = tmp_path / "sk.json"
    assert main(["export", "--catalog", "sklyanin3", "--output", str(path)]) == EXIT_OK
    code, rep = _analyze(tmp_path, "--input", str(path), "--check", "preregular,frobenius", "--hypothesis", "N=2,D=3")
    assert code == EXIT_OK and rep["kind"] == "form" and rep["dims"][:4] == [1, 3, 6, 10]
    code, rep = _analyze(tmp_path, "--input", str(path), "--field", "fp:101", "--check", "preregular", "--hypothesis", "N=2")
    assert code == EXIT_OK and rep["field"] == "fp:101"


def _write_matrix(path, M, F):
    path.write_text(io.dumps(io.matrix_to_json(M, F)))
    return str(path)


def test_hecke_flip(tmp_path, capsys):
    # symmetric B: the flip gives R with eigenvalues 1 and -1
    B = _write_matrix(tmp_path / "B.json", matrix(QQ, [[1, 0], [0, 1]]), QQ)
    K = _write_matrix(tmp_path / "K.json", matrix(QQ, [[-1, 0], [0, -1]]), QQ)
    assert main(["hecke", "--B", B, "--K", K]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["eqYB"] and rep["yang_baxter"] and rep["hecke"]


def test_hecke_roots_and_bad_root(tmp_path, capsys):
    B = _write_matrix(tmp_path / "B.json", matrix(QQ, [[0, -1], [3, 0]]), QQ)
    assert main(["hecke", "--B", B]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert set(rep["roots"]) == {"3", "1/3"} and rep["relation_equivalent"]
    assert main(["hecke", "--B", B, "--standard-q", "2"]) == EXIT_USAGE
    F7 = FieldSpec.prime(7)
    # trace(B^T B^-1) = -3 mod 7 has no root
    bad = _write_matrix(tmp_path / "bad.json", matrix(F7, [[1, 0], [1, 3]]), F7)
    assert main(["hecke", "--B", bad, "--emit", "text"]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "kforms", "catalog", "list"], capture_output=True, text=True, check=False
    )
    assert out.returncode == 0 and "sklyanin3" in out.stdout
