import json

import pytest

from drinfeld.cli import block_size, main, parse_algebra
from drinfeld.complex import tensor_basis
from drinfeld.envelope import LieAlgebraSpec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bogus_algebra_is_a_usage_error(capsys):
    code, _, err = run(capsys, "verify-dgla", "--algebra", "bogus")
    assert code == 2 and "unknown algebra" in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["quantize", "--algebra", "borel"], ["cohomology", "--algebra", "borel", "--format", "xml"]])
def test_malformed_flags(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_verify_dgla_report_schema(capsys):
    code, out, _ = run(capsys, "verify-dgla", "--algebra", "free:2", "--cutoff", "2", "--max-arity", "1")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == {"command", "params", "checks", "witnesses", "elapsed_ms", "version"}
    assert rep["elapsed_ms"] is None
    assert all(set(c) == {"name", "pass", "detail"} and c["pass"] for c in rep["checks"])


def test_timing_flag_adds_times(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "free:1", "--cutoff", "2", "--timing")
    rep = json.loads(out)
    assert code == 0 and rep["elapsed_ms"] > 0
    assert all("elapsed_ms" in c for c in rep["checks"])


def test_cohomology_table(capsys):
    code, out, _ = run(capsys, "cohomology", "--algebra", "free:2", "--cutoff", "3")
    rep = json.loads(out)
    dims = {(r["degree"], r["weight"]): r["dim"] for r in rep["witnesses"]["table"]}
    assert code == 0 and dims[(-1, 0)] == 1 and dims[(0, 1)] == 2


def test_borel_h1(capsys):
    rep = json.loads(run(capsys, "cohomology", "--algebra", "borel")[1])
    assert rep["witnesses"]["total_by_degree"]["1"] == 1


def test_line_cohomology(capsys):
    rep = json.loads(run(capsys, "cohomology", "--algebra", "free:1", "--cutoff", "2")[1])
    totals = rep["witnesses"]["total_by_degree"]
    assert all(v == 0 for k, v in totals.items() if int(k) >= 1)


def test_obstruction_free3(capsys):
    code, out, _ = run(capsys, "obstruction", "--algebra", "free:3", "--cutoff", "3")
    rep = json.loads(out)
    assert code == 0
    assert {c["name"]: c["pass"] for c in rep["checks"]}["q3_exact"]
    assert "psi" in rep["witnesses"]


def test_obstruction_needs_free_algebra(capsys):
    assert run(capsys, "obstruction", "--algebra", "borel")[0] == 2
    assert run(capsys, "obstruction", "--algebra", "free:2", "--check-2d-vanishing", "3")[0] == 2


def test_quantize_first_order(capsys):
    code, out, _ = run(capsys, "quantize", "--algebra", "borel", "--r", "e1^e2", "--order", "1")
    rep = json.loads(out)
    assert code == 0
    assert rep["witnesses"]["T"] == ["1 (x) 1", "1/2 * e1 (x) e2 - 1/2 * e2 (x) e1"]


def test_quantize_rejects_non_triangular(capsys):
    code, _, err = run(capsys, "quantize", "--algebra", "free:3", "--r", "e1^e2")
    assert code == 1 and "r is not triangular" in err


def test_quantize_bad_expression(capsys):
    assert run(capsys, "quantize", "--algebra", "borel", "--r", "e1^^e2")[0] == 2


def test_memory_guard(capsys):
    code, out, err = run(capsys, "verify-dgla", "--algebra", "free:3", "--cutoff", "6", "--max-block", "100")
    assert code == 1 and "--max-block" in err


def test_text_format(capsys):
    code, out, _ = run(capsys, "quantize", "--algebra", "borel", "--r", "e1^e2", "--order", "2", "--format", "text")
    assert code == 0 and "PASS  maurer_cartan" in out


def test_parse_algebra():
    assert parse_algebra("free:3", 4) == LieAlgebraSpec.free(3, 4)
    assert parse_algebra("abelian:2", 3) == LieAlgebraSpec.abelian(2)


@pytest.mark.parametrize("alg", [LieAlgebraSpec.free(2, 4), LieAlgebraSpec.borel()], ids=["free", "borel"])
def test_block_size_matches_basis(alg):
    for arity in range(0, 4):
        for degree in range(0, 4):
            assert block_size(alg, arity, degree) == len(tensor_basis(alg, arity, degree))
