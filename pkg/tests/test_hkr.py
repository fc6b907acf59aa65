import pytest
from hypothesis import given
from hypothesis import strategies as st

from drinfeld.complex import differential, tensor_basis
from drinfeld.envelope import AlgebraError, LieAlgebraSpec, TensorElement
from drinfeld.exterior import PolyVector, lie_basis, poly_basis
from drinfeld.expr import parse_poly, parse_tensor
from drinfeld.hkr import DeltaSolver, cohomology_table, map_f, map_h, verify_hkr

FREE = LieAlgebraSpec.free(2, 3)
BOREL = LieAlgebraSpec.borel()


def test_f_examples():
    fb = lie_basis(FREE)
    assert map_f(parse_tensor(FREE, "e1 (x) e2")) == parse_poly(fb, "e1^e2")
    assert not map_f(parse_tensor(FREE, "1"))
    assert map_f(parse_tensor(FREE, "e1*e2")) == parse_poly(fb, "1/2 * [e1,e2]")
    assert map_f(TensorElement.scalar(FREE, 5)) == PolyVector.scalar(fb, 5)


def test_h_examples():
    bb = lie_basis(BOREL)
    assert map_h(parse_poly(bb, "e2")) == parse_tensor(BOREL, "e2")
    assert map_h(parse_poly(bb, "e1^e2")) == parse_tensor(BOREL, "1/2 * e1 (x) e2 - 1/2 * e2 (x) e1")
    assert map_h(PolyVector.scalar(bb, 2)) == TensorElement.scalar(BOREL, 2)


def test_h_needs_single_arity():
    bb = lie_basis(BOREL)
    with pytest.raises(AlgebraError):
        map_h(parse_poly(bb, "e1 + e1^e2"))
    with pytest.raises(AlgebraError):
        map_h(PolyVector(bb))
    assert not map_h(PolyVector(bb), arity=2)


@pytest.mark.parametrize("alg", [FREE, BOREL], ids=["free", "borel"])
def test_verify_hkr_passes(alg):
    checks, _ = verify_hkr(alg, 2, 3)
    assert {c.name: c.passed for c in checks} == {
        "f_after_h_is_identity": True,
        "f_kills_coboundaries": True,
        "h_lands_in_cocycles": True,
        "cohomology_dimensions": True,
        "induced_bracket": True,
    }


def _totals(table):
    out = {}
    for row in table:
        out[row["degree"]] = out.get(row["degree"], 0) + row["dim"]
    return out


def test_free_cohomology_blocks():
    table = cohomology_table(FREE, 2, 3)
    dims = {(r["degree"], r["weight"]): r["dim"] for r in table}
    assert dims[(-1, 0)] == 1
    assert dims[(0, 1)] == 2
    assert dims[(0, 2)] == 1
    assert dims[(1, 2)] == 1  # e1 ^ e2


def test_borel_cohomology_totals():
    assert _totals(cohomology_table(BOREL, 2, 3)) == {-1: 1, 0: 2, 1: 1, 2: 0}


def test_line_has_no_higher_cohomology():
    totals = _totals(cohomology_table(LieAlgebraSpec.free(1, 2), 2, 2))
    assert totals[-1] == 1 and totals[0] == 1
    assert all(v == 0 for k, v in totals.items() if k >= 1)


@given(st.data())
def test_f_kills_random_coboundaries(data):
    arity = data.draw(st.integers(1, 2))
    keys = tensor_basis(BOREL, arity, data.draw(st.integers(0, 3)))
    picked = data.draw(st.lists(st.sampled_from(keys), min_size=1, max_size=4, unique=True))
    phi = TensorElement(BOREL, arity, {k: data.draw(st.integers(-3, 3)) for k in picked})
    assert not map_f(differential(phi))


@given(st.data())
def test_solver_inverts_delta(data):
    solver = DeltaSolver(FREE)
    keys = tensor_basis(FREE, 2, data.draw(st.integers(1, 3)))
    picked = data.draw(st.lists(st.sampled_from(keys), min_size=1, max_size=4, unique=True))
    phi = TensorElement(FREE, 2, {k: data.draw(st.integers(-3, 3)) for k in picked})
    rhs = differential(phi)
    x = solver.solve(rhs.terms, 2)
    assert x is not None
    assert differential(TensorElement(FREE, 2, x)) == rhs


def test_solver_rejects_cohomology_class():
    # h(e1 ^ e2) is closed but not exact
    solver = DeltaSolver(BOREL)
    rhs = map_h(parse_poly(lie_basis(BOREL), "e1^e2"))
    assert solver.solve(rhs.terms, 1) is None


def test_f_after_h_on_all_basis_polyvectors():
    basis = lie_basis(FREE)
    for key in poly_basis(basis, 3, 3, min_arity=0):
        p = PolyVector(basis, {key: 1})
        assert map_f(map_h(p, len(key))) == p
