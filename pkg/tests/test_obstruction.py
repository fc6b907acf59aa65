import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drinfeld.cochain import Cochain, ce_differential, output_arity
from drinfeld.complex import bracket_g, differential
from drinfeld.envelope import LieAlgebraSpec
from drinfeld.exterior import PolyVector, ext_bracket, lie_basis, poly_weight
from drinfeld.hkr import map_h
from drinfeld.obstruction import (
    NotExactError,
    build_structure_maps,
    obstruction_cocycle,
    run_obstruction,
    solve_f2,
)

BOREL = LieAlgebraSpec.borel()
FREE = LieAlgebraSpec.free(2, 4)


def _pv(basis, key):
    return PolyVector(basis, {key: 1})


def test_borel_f2_examples():
    f2 = solve_f2(BOREL)
    assert not f2[((0,), (1,))]
    basis = lie_basis(BOREL)
    for i in range(2):
        g = _pv(basis, (i,))
        assert not ext_bracket(g, g) and not bracket_g(map_h(g), map_h(g))
        # a repeated odd argument is not even stored
        assert not f2.get(((i,), (i,)))


@pytest.mark.parametrize("alg", [BOREL, FREE], ids=["borel", "free"])
def test_f2_solves_its_defining_equation(alg):
    basis = lie_basis(alg)
    for (k1, k2), val in solve_f2(alg, 4).items():
        x1, x2 = _pv(basis, k1), _pv(basis, k2)
        br = ext_bracket(x1, x2)
        rhs = map_h(br, len(k1) + len(k2) - 1) - bracket_g(map_h(x1), map_h(x2))
        assert differential(val) == rhs, (k1, k2)


def test_free_obstruction_is_closed_and_exact():
    checks, witnesses = run_obstruction(FREE, 4)
    assert all(c.passed for c in checks)
    assert [c.name for c in checks] == ["f2_solved", "q3_closed", "q3_exact", "witness_reproduces_q3"]
    assert "psi" in witnesses


def test_deterministic_f2_gives_zero_q3():
    q3, _ = obstruction_cocycle(LieAlgebraSpec.free(3, 3))
    assert not q3


CAP = 4
BASIS = lie_basis(FREE)


def _random_psi(data):
    from drinfeld.cochain import arg_tuples, e_basis

    elems = e_basis(BASIS, CAP)
    values = {}
    for t in arg_tuples(BASIS, 2, CAP):
        a = output_arity(t, 0)
        w = sum(poly_weight(BASIS, k) for k in t)
        outs = [k for k in elems if len(k) == a and poly_weight(BASIS, k) == w]
        if outs and data.draw(st.integers(0, 3)) == 0:
            values[t] = {data.draw(st.sampled_from(outs)): data.draw(st.integers(-2, 2)) or 1}
    return Cochain(BASIS, 2, 0, values, CAP)


@settings(max_examples=15)
@given(st.data())
def test_gauge_shifts_q3_by_a_coboundary(data):
    # F2 -> F2 + h(psi) must change the obstruction by d(psi)
    psi = _random_psi(data)
    table = build_structure_maps(FREE, 2, CAP)
    table.gauge(2, psi)
    q3 = table.extend(allow_correction=True)
    assert q3.values == ce_differential(psi).values


def test_gauge_by_non_closed_psi_obstructs_without_corrections():
    psi = Cochain(BASIS, 2, 0, {((0,), (0, 1)): {(3,): 1}}, CAP)
    assert ce_differential(psi)
    table = build_structure_maps(FREE, 2, CAP)
    table.gauge(2, psi)
    with pytest.raises(NotExactError, match="order 3 is obstructed"):
        table.extend(allow_correction=False)


def test_graded_symmetry_of_f2():
    f2 = solve_f2(FREE, 4)
    for (k1, k2), val in f2.items():
        # shifted F2 is graded symmetric; the unshifted one picks up (-1)^arity
        s = (-1) ** (len(k1) * len(k2) + len(k1) + len(k2))
        assert f2[(k2, k1)] == val * s
