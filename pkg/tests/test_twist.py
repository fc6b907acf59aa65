import pytest

from drinfeld.envelope import AlgebraError, LieAlgebraSpec, TensorElement
from drinfeld.exterior import PolyVector, lie_basis
from drinfeld.expr import parse_poly, parse_tensor
from drinfeld.obstruction import NotExactError
from drinfeld.twist import (
    TwistSeries,
    build_T_and_check,
    cocycle_residuals,
    mc_residuals,
    solve_structure_maps,
    twist_mc,
)

BOREL = LieAlgebraSpec.borel()
BASIS = lie_basis(BOREL)
R = parse_poly(BASIS, "e1^e2")


@pytest.fixture(scope="module")
def maps4():
    return solve_structure_maps(BOREL, 4)


def test_first_order_is_h_of_r(maps4):
    rho = twist_mc(R, maps4, 1)
    assert rho[1] == parse_tensor(BOREL, "1/2 * e1 (x) e2 - 1/2 * e2 (x) e1")


def test_f2_of_generators_vanishes(maps4):
    assert not maps4.F[2].value(((0,), (1,)))


def test_fourth_order_residuals_vanish(maps4):
    rho = twist_mc(R, maps4, 4)
    assert not any(mc_residuals(rho))
    assert not any(cocycle_residuals(rho))
    checks, witnesses = build_T_and_check(rho)
    assert all(c.passed for c in checks)
    assert witnesses["T"][0] == "1 (x) 1" and len(witnesses["T"]) == 5


def test_residuals_coincide_on_a_perturbed_series(maps4):
    rho = twist_mc(R, maps4, 3)
    bumped = rho[3] + parse_tensor(BOREL, "e1 (x) e2*e2")
    bad = TwistSeries(BOREL, 3, [rho[1], rho[2], bumped])
    mc, cyb = mc_residuals(bad), cocycle_residuals(bad)
    assert mc[2] and cyb[2]
    assert mc == cyb
    checks, _ = build_T_and_check(bad)
    assert {c.name: c.passed for c in checks} == {"maurer_cartan": False, "twist_cocycle": False, "residuals_agree": True}


def test_second_order_is_needed(maps4):
    # dropping the order-2 correction breaks both equations at order 2
    rho = twist_mc(R, maps4, 2)
    if not rho[2]:
        pytest.skip("second-order coefficient vanishes")
    bad = TwistSeries(BOREL, 2, [rho[1], TensorElement(BOREL, 2)])
    assert mc_residuals(bad)[1] and cocycle_residuals(bad)[1]


def test_zero_r_gives_zero_series(maps4):
    rho = twist_mc(PolyVector(BASIS), maps4, 3)
    assert all(not rho[m] for m in (1, 2, 3))
    checks, _ = build_T_and_check(rho)
    assert all(c.passed for c in checks)


def test_rescaled_r_scales_orders(maps4):
    rho = twist_mc(R, maps4, 3)
    rho2 = twist_mc(R * 2, maps4, 3)
    for m in (1, 2, 3):
        assert rho2[m] == rho[m] * 2**m


def test_non_triangular_r_rejected():
    alg = LieAlgebraSpec.free(3, 2)
    r = parse_poly(lie_basis(alg), "e1^e2")
    maps = solve_structure_maps(alg, 1)
    with pytest.raises(AlgebraError, match="r is not triangular"):
        twist_mc(r, maps, 1)


def test_order_bounds(maps4):
    with pytest.raises(AlgebraError):
        solve_structure_maps(BOREL, 0)
    with pytest.raises(AlgebraError):
        twist_mc(R, maps4, 5)


def test_series_requires_arity_two():
    with pytest.raises(AlgebraError):
        TwistSeries(BOREL, 1, [parse_tensor(BOREL, "e1")])
    with pytest.raises(AlgebraError):
        TwistSeries(BOREL, 2, [parse_tensor(BOREL, "e1 (x) e2")])


def test_not_exact_error_is_an_algebra_error():
    assert issubclass(NotExactError, AlgebraError)
