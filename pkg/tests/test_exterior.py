import pytest
from hypothesis import given
from hypothesis import strategies as st

from drinfeld.envelope import AlgebraError, LieAlgebraSpec
from drinfeld.exterior import (
    PolyVector,
    ext_bracket,
    is_triangular,
    lie_basis,
    lyndon_basis,
    lyndon_words,
    poly_basis,
    witt_dimension,
)
from drinfeld.expr import format_poly, parse_poly


def test_lyndon_basis_sizes():
    assert lyndon_basis(2, 1).names == ["e1", "e2"]
    assert len(lyndon_basis(2, 2)) == 3
    assert lyndon_basis(2, 3).names == ["e1", "e2", "[e1,e2]", "[e1,[e1,e2]]", "[[e1,e2],e2]"]


@pytest.mark.parametrize("n,k", [(2, 4), (2, 5), (3, 3), (3, 4)])
def test_lyndon_words_match_witt_formula(n, k):
    assert len([w for w in lyndon_words(n, k) if len(w) == k]) == witt_dimension(n, k)


def test_wedge_of_two_dimensional_space():
    basis = lie_basis(LieAlgebraSpec.borel())
    r = parse_poly(basis, "e1^e2")
    assert not ext_bracket(r, r)
    assert is_triangular(r)


def test_free_ab_is_not_triangular():
    basis = lie_basis(LieAlgebraSpec.free(3, 2))
    r = parse_poly(basis, "e1^e2")
    expected = parse_poly(basis, "-2 * e1^e2^[e1,e2]")
    assert ext_bracket(r, r) == expected
    assert not is_triangular(r)


def test_abelian_is_always_triangular():
    basis = lie_basis(LieAlgebraSpec.abelian(3))
    assert is_triangular(parse_poly(basis, "e1^e2 + 3*e2^e3"))


def test_triangular_needs_arity_two():
    basis = lie_basis(LieAlgebraSpec.borel())
    with pytest.raises(AlgebraError):
        is_triangular(parse_poly(basis, "e1"))


def test_basis_mismatch():
    a = PolyVector.wedge(lie_basis(LieAlgebraSpec.borel()), 0)
    b = PolyVector.wedge(lie_basis(LieAlgebraSpec.abelian(2)), 0)
    with pytest.raises(AlgebraError):
        ext_bracket(a, b)


def test_wedge_is_antisymmetric():
    basis = lie_basis(LieAlgebraSpec.borel())
    assert parse_poly(basis, "e2^e1") == -parse_poly(basis, "e1^e2")
    assert not parse_poly(basis, "e1^e1")


FREE = LieAlgebraSpec.free(2, 4)
BASIS = lie_basis(FREE)
KEYS = poly_basis(BASIS, 3, 4)


def _poly(data):
    keys = data.draw(st.lists(st.sampled_from(KEYS), min_size=1, max_size=3, unique=True))
    arity = len(keys[0])
    keys = [k for k in keys if len(k) == arity]
    return PolyVector(BASIS, {k: data.draw(st.integers(-2, 2)) for k in keys})


def _arity(p):
    return next(iter(p.arities()), 1)


@given(st.data())
def test_graded_antisymmetry(data):
    x, y = _poly(data), _poly(data)
    s = (_arity(x) - 1) * (_arity(y) - 1)
    assert ext_bracket(x, y) == ext_bracket(y, x) * (-1) ** (s + 1)


@given(st.data())
def test_graded_jacobi(data):
    x, y, z = _poly(data), _poly(data), _poly(data)
    a, b, c = (_arity(p) - 1 for p in (x, y, z))
    total = (
        ext_bracket(x, ext_bracket(y, z)) * (-1) ** (a * c)
        + ext_bracket(y, ext_bracket(z, x)) * (-1) ** (b * a)
        + ext_bracket(z, ext_bracket(x, y)) * (-1) ** (c * b)
    )
    assert not total


def test_poly_round_trip():
    p = parse_poly(BASIS, "1/3 * e1^[e1,e2] - e2 + 2")
    assert parse_poly(BASIS, format_poly(p)) == p
