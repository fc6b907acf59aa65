import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from drinfeld.envelope import (
    AlgebraError,
    LieAlgebraSpec,
    NCElement,
    SymElement,
    TensorElement,
    commutator,
    componentwise_mul,
    coproduct,
    iterated_coproduct,
    nc_mul,
    pbw_sigma,
    sym,
)
from drinfeld.exterior import lie_basis
from drinfeld.expr import ParseError, format_tensor, parse_nc, parse_tensor

FREE = LieAlgebraSpec.free(2, 3)
BOREL = LieAlgebraSpec.borel()


def T(alg, text):
    return parse_tensor(alg, text)


def test_free_product_is_concatenation():
    assert nc_mul(parse_nc(FREE, "e1"), parse_nc(FREE, "e2")) == NCElement.word(FREE, (0, 1))


def test_borel_straightening():
    assert nc_mul(parse_nc(BOREL, "e2"), parse_nc(BOREL, "e1")) == parse_nc(BOREL, "e1*e2 - 2*e1")


def test_unit_is_neutral():
    a = parse_nc(BOREL, "e2*e2 + 3*e1")
    assert nc_mul(NCElement.unit(BOREL), a) == a


def test_free_truncation_drops_long_words():
    x = parse_nc(FREE, "e1*e2")
    assert not nc_mul(x, x)


def test_mismatched_algebras():
    with pytest.raises(AlgebraError):
        nc_mul(parse_nc(FREE, "e1"), parse_nc(BOREL, "e1"))


def test_coproduct_examples():
    assert coproduct(NCElement.unit(FREE)) == T(FREE, "1 (x) 1")
    assert coproduct(parse_nc(FREE, "e1")) == T(FREE, "e1 (x) 1 + 1 (x) e1")
    assert coproduct(parse_nc(FREE, "e1*e2")) == T(FREE, "e1*e2 (x) 1 + e1 (x) e2 + e2 (x) e1 + 1 (x) e1*e2")


def test_iterated_coproduct_examples():
    a = parse_nc(BOREL, "e1*e2 + 5")
    assert iterated_coproduct(a, 0) == TensorElement.from_nc(a)
    assert iterated_coproduct(NCElement.unit(BOREL), 2) == T(BOREL, "1 (x) 1 (x) 1")
    assert iterated_coproduct(parse_nc(BOREL, "e2"), 2) == T(BOREL, "e2 (x) 1 (x) 1 + 1 (x) e2 (x) 1 + 1 (x) 1 (x) e2")


def test_sigma_examples():
    assert pbw_sigma(parse_nc(FREE, "e2")) == SymElement({(1,): 1})
    assert pbw_sigma(NCElement.unit(FREE)) == SymElement({(): 1})
    # e1 e2 = e1.e2 + 1/2 [e1, e2]; index 2 is [e1, e2] in the Lyndon basis
    assert lie_basis(FREE).names[2] == "[e1,e2]"
    assert pbw_sigma(parse_nc(FREE, "e1*e2")) == SymElement({(0, 1): 1, (2,): Fraction(1, 2)})


def _words(alg, max_len):
    n = alg.ngens
    out = []
    for k in range(max_len + 1):
        for w in itertools.product(range(n), repeat=k):
            if alg.is_canonical(w):
                out.append(w)
    return out


@pytest.mark.parametrize("alg", [FREE, BOREL], ids=["free", "borel"])
def test_associativity_on_basis(alg):
    words = _words(alg, 2)
    for a, b, c in itertools.product(words, repeat=3):
        x, y, z = (NCElement.word(alg, w) for w in (a, b, c))
        assert nc_mul(nc_mul(x, y), z) == nc_mul(x, nc_mul(y, z))


@pytest.mark.parametrize("alg", [FREE, BOREL], ids=["free", "borel"])
def test_coproduct_is_multiplicative(alg):
    words = _words(alg, 2)
    for a, b in itertools.product(words, repeat=2):
        x, y = NCElement.word(alg, a), NCElement.word(alg, b)
        lhs = coproduct(nc_mul(x, y))
        rhs = TensorElement(alg, 2, componentwise_mul(alg, coproduct(x).terms, coproduct(y).terms))
        assert lhs == rhs


@pytest.mark.parametrize("alg", [FREE, BOREL], ids=["free", "borel"])
def test_coassociativity(alg):
    for w in _words(alg, 3):
        x = NCElement.word(alg, w)
        d2 = iterated_coproduct(x, 2)
        left, right = {}, {}
        for (a, b), c in coproduct(x).terms.items():
            for (a1, a2), c1 in coproduct(NCElement.word(alg, a)).terms.items():
                left[(a1, a2, b)] = left.get((a1, a2, b), 0) + c * c1
            for (b1, b2), c2 in coproduct(NCElement.word(alg, b)).terms.items():
                right[(a, b1, b2)] = right.get((a, b1, b2), 0) + c * c2
        clean = lambda d: {k: v for k, v in d.items() if v}
        assert clean(left) == clean(right) == d2.terms


def test_straightening_is_confluent():
    # e_k e_j e_i straightened left-first or right-first
    alg = LieAlgebraSpec.from_structure_constants(
        ("e1", "e2", "e3"), {(0, 1): {2: 1}, (0, 2): {}, (1, 2): {}}
    )
    gens = [NCElement.gen(alg, i) for i in range(3)]
    for i, j, k in itertools.product(range(3), repeat=3):
        a, b, c = gens[k], gens[j], gens[i]
        assert nc_mul(nc_mul(a, b), c) == nc_mul(a, nc_mul(b, c))


def test_structure_constants_must_satisfy_jacobi():
    with pytest.raises(AlgebraError):
        LieAlgebraSpec.from_structure_constants(("x", "y", "z"), {(0, 1): {1: 1}, (1, 2): {0: 1}, (0, 2): {}})


@pytest.mark.parametrize("alg", [FREE, BOREL], ids=["free", "borel"])
def test_sigma_inverts_symmetrisation(alg):
    basis = lie_basis(alg)
    cap = 3
    weights = basis.weights
    for k in range(cap + 1):
        for ms in itertools.combinations_with_replacement(range(len(basis)), k):
            if alg.is_free and sum(weights[i] for i in ms) > alg.cutoff:
                continue
            s = SymElement({ms: 1})
            assert pbw_sigma(sym(alg, s)) == s


@given(st.lists(st.sampled_from(["e1", "e2", "e1*e2", "e2*e1", "e2*e2", "1"]), min_size=2, max_size=2))
def test_commutator_of_generators_matches_structure(words):
    x, y = (parse_nc(BOREL, w) for w in words)
    c = commutator(x, y)
    assert c == nc_mul(x, y) - nc_mul(y, x)
    assert commutator(y, x) == -c


def test_expression_round_trip():
    t = T(FREE, "3/2 * e1*e2 (x) e2 - e2 (x) e1")
    assert parse_tensor(FREE, format_tensor(t)) == t


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_tensor(FREE, "e1 (x)")
    with pytest.raises(ParseError):
        parse_tensor(FREE, "e7")
