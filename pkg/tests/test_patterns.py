import pytest

from drinfeld.envelope import AlgebraError, LieAlgebraSpec
from drinfeld.patterns import BracketPattern, enumerate_patterns, verify_2d_vanishing


@pytest.mark.parametrize("components,count", [(4, 4), (5, 2), (6, 4)])
def test_census_counts(components, count):
    pats = enumerate_patterns(3, 3, components)
    assert len(pats) == count
    assert len(set(pats)) == count
    for p in pats:
        assert p.num_brackets == 3
        assert p.num_components == components


def test_four_component_chains_start_with_two_colours():
    for p in enumerate_patterns(3, 3, 4):
        text = p.render()
        assert text.startswith("[[[x0,y0],")


def test_five_component_patterns_carry_one_wildcard():
    assert all(p.wildcards == 1 for p in enumerate_patterns(3, 3, 5))


def test_six_components_use_all_three_arguments():
    for p in enumerate_patterns(3, 3, 6):
        text = p.render()
        assert all(c in text for c in "xyz")


def test_unsupported_parameters():
    with pytest.raises(AlgebraError):
        enumerate_patterns(4, 3, 4)
    with pytest.raises(AlgebraError):
        enumerate_patterns(3, 3, 7)


def test_pattern_is_hashable_value():
    a = enumerate_patterns(3, 3, 4)[0]
    assert isinstance(a, BracketPattern)
    assert a == enumerate_patterns(3, 3, 4)[0]


def test_two_dimensional_vanishing():
    checks, _ = verify_2d_vanishing(3, 6)
    by_name = {c.name: c for c in checks}
    assert set(by_name) == {"direct_evaluation", "counting_certificate", "nonzero_tree_has_one_e1"}
    assert all(c.passed for c in checks)
    d = by_name["direct_evaluation"].detail
    assert d["brackets"] == 5 and d["forests"] == d["bracket_part_zero"] > 0
    orders = by_name["counting_certificate"].detail["orders"]
    assert [(o["n"], o["brackets"], o["max_e2"]) for o in orders] == [(n, 2 * n - 1, n + 1) for n in range(3, 7)]


def test_equal_elements_bracket_to_zero():
    alg = LieAlgebraSpec.borel()
    assert not alg.generator_bracket(0, 0)
    assert not alg.generator_bracket(1, 1)


def test_vanishing_needs_n_at_least_three():
    with pytest.raises(AlgebraError):
        verify_2d_vanishing(2)
