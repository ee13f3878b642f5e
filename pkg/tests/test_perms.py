import pytest
from hypothesis import given, strategies as st

from hyperchen.perms import (
    PermutationError,
    SignedPermutation,
    compose,
    descent_set,
    format_subset,
    hyperoctahedral_group,
    inverse,
    parse_subset,
    regression_set,
    standardize,
    subsets,
    symmetric_group,
)
from oracles import regressions


@st.composite
def signed_perms(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    values = draw(st.permutations(range(1, n + 1)))
    bars = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    return SignedPermutation(tuple(values), tuple(bars))


def test_parse_and_format_round_trip():
    s = SignedPermutation.parse("2 -3 1")
    assert s.values == (2, 3, 1) and s.bars == (False, True, False)
    assert str(s) == "2 -3 1"
    assert SignedPermutation.parse("2,-3,1") == s


@pytest.mark.parametrize("bad", ["1 1", "0 1", "1 3", "a b", "-1 -1"])
def test_parse_rejects_non_permutations(bad):
    with pytest.raises(PermutationError):
        SignedPermutation.parse(bad)


def test_compose_example():
    b = SignedPermutation.parse("2 -3 1")
    s = SignedPermutation.parse("3 1 2")
    # values b(s(i)); bar of s at i xor bar of b at |s(i)|
    assert compose(b, s) == SignedPermutation.parse("1 2 -3")


def test_group_sizes():
    assert [len(hyperoctahedral_group(n)) for n in range(5)] == [1, 2, 8, 48, 384]
    assert [len(symmetric_group(n)) for n in range(5)] == [1, 1, 2, 6, 24]


@given(signed_perms(), signed_perms())
def test_group_axioms(s, b):
    e = SignedPermutation.identity(s.degree)
    assert compose(s, inverse(s)) == e == compose(inverse(s), s)
    assert compose(s, e) == s == compose(e, s)
    if s.degree == b.degree:
        assert inverse(compose(s, b)) == compose(inverse(b), inverse(s))


def test_associativity_exhaustive_b2():
    G = hyperoctahedral_group(2)
    for a in G:
        for b in G:
            for c in G:
                assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_standardize():
    assert standardize([5, -2, 9]) == SignedPermutation.parse("2 -1 3")
    with pytest.raises(PermutationError):
        standardize([-2, 7, -1, 2])
    assert standardize([-2, 7, -1, 2], ties="stable") == SignedPermutation.parse("-2 4 -1 3")


def test_regression_example():
    assert regression_set(SignedPermutation.parse("4 -3 -5 6 -2 1")) == {2, 5}


@given(signed_perms())
def test_regression_matches_oracle(s):
    assert regression_set(s) == regressions(s.signed())


@given(signed_perms())
def test_unsigned_regressions_are_descents(s):
    u = s.erase_bars()
    assert regression_set(u) == descent_set(u)


def test_subsets_and_text():
    assert list(subsets(3)) == [frozenset(), {1}, {2}, {1, 2}]
    assert parse_subset("", 4) == frozenset()
    assert parse_subset("1 3", 4) == {1, 3}
    assert format_subset({3, 1}) == "1 3"
    with pytest.raises(PermutationError):
        parse_subset("4", 4)
