from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hyperchen.algebra import (
    AlgebraElement,
    DegreeCapError,
    GradedSeries,
    check_degree,
    convolve,
    identity_element,
    identity_series,
    internal_product,
    series_exp,
    series_log,
    series_multiply,
    shuffle,
    shuffle_by_insertion,
    shuffle_convolution_relation_check,
)
from hyperchen.perms import SignedPermutation, hyperoctahedral_group
from oracles import brute_convolution

P = SignedPermutation.parse


def e(text, coef=1):
    return AlgebraElement.basis(P(text), coef)


def test_convolution_against_brute_force():
    for n, m in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        for s in hyperoctahedral_group(n):
            for b in hyperoctahedral_group(m)[:: max(1, 2 ** m // 4)]:
                got = sorted(p.signed() for p in convolve(AlgebraElement.basis(s), AlgebraElement.basis(b)).support())
                assert got == brute_convolution(s.signed(), b.signed())


def test_unit_and_associativity():
    one = AlgebraElement.unit()
    x = e("2 -1") + e("1 2", Fraction(1, 3))
    assert convolve(one, x) == x == convolve(x, one)
    for a, b, c in product(hyperoctahedral_group(1), hyperoctahedral_group(2), hyperoctahedral_group(1)):
        A, B, C = (AlgebraElement.basis(p) for p in (a, b, c))
        assert convolve(convolve(A, B), C) == convolve(A, convolve(B, C))


def test_non_commutative_witness():
    assert convolve(e("1"), e("2 1")) != convolve(e("2 1"), e("1"))


def test_linear_operations():
    x = e("1 2") + e("2 1", 2)
    assert x - x == AlgebraElement.zero(2)
    assert (x * Fraction(1, 2))[P("2 1")] == 1
    assert -x + x == AlgebraElement.zero(2)


def test_json_round_trip():
    x = e("2 -1", Fraction(-3, 7)) + e("-1 2", 5)
    data = x.to_json()
    assert data["terms"][0]["coef"] in {"5/1", "-3/7"}
    assert AlgebraElement.from_json(data) == x


def test_internal_product_identity():
    x = e("2 1", 3) + e("1 2", -1)
    assert internal_product(identity_element(2), x) == x == internal_product(x, identity_element(2))


def test_shuffle_counts_and_recursions():
    assert sum(shuffle("ab", "cde").values()) == 10
    for u, v in [("ab", "c"), ("abc", "de"), ((1, 2), (1,))]:
        assert shuffle(u, v) == shuffle_by_insertion(u, v)
    assert shuffle((1,), (1,)) == {(1, 1): 2}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.data())
def test_shuffle_convolution_relation(n, m, data):
    s = data.draw(st.sampled_from(hyperoctahedral_group(n)))
    b = data.draw(st.sampled_from(hyperoctahedral_group(m)))
    assert shuffle_convolution_relation_check(s, b)


def test_degree_caps():
    check_degree(6)
    check_degree(7, extended=True)
    with pytest.raises(DegreeCapError):
        check_degree(7)
    with pytest.raises(DegreeCapError):
        check_degree(8, extended=True)


def test_series_exp_log_inverse():
    I = identity_series(4)
    assert series_exp(series_log(I)) == I
    X = GradedSeries({0: AlgebraElement.unit(), 1: e("1") + e("-1"), 2: e("2 -1")}, 3)
    assert series_exp(series_log(X)) == X
    assert series_multiply(GradedSeries.one(3), X) == X
