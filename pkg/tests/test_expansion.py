from fractions import Fraction

import pytest

from hyperchen.expansion import (
    COROLLARY_TERMS,
    Model,
    bch_check,
    default_projector,
    gl_theorem_check,
    graded_exp,
    graded_log,
    magnus_check,
    picard_terms,
    random_model,
    recursion_check,
    telescoped_sides,
    third_order_corollary_fixture,
)
from hyperchen.operators import ModelError, PolyOperator, Projector, identity, mat, mat_mul


def test_model_json_round_trip():
    m = random_model(3, 11, lower=Fraction(-1, 2), upper=Fraction(1, 3))
    assert Model.loads(m.dumps()) == m
    assert m.to_json()["P"] == [1, 1, 0]


def test_random_model_is_seeded():
    assert random_model(2, 3) == random_model(2, 3)
    assert random_model(2, 3) != random_model(2, 4)
    coefs = [c for row in random_model(3, 9).H.entries for p in row for c in p]
    assert all(-3 <= c <= 3 and c.denominator == 1 for c in coefs)


@pytest.mark.parametrize("text", [
    "not json",
    '{"dim": 2, "H": [["1"]], "P": [1, 0]}',
    '{"dim": 2, "H": [["1", "0"], ["0", "1"]], "P": [1, 2]}',
    '{"dim": 1, "H": [["1,2,3,4"]], "P": [1]}',
    '{"dim": 1, "H": [["1"]], "P": [1], "lower": "1", "upper": "0"}',
])
def test_malformed_models(text):
    with pytest.raises(ModelError):
        Model.loads(text)


def test_default_projector():
    assert default_projector(1) == Projector((1,))
    assert default_projector(3) == Projector((1, 1, 0))


def test_graded_exp_log_inverse():
    X = [identity(2), mat([[1, 2], [0, 1]]), mat([[0, 1], [3, 0]]), mat([[1, 1], [1, 1]])]
    assert graded_exp(graded_log(X, 3), 3) == X


def test_picard_first_order_is_integral_of_H():
    m = Model(PolyOperator.scalar((0, 2)), Projector((1,)), Fraction(0), Fraction(1))
    # ∫_0^1 2t dt = 1, second order ∫∫ 2t 2s = 1/2
    U = picard_terms(m, 2)
    assert U[1] == ((1,),) and U[2] == ((Fraction(1, 2),),)


@pytest.mark.parametrize("seed", [0, 1])
def test_theorem_d2(seed):
    m = random_model(2, seed)
    assert gl_theorem_check(m, 3)
    assert gl_theorem_check(m.with_window(Fraction(-1, 2), 0), 3)


def test_correction_term_is_not_trivial():
    # U_n P differs from P U_n P, so the (1-P) sum carries real content.
    m = random_model(2, 2)
    P = m.P.matrix()
    U = picard_terms(m, 2)
    assert any(mat_mul(U[n], P) != mat_mul(mat_mul(P, U[n]), P) for n in (1, 2))


def test_recursion_and_telescoped():
    m = random_model(2, 6)
    for k, n in ((1, 2), (1, 3), (2, 3)):
        assert recursion_check(m, k, n)
    for n in (1, 2, 3):
        lhs, rhs = telescoped_sides(m, n)
        assert lhs == rhs


def test_magnus_and_bch():
    m = random_model(2, 8)
    assert magnus_check(m, 3)
    assert bch_check(m, 3)


def test_caps():
    with pytest.raises(ModelError):
        picard_terms(random_model(2, 0), 5)
    with pytest.raises(ModelError):
        picard_terms(random_model(3, 0), 4)


def test_corollary_fixture():
    omega = third_order_corollary_fixture()
    sizes = {n: {c: len(v) for c, v in classes.items()} for n, classes in COROLLARY_TERMS.items()}
    assert sizes == {1: {1: 2}, 2: {Fraction(1, 2): 4, Fraction(-1, 2): 4},
                     3: {Fraction(1, 3): 24, Fraction(-1, 6): 24}}
    assert len(omega[3]) == 48
