"""Picard-type and exponential expansions of the effective evolution operator.

Everything here is graded by the number of H factors.  A graded matrix
series is a list ``[M_0, M_1, ..., M_N]``; products, logs and exponentials
are the truncated formal ones.

The projected expansion is checked in its pre-inverse form

    U P = (P + (1 - P) sum_k <R_∅^k> P) (P U P)

degree by degree, on a finite window ``[lower, upper]``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import AlgebraElement, GradedSeries, as_fraction, format_fraction, identity_series, series_log
from .bases import R, omega_R
from .chen import (
    DEFAULT_WINDOW,
    ChenEvaluator,
    CompositeSymbol,
    all_hats,
    composite_value,
    eval_bracket_combination,
    model_evaluator,
)
from .operators import (
    Matrix,
    ModelError,
    PolyOperator,
    Projector,
    check_operator,
    identity,
    mat_add,
    mat_mul,
    mat_scale,
    poly,
    zeros,
)
from .perms import SignedPermutation, hyperoctahedral_group, regression_set

#: Largest H-degree the theorem checks accept, per dimension.
THEOREM_CAPS = {1: 4, 2: 4, 3: 3}


@dataclass(frozen=True)
class Model:
    """A Hamiltonian surrogate, a diagonal projector and an integration window."""

    H: PolyOperator
    P: Projector
    lower: Fraction = DEFAULT_WINDOW[0]
    upper: Fraction = DEFAULT_WINDOW[1]

    def __post_init__(self):
        check_operator(self.H)
        if self.H.dim != self.P.dim:
            raise ModelError(f"H has dimension {self.H.dim} but P has {self.P.dim}")
        lower, upper = as_fraction(self.lower), as_fraction(self.upper)
        if lower > upper:
            raise ModelError(f"empty window: lower {lower} > upper {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.H.dim

    def with_window(self, lower, upper) -> Model:
        return Model(self.H, self.P, as_fraction(lower), as_fraction(upper))

    def evaluator(self) -> ChenEvaluator:
        return model_evaluator(self.H, self.P, self.lower, self.upper)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "H": self.H.to_json(),
            "P": list(self.P.diagonal),
            "lower": format_fraction(self.lower),
            "upper": format_fraction(self.upper),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Model:
        try:
            d = int(data["dim"])
            H = PolyOperator.from_json(data["H"])
            P = Projector(tuple(data["P"]))
            lower = Fraction(data.get("lower", "-1/1"))
            upper = Fraction(data.get("upper", "0/1"))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ModelError(f"malformed model: {exc}") from exc
        if H.dim != d:
            raise ModelError(f"declared dim {d} but H has dimension {H.dim}")
        return cls(H, P, lower, upper)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> Model:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"model file is not JSON: {exc}") from exc
        return cls.from_json(data)


def default_projector(dim: int) -> Projector:
    """``diag(1, ..., 1, 0)``: every direction but the last, or ``(1,)`` in dimension 1."""
    ones = max(dim - 1, 1)
    return Projector((1,) * ones + (0,) * (dim - ones))


def random_model(dim: int, seed: int, degree: int = 2, coef_range: int = 3, lower=DEFAULT_WINDOW[0],
                 upper=DEFAULT_WINDOW[1], projector: Projector | None = None) -> Model:
    """A model with integer polynomial coefficients drawn uniformly from ``[-coef_range, coef_range]``."""
    rng = random.Random(seed)
    H = PolyOperator(tuple(
        tuple(poly(rng.randint(-coef_range, coef_range) for _ in range(degree + 1)) for _ in range(dim))
        for _ in range(dim)
    ))
    return Model(H, projector or default_projector(dim), as_fraction(lower), as_fraction(upper))


# -- graded matrix series ---------------------------------------------------


def graded_product(X: Sequence[Matrix], Y: Sequence[Matrix], N: int) -> list[Matrix]:
    d = len(X[0])
    return [
        _sum((mat_mul(X[i], Y[n - i]) for i in range(n + 1) if i < len(X) and n - i < len(Y)), d)
        for n in range(N + 1)
    ]


def graded_log(X: Sequence[Matrix], N: int) -> list[Matrix]:
    """Formal log of ``X`` with ``X_0 = 1``."""
    d = len(X[0])
    if X[0] != identity(d):
        raise ValueError("graded_log needs identity in degree 0")
    Y = [zeros(d)] + list(X[1:N + 1])
    result = [zeros(d)] * (N + 1)
    power = Y
    for k in range(1, N + 1):
        result = [mat_add(r, mat_scale(p, Fraction((-1) ** (k + 1), k))) for r, p in zip(result, power)]
        power = graded_product(power, Y, N)
    return result


def graded_exp(Y: Sequence[Matrix], N: int) -> list[Matrix]:
    """Formal exp of ``Y`` with ``Y_0 = 0``."""
    d = len(Y[0])
    if Y[0] != zeros(d):
        raise ValueError("graded_exp needs zero in degree 0")
    Y = list(Y[:N + 1])
    result = [identity(d)] + [zeros(d)] * N
    power = Y
    for k in range(1, N + 1):
        result = [mat_add(r, mat_scale(p, Fraction(1, math.factorial(k)))) for r, p in zip(result, power)]
        power = graded_product(power, Y, N)
    return result


def _sum(mats, d: int) -> Matrix:
    total = zeros(d)
    for m in mats:
        total = mat_add(total, m)
    return total


def push_series(X: GradedSeries, ev: ChenEvaluator, N: int) -> list[Matrix]:
    """Apply ``<.>`` degree by degree."""
    return [ev.angle(X[n]) for n in range(N + 1)]


# -- Picard terms and the projected expansion -------------------------------


@dataclass(frozen=True)
class TruncatedEvolution:
    order: int
    terms: tuple[Matrix, ...]
    model: Model

    def __getitem__(self, n: int) -> Matrix:
        return self.terms[n]


def _check_cap(model: Model, N: int) -> None:
    cap = THEOREM_CAPS.get(model.dim, 0)
    if N > cap:
        raise ModelError(f"order {N} exceeds cap {cap} for dimension {model.dim}")


def picard_terms(model: Model, N: int, ev: ChenEvaluator | None = None) -> TruncatedEvolution:
    """``U_n = [^1, ..., ^n]`` for ``n <= N``, through the hat expansion."""
    _check_cap(model, N)
    ev = ev or model.evaluator()
    terms = [identity(model.dim)] + [eval_bracket_combination({all_hats(n): 1}, ev) for n in range(1, N + 1)]
    return TruncatedEvolution(N, tuple(terms), model)


def regression_free_terms(ev: ChenEvaluator, N: int) -> list[Matrix]:
    """``<R_∅^k>`` for ``k <= N`` (identity at k = 0)."""
    return [ev.angle(R(k)) for k in range(N + 1)]


def gl_theorem_sides(model: Model, N: int) -> list[tuple[Matrix, Matrix]]:
    """Per-degree ``(U_n P, [(P + (1-P) sum_k <R_∅^k> P)(P U P)]_n)`` for ``1 <= n <= N``."""
    ev = model.evaluator()
    U = picard_terms(model, N, ev).terms
    Rk = regression_free_terms(ev, N)
    P, Q = model.P.matrix(), model.P.complement()
    PUP = [mat_mul(mat_mul(P, u), P) for u in U]
    left_factor = [P] + [mat_mul(mat_mul(Q, r), P) for r in Rk[1:]]
    rhs = graded_product(left_factor, PUP, N)
    return [(mat_mul(U[n], P), rhs[n]) for n in range(1, N + 1)]


def gl_theorem_check(model: Model, N: int) -> bool:
    return all(lhs == rhs for lhs, rhs in gl_theorem_sides(model, N))


def recursion_sides(model: Model, k: int, n: int) -> tuple[Matrix, Matrix]:
    """``<R_∅^k; n-k>`` against ``<R_∅^k> P U_{n-k} + <R_∅^{k+1}; n-k-1>``."""
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    _check_cap(model, n)
    ev = model.evaluator()
    U = picard_terms(model, n - k, ev).terms
    lhs = composite_value((R(k), n - k), ev)
    first = mat_mul(mat_mul(ev.angle(R(k)), model.P.matrix()), U[n - k])
    rhs = mat_add(first, composite_value((R(k + 1), n - k - 1), ev))
    return lhs, rhs


def recursion_check(model: Model, k: int, n: int) -> bool:
    lhs, rhs = recursion_sides(model, k, n)
    return lhs == rhs


def telescoped_sides(model: Model, n: int) -> tuple[Matrix, Matrix]:
    """``U_n`` against ``P U_n + sum_{k<n} (1-P)<R_∅^k> P U_{n-k} + (1-P)<R_∅^n>``."""
    _check_cap(model, n)
    ev = model.evaluator()
    U = picard_terms(model, n, ev).terms
    P, Q = model.P.matrix(), model.P.complement()
    rhs = mat_mul(P, U[n])
    for k in range(1, n):
        rhs = mat_add(rhs, mat_mul(mat_mul(mat_mul(Q, ev.angle(R(k))), P), U[n - k]))
    rhs = mat_add(rhs, mat_mul(Q, ev.angle(R(n))))
    return U[n], rhs


# -- exponential forms ------------------------------------------------------


def magnus_sides(model: Model, N: int) -> list[tuple[Matrix, Matrix]]:
    """Per-degree ``P + (1-P) exp(<Ω_R>) P`` against ``P + (1-P) Pic P``."""
    _check_cap(model, N)
    ev = model.evaluator()
    omega = push_series(omega_R(N), ev, N)
    E = graded_exp(omega, N)
    pic = regression_free_terms(ev, N)
    P, Q = model.P.matrix(), model.P.complement()

    def project(series: list[Matrix], n: int) -> Matrix:
        body = mat_mul(mat_mul(Q, series[n]), P)
        return mat_add(P, body) if n == 0 else body

    return [(project(E, n), project(pic, n)) for n in range(N + 1)]


def magnus_check(model: Model, N: int) -> bool:
    return all(lhs == rhs for lhs, rhs in magnus_sides(model, N))


def bch_sides(model: Model, N: int) -> list[tuple[Matrix, Matrix]]:
    """Formal log of the plain Picard series against ``<log I>``, one H, no projector."""
    _check_cap(model, N)
    ev = ChenEvaluator({"a": model.H}, model.lower, model.upper)
    picard = [identity(model.dim)] + [ev.perm(SignedPermutation.identity(n)) for n in range(1, N + 1)]
    lhs = graded_log(picard, N)
    rhs = push_series(series_log(identity_series(N)), ev, N)
    return [(lhs[n], rhs[n]) for n in range(1, N + 1)]


def bch_check(model: Model, N: int) -> bool:
    return all(lhs == rhs for lhs, rhs in bch_sides(model, N))


# -- reference third-order truncation --------------------------------------

COROLLARY_TERMS: dict[int, dict[Fraction, tuple[str, ...]]] = {
    1: {Fraction(1): ("1", "-1")},
    2: {
        Fraction(1, 2): ("1 2", "-1 2", "2 -1", "-2 -1"),
        Fraction(-1, 2): ("1 -2", "-1 -2", "2 1", "-2 1"),
    },
    3: {
        Fraction(1, 3): (
            "1 2 3", "-1 2 3", "1 3 -2", "-1 3 -2", "2 -1 3", "-2 -1 3",
            "2 3 -1", "-2 3 -1", "3 -2 -1", "-3 -2 -1", "3 -1 2", "-3 -1 2",
            "3 2 1", "-3 2 1", "2 -3 1", "-2 -3 1", "1 -2 -3", "-1 -2 -3",
            "1 -3 2", "-1 -3 2", "2 1 -3", "-2 1 -3", "3 1 -2", "-3 1 -2",
        ),
        Fraction(-1, 6): (
            "1 3 2", "-1 3 2", "2 3 1", "-2 3 1", "2 1 3", "-2 1 3",
            "3 1 2", "-3 1 2", "1 -3 -2", "-1 -3 -2", "1 -2 3", "-1 -2 3",
            "2 -1 -3", "-2 -1 -3", "3 -1 -2", "-3 -1 -2", "2 -3 -1", "-2 -3 -1",
            "3 -2 1", "-3 -2 1", "1 2 -3", "-1 2 -3", "3 2 -1", "-3 2 -1",
        ),
    },
}


def corollary_series() -> GradedSeries:
    """The reference degree <= 3 coefficients as a series."""
    parts = {}
    for n, classes in COROLLARY_TERMS.items():
        terms = {}
        for coef, perms in classes.items():
            for text in perms:
                perm = SignedPermutation.parse(text)
                if perm in terms:
                    raise ValueError(f"{perm} listed twice")
                terms[perm] = coef
        parts[n] = AlgebraElement(n, terms)
    return GradedSeries(parts, 3)


def third_order_corollary_fixture() -> GradedSeries:
    """``Ω_R`` to degree 3, checked against the reference coefficient lists.

    Raises ``AssertionError`` on any discrepancy.
    """
    omega = omega_R(3)
    reference = corollary_series()
    for n in (1, 2, 3):
        if omega[n] != reference[n]:
            diff = omega[n] - reference[n]
            raise AssertionError(f"degree {n} differs from the reference list on {diff.support()}")
    return omega


def max_order(model: Model) -> int:
    return THEOREM_CAPS.get(model.dim, 0)


def lemma_symbols(k: int, tail: int = 1, regression_free: bool = False) -> list[CompositeSymbol]:
    """Composite symbols over all of B_k (or its regression-free part)."""
    heads = hyperoctahedral_group(k)
    if regression_free:
        heads = [s for s in heads if not regression_set(s)]
    return [CompositeSymbol(s, tail) for s in heads]
