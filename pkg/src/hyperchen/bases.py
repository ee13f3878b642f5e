"""Regression and descent bases, Möbius inversion, and the Eulerian elements.

Three families of sums over a degree-n group are indexed by a subset S of
{1, ..., n-1}:

* ``R``: signed permutations whose regression set is exactly S;
* ``T``: signed permutations whose regression set is contained in S;
* ``D``: unsigned permutations whose descent set is contained in S.

The T and D families multiply by the same rule under convolution,
``X_S^n * X_U^m = X_{S ∪ {n} ∪ (U+n)}^{n+m}``, which makes ``T_S -> D_S``
an algebra isomorphism.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .algebra import (
    AlgebraElement,
    GradedSeries,
    check_degree,
    convolve,
    series_log,
)
from .perms import (
    SignedPermutation,
    descent_set,
    format_subset,
    hyperoctahedral_group,
    regression_set,
    subsets,
    symmetric_group,
)

FAMILIES = ("R", "T", "D")


@dataclass(frozen=True, order=True)
class BasisId:
    family: str
    n: int
    S: frozenset[int] = frozenset()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 0:
            raise ValueError("degree must be non-negative")
        S = frozenset(self.S)
        if any(not 1 <= i <= self.n - 1 for i in S):
            raise ValueError(f"{sorted(S)} is not a subset of [1, {self.n - 1}]")
        object.__setattr__(self, "S", S)

    def __str__(self) -> str:
        return f"{self.family}^{self.n}_{{{format_subset(self.S)}}}"

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "S": sorted(self.S)}

    @classmethod
    def from_json(cls, data: Mapping) -> BasisId:
        return cls(data["family"], int(data["n"]), frozenset(data["S"]))


@lru_cache(maxsize=None)
def regression_classes(n: int) -> dict[frozenset[int], tuple[SignedPermutation, ...]]:
    """Partition of B_n by regression set."""
    classes: dict[frozenset[int], list[SignedPermutation]] = defaultdict(list)
    for s in hyperoctahedral_group(n):
        classes[regression_set(s)].append(s)
    return {S: tuple(perms) for S, perms in classes.items()}


@lru_cache(maxsize=None)
def descent_classes(n: int) -> dict[frozenset[int], tuple[SignedPermutation, ...]]:
    classes: dict[frozenset[int], list[SignedPermutation]] = defaultdict(list)
    for s in symmetric_group(n):
        classes[descent_set(s)].append(s)
    return {S: tuple(perms) for S, perms in classes.items()}


def expand_basis(basis_id: BasisId, extended: bool = False) -> AlgebraElement:
    """Expansion of an R, T or D element in the canonical basis."""
    n, S = basis_id.n, basis_id.S
    check_degree(n, extended)
    if basis_id.family == "R":
        perms = regression_classes(n).get(S, ())
    elif basis_id.family == "T":
        classes = regression_classes(n)
        perms = [p for U in subsets(n) if U <= S for p in classes.get(U, ())]
    else:
        classes = descent_classes(n)
        perms = [p for U in subsets(n) if U <= S for p in classes.get(U, ())]
    return AlgebraElement.from_sum(n, perms)


def expand_combination(combination: Mapping[BasisId, object], extended: bool = False) -> AlgebraElement:
    """Expand a linear combination of basis ids (all of one degree)."""
    degrees = {b.n for b in combination}
    if len(degrees) != 1:
        raise ValueError("combination must be homogeneous and non-empty")
    total = AlgebraElement.zero(degrees.pop())
    for basis_id, coef in combination.items():
        total = total + expand_basis(basis_id, extended).scale(coef)
    return total


def R(n: int, S: Iterable[int] = ()) -> AlgebraElement:
    return expand_basis(BasisId("R", n, frozenset(S)))


def T(n: int, S: Iterable[int] = ()) -> AlgebraElement:
    return expand_basis(BasisId("T", n, frozenset(S)))


def D(n: int, S: Iterable[int] = ()) -> AlgebraElement:
    return expand_basis(BasisId("D", n, frozenset(S)))


# -- Möbius inversion -------------------------------------------------------


def T_from_R(n: int, S: Iterable[int]) -> dict[BasisId, int]:
    """``T_S = sum_{U ⊆ S} R_U``."""
    S = frozenset(S)
    return {BasisId("R", n, U): 1 for U in subsets(n) if U <= S}


def mobius_R_from_T(n: int, S: Iterable[int]) -> dict[BasisId, int]:
    """``R_S = sum_{U ⊆ S} (-1)^{|S|-|U|} T_U``."""
    S = frozenset(S)
    return {BasisId("T", n, U): (-1) ** (len(S) - len(U)) for U in subsets(n) if U <= S}


def substitute(combination: Mapping[BasisId, object], rule) -> dict[BasisId, Fraction]:
    """Rewrite each id of ``combination`` through ``rule(n, S)`` and collect."""
    out: dict[BasisId, Fraction] = defaultdict(Fraction)
    for basis_id, coef in combination.items():
        for target, c in rule(basis_id.n, basis_id.S).items():
            out[target] += Fraction(coef) * c
    return {k: v for k, v in out.items() if v}


def decompose(x: AlgebraElement, family: str) -> dict[BasisId, Fraction] | None:
    """Coordinates of ``x`` in the R, T or D family, or None if outside the span."""
    n = x.degree
    if family == "D":
        classes = descent_classes(n)
    else:
        classes = regression_classes(n)
    covered = 0
    r_coords: dict[BasisId, Fraction] = {}
    for S, perms in classes.items():
        values = {x[p] for p in perms}
        if len(values) != 1:
            return None
        (value,) = values
        if value:
            covered += len(perms)
            r_coords[BasisId("D" if family == "D" else "R", n, S)] = value
    if covered != len(x):
        return None
    if family == "R":
        return r_coords
    # class sums -> containment sums by Möbius inversion
    out: dict[BasisId, Fraction] = defaultdict(Fraction)
    target = "D" if family == "D" else "T"
    for basis_id, coef in r_coords.items():
        for V in subsets(n):
            if V <= basis_id.S:
                out[BasisId(target, n, V)] += coef * (-1) ** (len(basis_id.S) - len(V))
    return {k: v for k, v in out.items() if v}


# -- product rules ----------------------------------------------------------


def _glue(nS: tuple[int, Iterable[int]], mU: tuple[int, Iterable[int]]) -> tuple[int, frozenset[int]]:
    (n, S), (m, U) = nS, mU
    S, U = frozenset(S), frozenset(U)
    if n == 0:
        return m, U
    if m == 0:
        return n, S
    return n + m, S | {n} | frozenset(u + n for u in U)


def t_product_rule(nS: tuple[int, Iterable[int]], mU: tuple[int, Iterable[int]]) -> BasisId:
    """``T_S^n * T_U^m = T^{n+m}_{S ∪ {n} ∪ (U+n)}``."""
    return BasisId("T", *_glue(nS, mU))


def descent_algebra_product(nS: tuple[int, Iterable[int]], mU: tuple[int, Iterable[int]]) -> BasisId:
    """``D_S^n * D_U^m = D^{n+m}_{S ∪ {n} ∪ (U+n)}``."""
    return BasisId("D", *_glue(nS, mU))


def basis_pairs(max_total: int, min_degree: int = 1):
    """All pairs ((n, S), (m, U)) with ``n + m <= max_total``."""
    for total in range(2 * min_degree, max_total + 1):
        for n in range(min_degree, total - min_degree + 1):
            m = total - n
            for S in subsets(n):
                for U in subsets(m):
                    yield (n, S), (m, U)


def structure_table(family: str, max_total: int) -> dict:
    """Products of basis elements by full expansion, written back in the family.

    Maps ``((n, S), (m, U))`` to the coordinates of the product (None when
    the product leaves the span).
    """
    if family not in ("T", "D"):
        raise ValueError("structure tables are computed for T and D")
    table = {}
    for (n, S), (m, U) in basis_pairs(max_total):
        x = expand_basis(BasisId(family, n, S))
        y = expand_basis(BasisId(family, m, U))
        coords = decompose(convolve(x, y), family)
        table[(n, S), (m, U)] = None if coords is None else {(b.n, b.S): c for b, c in coords.items()}
    return table


def regression_descent_iso_check(max_n: int) -> bool:
    """True iff ``T_S -> D_S`` intertwines the convolution products up to total degree ``max_n``."""
    t_table = structure_table("T", max_n)
    d_table = structure_table("D", max_n)
    return all(v is not None for v in t_table.values()) and t_table == d_table


# -- Eulerian idempotents and the regression logarithm ----------------------


def _eulerian_coefficient(n: int, k: int) -> Fraction:
    return Fraction((-1) ** k, n * math.comb(n - 1, k))


def solomon_idempotent(n: int, method: str = "descent") -> AlgebraElement:
    """Solomon's Eulerian idempotent in Q[S_n].

    ``method`` selects the formula: ``"descent"`` sums
    ``(-1)^|S|/(|S|+1) D_S``; ``"canonical"`` weights each permutation by
    its descent set; ``"log"`` takes the degree-n part of
    ``log(sum_k D_∅^k)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    check_degree(n)
    if method == "descent":
        return expand_combination(
            {BasisId("D", n, S): Fraction((-1) ** len(S), len(S) + 1) for S in subsets(n)}
        )
    if method == "canonical":
        return AlgebraElement(
            n, {s: _eulerian_coefficient(n, len(descent_set(s))) for s in symmetric_group(n)}
        )
    if method == "log":
        D_empty = GradedSeries({k: D(k) for k in range(n + 1)}, n)
        return series_log(D_empty)[n]
    raise ValueError(f"unknown method {method!r}")


def omega_coefficients(n: int) -> dict[BasisId, Fraction]:
    """Degree-n part of the regression logarithm in the T family."""
    return {BasisId("T", n, S): Fraction((-1) ** len(S), len(S) + 1) for S in subsets(n)}


def omega_R(max_n: int, basis: str = "T") -> GradedSeries:
    """``log(sum_n R_∅^n)`` truncated at ``max_n``, computed from a closed formula.

    ``basis="T"`` sums ``(-1)^|S|/(|S|+1) T_S^n``; ``basis="canonical"``
    weights each signed permutation by its regression set with
    ``(-1)^|S| / (n * C(n-1, |S|))``.
    """
    check_degree(max_n)
    parts = {}
    for n in range(1, max_n + 1):
        if basis == "T":
            parts[n] = expand_combination(omega_coefficients(n))
        elif basis == "canonical":
            parts[n] = AlgebraElement(
                n,
                {
                    s: _eulerian_coefficient(n, len(S))
                    for S, perms in regression_classes(n).items()
                    for s in perms
                },
            )
        else:
            raise ValueError(f"unknown basis {basis!r}")
    return GradedSeries(parts, max_n)


def pic_series(max_n: int) -> GradedSeries:
    """``Pic = sum_n R_∅^n`` with the unit in degree 0."""
    return GradedSeries({n: R(n) for n in range(max_n + 1)}, max_n)
