"""Sparse graded algebra on the direct sum of the group algebras Q[B_n].

Elements are homogeneous: an :class:`AlgebraElement` carries one degree and
a map from signed permutations to exact rationals.  ``x * y`` is the
convolution product (degrees add); :func:`internal_product` is the group
algebra product inside a single Q[B_n].  A :class:`GradedSeries` is a
truncated sum of homogeneous pieces, used for the formal log and exp.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .perms import PermutationError, SignedPermutation, compose, inverse

#: Truncation bound for series and full expansions.
MAX_DEGREE = 6
#: Largest degree reachable with ``extended=True``.
EXTENDED_MAX_DEGREE = 7


class DegreeCapError(ValueError):
    """Raised when a requested degree exceeds the configured cap."""


def check_degree(n: int, extended: bool = False) -> None:
    cap = EXTENDED_MAX_DEGREE if extended else MAX_DEGREE
    if n > cap:
        hint = "" if extended else " (pass extended=True to allow degree 7)"
        raise DegreeCapError(f"degree {n} exceeds cap {cap}{hint}")


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    """Canonical ``p/q`` form; integers are written ``p/1``."""
    return f"{q.numerator}/{q.denominator}"


class AlgebraElement:
    """A homogeneous element ``sum c_s * s`` of Q[B_n]."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[SignedPermutation, object] | None = None):
        self.degree = degree
        clean: dict[SignedPermutation, Fraction] = {}
        for perm, coef in (terms or {}).items():
            if perm.degree != degree:
                raise PermutationError(f"{perm} does not have degree {degree}")
            coef = as_fraction(coef)
            if coef:
                clean[perm] = coef
        self.terms = clean

    @classmethod
    def basis(cls, perm: SignedPermutation, coef=1) -> AlgebraElement:
        return cls(perm.degree, {perm: coef})

    @classmethod
    def unit(cls) -> AlgebraElement:
        return cls.basis(SignedPermutation((), ()))

    @classmethod
    def zero(cls, degree: int) -> AlgebraElement:
        return cls(degree)

    @classmethod
    def from_sum(cls, degree: int, perms: Iterable[SignedPermutation], coef=1) -> AlgebraElement:
        coef = as_fraction(coef)
        return cls._raw(degree, {p: coef for p in perms} if coef else {})

    @classmethod
    def _raw(cls, degree: int, terms: dict) -> AlgebraElement:
        # trusted constructor: terms already nonzero Fractions of the right degree
        obj = cls.__new__(cls)
        obj.degree = degree
        obj.terms = terms
        return obj

    def __iter__(self) -> Iterator[tuple[SignedPermutation, Fraction]]:
        return iter(sorted(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, perm: SignedPermutation) -> Fraction:
        return self.terms.get(perm, Fraction(0))

    def support(self) -> list[SignedPermutation]:
        return sorted(self.terms)

    @property
    def is_unsigned(self) -> bool:
        return all(p.is_unsigned for p in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"AlgebraElement({self.degree}, 0)"
        body = " + ".join(f"{format_fraction(c)}*({p})" for p, c in self)
        return f"AlgebraElement({self.degree}, {body})"

    def _combine(self, other: AlgebraElement, sign: int) -> AlgebraElement:
        if self.degree != other.degree:
            raise PermutationError(f"degree mismatch: {self.degree} != {other.degree}")
        terms = dict(self.terms)
        for perm, coef in other.terms.items():
            value = terms.get(perm, 0) + sign * coef
            if value:
                terms[perm] = value
            else:
                terms.pop(perm, None)
        return AlgebraElement._raw(self.degree, terms)

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement._raw(self.degree, {p: -c for p, c in self.terms.items()})

    def scale(self, factor) -> AlgebraElement:
        factor = as_fraction(factor)
        if not factor:
            return AlgebraElement.zero(self.degree)
        return AlgebraElement._raw(self.degree, {p: c * factor for p, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [{"perm": str(p), "coef": format_fraction(c)} for p, c in self],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> AlgebraElement:
        degree = int(data["degree"])
        terms: dict[SignedPermutation, Fraction] = {}
        for term in data["terms"]:
            perm = SignedPermutation.parse(term["perm"])
            if perm in terms:
                raise ValueError(f"duplicate term {perm}")
            terms[perm] = Fraction(term["coef"])
        return cls(degree, terms)


@lru_cache(maxsize=None)
def _splittings(n: int, m: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Ways to split 1..n+m into an n-set and its complement, both sorted."""
    ground = range(1, n + m + 1)
    out = []
    for first in itertools.combinations(ground, n):
        chosen = set(first)
        out.append((first, tuple(v for v in ground if v not in chosen)))
    return tuple(out)


def convolve_basis(s: SignedPermutation, b: SignedPermutation) -> list[SignedPermutation]:
    """The C(n+m, n) signed permutations making up ``s * b``."""
    bars = s.bars + b.bars
    out = []
    for first, second in _splittings(s.degree, b.degree):
        values = tuple(first[v - 1] for v in s.values) + tuple(second[v - 1] for v in b.values)
        out.append(SignedPermutation._make(values, bars))
    return out


def convolve(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Convolution product; bilinear extension of :func:`convolve_basis`."""
    terms: dict[SignedPermutation, Fraction] = {}
    get = terms.get
    for s, cs in x.terms.items():
        for b, cb in y.terms.items():
            c = cs * cb
            for tau in convolve_basis(s, b):
                terms[tau] = get(tau, 0) + c
    return AlgebraElement._raw(x.degree + y.degree, {p: c for p, c in terms.items() if c})


def internal_product(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Product in the group algebra Q[B_n]: bilinear extension of ``compose``."""
    if x.degree != y.degree:
        raise PermutationError(f"degree mismatch: {x.degree} != {y.degree}")
    terms: dict[SignedPermutation, Fraction] = {}
    for s, cs in x.terms.items():
        for b, cb in y.terms.items():
            p = compose(s, b)
            terms[p] = terms.get(p, 0) + cs * cb
    return AlgebraElement(x.degree, terms)


def identity_element(n: int) -> AlgebraElement:
    return AlgebraElement.basis(SignedPermutation.identity(n))


# -- shuffles ---------------------------------------------------------------

Word = tuple


def shuffle(u: Sequence[Hashable], v: Sequence[Hashable]) -> Counter:
    """Shuffle product of two words, as a multiset of words.

    Uses ``au ⧢ bv = a(u ⧢ bv) + b(au ⧢ v)``.
    """
    return Counter(_shuffle(tuple(u), tuple(v)))


@lru_cache(maxsize=4096)
def _shuffle(u: tuple, v: tuple) -> tuple[tuple, ...]:
    if not u:
        return (v,)
    if not v:
        return (u,)
    left = tuple((u[0],) + w for w in _shuffle(u[1:], v))
    right = tuple((v[0],) + w for w in _shuffle(u, v[1:]))
    return left + right


def shuffle_by_insertion(u: Sequence[Hashable], v: Sequence[Hashable]) -> Counter:
    """Shuffle via ``a_1..a_k ⧢ b v' = sum_i a_1..a_i b (a_{i+1}..a_k ⧢ v')``."""
    u, v = tuple(u), tuple(v)
    if not v:
        return Counter([u])
    out: Counter = Counter()
    b, rest = v[0], v[1:]
    for i in range(len(u) + 1):
        head = u[:i] + (b,)
        for w, mult in shuffle_by_insertion(u[i:], rest).items():
            out[head + w] += mult
    return out


def shuffle_convolution_relation_check(s: SignedPermutation, b: SignedPermutation) -> bool:
    """Check ``s^-1 * b^-1 == (s ⧢ b[n])^-1``; bars travel with their letters."""
    n = s.degree
    left = convolve(AlgebraElement.basis(inverse(s)), AlgebraElement.basis(inverse(b)))
    u = tuple(zip(s.values, s.bars))
    v = tuple((value + n, bar) for value, bar in zip(b.values, b.bars))
    terms: Counter = Counter()
    for word, mult in shuffle(u, v).items():
        perm = SignedPermutation(tuple(x for x, _ in word), tuple(bar for _, bar in word))
        terms[inverse(perm)] += mult
    right = AlgebraElement(n + b.degree, terms)
    return left == right


# -- graded series ----------------------------------------------------------


class GradedSeries:
    """A truncated formal series ``sum_{n <= max_degree} x_n``."""

    def __init__(self, parts: Mapping[int, AlgebraElement] | None = None, max_degree: int = MAX_DEGREE,
                 extended: bool = False):
        check_degree(max_degree, extended)
        self.max_degree = max_degree
        self.parts: dict[int, AlgebraElement] = {}
        for n, x in (parts or {}).items():
            if x.degree != n:
                raise ValueError(f"part stored at degree {n} has degree {x.degree}")
            if n <= max_degree and x:
                self.parts[n] = x

    def __getitem__(self, n: int) -> AlgebraElement:
        return self.parts.get(n, AlgebraElement.zero(n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedSeries):
            return NotImplemented
        top = min(self.max_degree, other.max_degree)
        return all(self[n] == other[n] for n in range(top + 1))

    def __repr__(self) -> str:
        return f"GradedSeries(degrees={sorted(self.parts)}, max_degree={self.max_degree})"

    @property
    def constant(self) -> Fraction:
        return self[0][SignedPermutation((), ())]

    def truncate(self, N: int) -> GradedSeries:
        return GradedSeries({n: x for n, x in self.parts.items() if n <= N}, min(N, self.max_degree))

    def __add__(self, other: GradedSeries) -> GradedSeries:
        N = min(self.max_degree, other.max_degree)
        return GradedSeries({n: self[n] + other[n] for n in range(N + 1)}, N)

    def __sub__(self, other: GradedSeries) -> GradedSeries:
        N = min(self.max_degree, other.max_degree)
        return GradedSeries({n: self[n] - other[n] for n in range(N + 1)}, N)

    def scale(self, factor) -> GradedSeries:
        return GradedSeries({n: x.scale(factor) for n, x in self.parts.items()}, self.max_degree)

    @classmethod
    def one(cls, max_degree: int = MAX_DEGREE) -> GradedSeries:
        return cls({0: AlgebraElement.unit()}, max_degree)

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "parts": [self[n].to_json() for n in range(self.max_degree + 1)],
        }


def series_multiply(X: GradedSeries, Y: GradedSeries, N: int | None = None) -> GradedSeries:
    """Cauchy product truncated at degree ``N``."""
    if N is None:
        N = min(X.max_degree, Y.max_degree)
    parts: dict[int, AlgebraElement] = {}
    for n in range(N + 1):
        acc = AlgebraElement.zero(n)
        for i in range(n + 1):
            x, y = X.parts.get(i), Y.parts.get(n - i)
            if x and y:
                acc = acc + convolve(x, y)
        parts[n] = acc
    return GradedSeries(parts, N)


def _powers(Y: GradedSeries, N: int) -> Iterator[tuple[int, GradedSeries]]:
    power = Y.truncate(N)
    for k in range(1, N + 1):
        yield k, power
        power = series_multiply(power, Y, N)


def series_log(X: GradedSeries, N: int | None = None) -> GradedSeries:
    """Formal logarithm of a series with constant term 1."""
    if X.constant != 1:
        raise ValueError("series_log needs constant term 1")
    N = X.max_degree if N is None else N
    Y = X - GradedSeries.one(X.max_degree)
    result = GradedSeries({}, N)
    for k, power in _powers(Y, N):
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
    return result


def series_exp(Y: GradedSeries, N: int | None = None) -> GradedSeries:
    """Formal exponential of a series with constant term 0."""
    if Y.constant != 0:
        raise ValueError("series_exp needs constant term 0")
    N = Y.max_degree if N is None else N
    result = GradedSeries.one(N)
    for k, power in _powers(Y, N):
        result = result + power.scale(Fraction(1, math.factorial(k)))
    return result


def identity_series(N: int = MAX_DEGREE) -> GradedSeries:
    """The series ``I = sum_n (1, ..., n)``."""
    return GradedSeries({n: identity_element(n) for n in range(N + 1)}, N)
