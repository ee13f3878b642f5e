"""Exact rational matrices, univariate polynomials, and polynomial operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import as_fraction, format_fraction

Matrix = tuple[tuple[Fraction, ...], ...]
Poly = tuple[Fraction, ...]

#: Limits on the operators accepted by the integral oracle.
MAX_DIM = 3
MAX_POLY_DEGREE = 2


class ModelError(ValueError):
    """Raised for malformed operators, projectors, or model files."""


# -- matrices ---------------------------------------------------------------


def zeros(d: int) -> Matrix:
    return tuple((Fraction(0),) * d for _ in range(d))


def identity(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def mat_sum(mats: Iterable[Matrix], d: int) -> Matrix:
    total = zeros(d)
    for m in mats:
        total = mat_add(total, m)
    return total


def mat_to_json(a: Matrix) -> list[list[str]]:
    return [[format_fraction(x) for x in row] for row in a]


# -- polynomials ------------------------------------------------------------


def poly(coefs: Iterable) -> Poly:
    out = [as_fraction(c) for c in coefs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def poly_eval(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_antiderivative(p: Poly, lower: Fraction) -> Poly:
    """The antiderivative of ``p`` vanishing at ``lower``."""
    if not p:
        return ()
    integral = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(p)]
    integral[0] = -poly_eval(tuple(integral), lower)
    return poly(integral)


def parse_poly(text: str) -> Poly:
    text = text.strip()
    if not text:
        return ()
    try:
        return poly(Fraction(tok.strip()) for tok in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"cannot parse polynomial {text!r}") from exc


def format_poly(p: Poly) -> str:
    return ",".join(format_fraction(c) for c in p) if p else "0/1"


# -- operators --------------------------------------------------------------


@dataclass(frozen=True)
class PolyOperator:
    """A square matrix of univariate polynomials in t."""

    entries: tuple[tuple[Poly, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(poly(p) for p in row) for row in self.entries)
        d = len(rows)
        if any(len(row) != d for row in rows):
            raise ModelError("operator must be square")
        object.__setattr__(self, "entries", rows)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def poly_degree(self) -> int:
        return max((len(p) - 1 for row in self.entries for p in row), default=-1)

    @classmethod
    def constant(cls, m: Sequence[Sequence]) -> PolyOperator:
        return cls(tuple(tuple((as_fraction(v),) for v in row) for row in m))

    @classmethod
    def scalar(cls, p: Iterable) -> PolyOperator:
        return cls(((poly(p),),))

    def __call__(self, t) -> Matrix:
        t = as_fraction(t)
        return tuple(tuple(poly_eval(p, t) for p in row) for row in self.entries)

    def left_multiply(self, m: Matrix) -> PolyOperator:
        """The operator ``m @ self`` for a constant matrix ``m``."""
        d = self.dim
        return PolyOperator(tuple(
            tuple(
                _poly_sum(poly_mul((m[i][k],), self.entries[k][j]) for k in range(d))
                for j in range(d)
            )
            for i in range(d)
        ))

    def __add__(self, other: PolyOperator) -> PolyOperator:
        return PolyOperator(tuple(
            tuple(poly_add(p, q) for p, q in zip(ra, rb)) for ra, rb in zip(self.entries, other.entries)
        ))

    def __neg__(self) -> PolyOperator:
        return PolyOperator(tuple(tuple(poly(-c for c in p) for p in row) for row in self.entries))

    def __sub__(self, other: PolyOperator) -> PolyOperator:
        return self + (-other)

    def to_json(self) -> list[list[str]]:
        return [[format_poly(p) for p in row] for row in self.entries]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]]) -> PolyOperator:
        return cls(tuple(tuple(parse_poly(s) for s in row) for row in rows))


def _poly_sum(polys: Iterable[Poly]) -> Poly:
    total: Poly = ()
    for p in polys:
        total = poly_add(total, p)
    return total


@dataclass(frozen=True)
class Projector:
    """A diagonal 0/1 projector."""

    diagonal: tuple[int, ...]

    def __post_init__(self):
        diag = tuple(int(v) for v in self.diagonal)
        if any(v not in (0, 1) for v in diag):
            raise ModelError("projector diagonal must be 0/1")
        object.__setattr__(self, "diagonal", diag)

    @property
    def dim(self) -> int:
        return len(self.diagonal)

    def matrix(self) -> Matrix:
        d = self.dim
        return tuple(tuple(Fraction(self.diagonal[i] if i == j else 0) for j in range(d)) for i in range(d))

    def complement(self) -> Matrix:
        return mat_sub(identity(self.dim), self.matrix())


def check_operator(op: PolyOperator) -> None:
    if op.dim > MAX_DIM:
        raise ModelError(f"dimension {op.dim} exceeds cap {MAX_DIM}")
    if op.poly_degree > MAX_POLY_DEGREE:
        raise ModelError(f"polynomial degree {op.poly_degree} exceeds cap {MAX_POLY_DEGREE}")


def split_hamiltonian(H: PolyOperator, P: Projector) -> tuple[PolyOperator, PolyOperator]:
    """``A = (1 - P) H`` and ``B = -P H``, so that ``H = A - B``."""
    if H.dim != P.dim:
        raise ModelError(f"H has dimension {H.dim} but P has {P.dim}")
    A = H.left_multiply(P.complement())
    B = -H.left_multiply(P.matrix())
    return A, B
