"""Exact iterated integrals of polynomial operator matrices.

An iterated integral over the simplex ``x <= t_n <= ... <= t_1 <= t`` is
evaluated by multiplying out the integrand into multivariate monomials and
integrating each monomial exactly, innermost variable first.

Two encodings of such integrals are supported.  The angle form ``<s>`` of a
signed permutation places ``t_{s(p)}`` at integrand position ``p``, with
operator ``A`` (unbarred) or ``B`` (barred).  The bracket form lists, for
``t_1, t_2, ...`` in turn, the integrand position where it occurs and the
letter used there: ``a`` for A, ``b`` for B, ``h`` for H.  Written as text,
``1`` is an a-letter, ``-1`` a b-letter and ``^1`` an h-letter.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import AlgebraElement, as_fraction, convolve, shuffle
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
    poly_antiderivative,
    poly_eval,
    poly_mul,
    split_hamiltonian,
    zeros,
)
from .perms import PermutationError, SignedPermutation, inverse

#: Largest number of integration variables the oracle accepts.
MAX_LETTERS = 5
DEFAULT_WINDOW = (Fraction(-1), Fraction(0))

KINDS = ("a", "b", "h")
Letter = tuple[int, str]


# -- exact integrals of monomials -------------------------------------------


def simplex_monomial_integral(exponents: Sequence[int], x, t) -> Fraction:
    """``∫ prod_i t_i^{a_i}`` over ``x <= t_n <= ... <= t_1 <= t``."""
    x, t = as_fraction(x), as_fraction(t)
    if x > t:
        raise ValueError(f"empty window: lower {x} > upper {t}")
    if any(a < 0 for a in exponents):
        raise ValueError("exponents must be non-negative")
    return _simplex(tuple(exponents), x, t)


@lru_cache(maxsize=None)
def _simplex(exponents: tuple[int, ...], x: Fraction, t: Fraction) -> Fraction:
    inner = (Fraction(1),)
    for a in reversed(exponents):
        monomial = (Fraction(0),) * a + (Fraction(1),)
        inner = poly_antiderivative(poly_mul(monomial, inner), x)
    return poly_eval(inner, t)


def tree_monomial_integral(exponents: Sequence[int], parents: Sequence[int], x, t) -> Fraction:
    """Integral of a monomial over a domain ordered by a rooted forest.

    Variable ``j`` (1-based) ranges over ``[x, t_{parents[j-1]}]``, a parent
    of 0 meaning the upper bound ``t``.  Parents must precede their children.
    """
    x, t = as_fraction(x), as_fraction(t)
    if x > t:
        raise ValueError(f"empty window: lower {x} > upper {t}")
    parents = tuple(parents)
    if len(parents) != len(exponents) or any(not 0 <= p < j for j, p in enumerate(parents, start=1)):
        raise ValueError(f"invalid parent map {parents}")
    return _tree(tuple(exponents), parents, x, t)


@lru_cache(maxsize=None)
def _tree(exponents: tuple[int, ...], parents: tuple[int, ...], x: Fraction, t: Fraction) -> Fraction:
    n = len(exponents)
    # inner[j] accumulates the product of the children's antiderivatives
    inner = [(Fraction(1),)] * (n + 1)
    for j in range(n, 0, -1):
        monomial = (Fraction(0),) * exponents[j - 1] + (Fraction(1),)
        F = poly_antiderivative(poly_mul(monomial, inner[j]), x)
        inner[parents[j - 1]] = poly_mul(inner[parents[j - 1]], F)
    return poly_eval(inner[0], t)


def simplex_parents(n: int) -> tuple[int, ...]:
    return tuple(range(n))


# -- integrand expansion ----------------------------------------------------


def _expand_integrand(factors: Sequence[tuple[PolyOperator, int]], nvars: int):
    """Multiply out ``prod op(t_var)`` into a matrix of monomial dictionaries."""
    d = factors[0][0].dim
    zero = (0,) * nvars
    current = [[{zero: Fraction(1)} if i == j else {} for j in range(d)] for i in range(d)]
    for op, var in factors:
        if op.dim != d:
            raise ModelError("operators in one integrand must share a dimension")
        nxt = [[{} for _ in range(d)] for _ in range(d)]
        for i in range(d):
            for j in range(d):
                entry = current[i][j]
                if not entry:
                    continue
                for k in range(d):
                    p = op.entries[j][k]
                    if not p:
                        continue
                    target = nxt[i][k]
                    for exps, c in entry.items():
                        for power, a in enumerate(p):
                            if not a:
                                continue
                            e = list(exps)
                            e[var] += power
                            e = tuple(e)
                            target[e] = target.get(e, 0) + c * a
        current = nxt
    return current


def integrate_factors(factors: Sequence[tuple[PolyOperator, int]], x, t,
                      parents: Sequence[int] | None = None) -> Matrix:
    """Integrate ``prod op(t_var)`` (variables 0-based) over a simplex or forest domain."""
    n = len(factors)
    if n == 0:
        raise ValueError("empty integrand")
    if n > MAX_LETTERS:
        raise ModelError(f"{n} integration variables exceed cap {MAX_LETTERS}")
    if sorted(var for _, var in factors) != list(range(n)):
        raise ValueError("each variable must occur exactly once")
    for op, _ in factors:
        check_operator(op)
    x, t = as_fraction(x), as_fraction(t)
    expanded = _expand_integrand(factors, n)
    if parents is None:
        integral = lambda e: simplex_monomial_integral(e, x, t)  # noqa: E731
    else:
        parents = tuple(parents)
        integral = lambda e: tree_monomial_integral(e, parents, x, t)  # noqa: E731
    return tuple(
        tuple(sum((c * integral(e) for e, c in entry.items()), Fraction(0)) for entry in row)
        for row in expanded
    )


# -- descriptors ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class IntegralDescriptor:
    """A bracket word: ``letters[j]`` is ``(position, kind)`` for ``t_{j+1}``."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        letters = tuple((int(p), str(k)) for p, k in self.letters)
        if sorted(p for p, _ in letters) != list(range(1, len(letters) + 1)):
            raise PermutationError(f"positions of {letters} do not form a permutation")
        if any(k not in KINDS for _, k in letters):
            raise PermutationError(f"letter kinds must be among {KINDS}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def parse(cls, text: str) -> IntegralDescriptor:
        letters = []
        for tok in (tok for tok in re.split(r"[\s,]+", text.strip()) if tok):
            m = re.fullmatch(r"(\^|-)?(\d+)", tok)
            if not m:
                raise PermutationError(f"cannot parse bracket letter {tok!r}")
            kind = {"^": "h", "-": "b", None: "a"}[m.group(1)]
            letters.append((int(m.group(2)), kind))
        return cls(tuple(letters))

    def __str__(self) -> str:
        prefix = {"a": "", "b": "-", "h": "^"}
        return " ".join(f"{prefix[k]}{p}" for p, k in self.letters)

    @classmethod
    def from_perm(cls, s: SignedPermutation) -> IntegralDescriptor:
        """Bracket form of ``<s>``: the word ``s^-1(1), ..., s^-1(n)``."""
        inv = inverse(s)
        return cls(tuple((v, "b" if bar else "a") for v, bar in zip(inv.values, inv.bars)))

    def to_perm(self) -> SignedPermutation:
        if any(k == "h" for _, k in self.letters):
            raise PermutationError("expand h-letters before converting to a permutation")
        word = SignedPermutation(tuple(p for p, _ in self.letters), tuple(k == "b" for _, k in self.letters))
        return inverse(word)

    def expand_hats(self) -> Counter:
        """Rewrite each h-letter as ``a - b``; returns descriptor -> integer coefficient."""
        out: Counter = Counter({(): 1})
        for p, k in self.letters:
            step: Counter = Counter()
            for prefix, c in out.items():
                if k == "h":
                    step[prefix + ((p, "a"),)] += c
                    step[prefix + ((p, "b"),)] -= c
                else:
                    step[prefix + ((p, k),)] += c
            out = step
        return Counter({IntegralDescriptor(w): c for w, c in out.items() if c})


def all_hats(n: int) -> IntegralDescriptor:
    """The descriptor ``[^1, ..., ^n]`` of ``∫ H(t_1) ... H(t_n)``."""
    return IntegralDescriptor(tuple((p, "h") for p in range(1, n + 1)))


@dataclass(frozen=True)
class CompositeSymbol:
    """``<head; tail>``: a signed permutation followed by ``tail`` H-letters.

    The trailing variables form a chain hanging below ``t_{|head|(k)}``,
    where k is the degree of ``head``.
    """

    head: SignedPermutation
    tail: int

    def __post_init__(self):
        if self.head.degree < 1 or self.tail < 0:
            raise ValueError("composite symbols need a non-empty head and tail >= 0")

    @property
    def degree(self) -> int:
        return self.head.degree + self.tail

    def parents(self) -> tuple[int, ...]:
        k, n = self.head.degree, self.degree
        anchor = self.head.values[-1]
        return tuple(range(k)) + tuple(anchor if j == k + 1 else j - 1 for j in range(k + 1, n + 1))

    def bracket_expansion(self) -> Counter:
        """Shuffle expansion into bracket descriptors."""
        k, n = self.head.degree, self.degree
        inv = IntegralDescriptor.from_perm(self.head).letters
        i = self.head.values[-1]
        prefix, rest = inv[:i], inv[i:]
        hats = tuple((p, "h") for p in range(k + 1, n + 1))
        return Counter({IntegralDescriptor(prefix + w): c for w, c in shuffle(rest, hats).items()})


# -- evaluation maps --------------------------------------------------------


class ChenEvaluator:
    """Evaluates descriptors and group-algebra elements for fixed operators and window.

    ``ops`` maps letter kinds (``"a"``, ``"b"``, ``"h"``) to operators.
    Basis evaluations are cached.
    """

    def __init__(self, ops: Mapping[str, PolyOperator], lower=DEFAULT_WINDOW[0], upper=DEFAULT_WINDOW[1]):
        self.ops = dict(ops)
        dims = {op.dim for op in self.ops.values()}
        if len(dims) != 1:
            raise ModelError(f"operator dimensions differ: {sorted(dims)}")
        self.dim = dims.pop()
        self.lower, self.upper = as_fraction(lower), as_fraction(upper)
        if self.lower > self.upper:
            raise ValueError(f"empty window: lower {self.lower} > upper {self.upper}")
        self._perm_cache: dict[SignedPermutation, Matrix] = {}

    def _op(self, kind: str) -> PolyOperator:
        try:
            return self.ops[kind]
        except KeyError:
            raise ModelError(f"no operator supplied for letter {kind!r}") from None

    def perm(self, s: SignedPermutation) -> Matrix:
        cached = self._perm_cache.get(s)
        if cached is None:
            factors = [(self._op("b" if bar else "a"), v - 1) for v, bar in zip(s.values, s.bars)]
            cached = integrate_factors(factors, self.lower, self.upper)
            self._perm_cache[s] = cached
        return cached

    def angle(self, g: AlgebraElement) -> Matrix:
        if g.degree == 0:
            return mat_scale(identity(self.dim), g[SignedPermutation((), ())])
        total = zeros(self.dim)
        for s, c in g.terms.items():
            total = mat_add(total, mat_scale(self.perm(s), c))
        return total

    def bracket(self, d: IntegralDescriptor) -> Matrix:
        """Direct evaluation: each letter uses its own operator, h included."""
        by_position = sorted((p, j, k) for j, (p, k) in enumerate(d.letters))
        factors = [(self._op(k), j) for _, j, k in by_position]
        return integrate_factors(factors, self.lower, self.upper)

    def composite(self, c: CompositeSymbol) -> Matrix:
        """Evaluation over the chained domain, inner chain first."""
        head = c.head
        factors = [(self._op("b" if bar else "a"), v - 1) for v, bar in zip(head.values, head.bars)]
        factors += [(self._op("h"), j - 1) for j in range(head.degree + 1, c.degree + 1)]
        return integrate_factors(factors, self.lower, self.upper, parents=c.parents())


def model_evaluator(H: PolyOperator, P: Projector, lower=DEFAULT_WINDOW[0], upper=DEFAULT_WINDOW[1]) -> ChenEvaluator:
    A, B = split_hamiltonian(H, P)
    return ChenEvaluator({"a": A, "b": B, "h": H}, lower, upper)


def eval_angle(g: AlgebraElement, A: PolyOperator, B: PolyOperator, x=DEFAULT_WINDOW[0],
               t=DEFAULT_WINDOW[1]) -> Matrix:
    """``<g>``: linear extension of the iterated integral of each signed permutation."""
    return ChenEvaluator({"a": A, "b": B}, x, t).angle(g)


def eval_bracket_combination(combination: Mapping[IntegralDescriptor, object], evaluator: ChenEvaluator) -> Matrix:
    """Evaluate a combination of descriptors via hat expansion and the angle form."""
    total = zeros(evaluator.dim)
    for d, coef in combination.items():
        for pure, c in d.expand_hats().items():
            total = mat_add(total, mat_scale(evaluator.perm(pure.to_perm()), as_fraction(coef) * c))
    return total


def eval_bracket(d: IntegralDescriptor, H: PolyOperator, P: Projector, x=DEFAULT_WINDOW[0],
                 t=DEFAULT_WINDOW[1]) -> Matrix:
    """Bracket evaluation with ``A = (1-P)H``, ``B = -PH`` and ``^k = k - (-k)``."""
    return eval_bracket_combination({d: 1}, model_evaluator(H, P, x, t))


def eval_composite(c: CompositeSymbol | tuple[AlgebraElement, int], H: PolyOperator, P: Projector,
                   x=DEFAULT_WINDOW[0], t=DEFAULT_WINDOW[1]) -> Matrix:
    """``<head; tail>``; a ``(element, tail)`` pair is evaluated linearly."""
    ev = model_evaluator(H, P, x, t)
    return composite_value(c, ev)


def composite_value(c: CompositeSymbol | tuple[AlgebraElement, int], ev: ChenEvaluator) -> Matrix:
    if isinstance(c, CompositeSymbol):
        return ev.composite(c)
    element, tail = c
    if tail == 0:
        return ev.angle(element)
    total = zeros(ev.dim)
    for s, coef in element.terms.items():
        total = mat_add(total, mat_scale(ev.composite(CompositeSymbol(s, tail)), coef))
    return total


def lemma51_sides(c: CompositeSymbol, ev: ChenEvaluator) -> tuple[Matrix, Matrix]:
    return ev.composite(c), eval_bracket_combination(c.bracket_expansion(), ev)


def lemma51_check(c: CompositeSymbol, H: PolyOperator, P: Projector, x=DEFAULT_WINDOW[0],
                  t=DEFAULT_WINDOW[1]) -> bool:
    """Chained-domain integral versus its shuffle expansion into brackets."""
    lhs, rhs = lemma51_sides(c, model_evaluator(H, P, x, t))
    return lhs == rhs


def chen_product_sides(s: AlgebraElement, b: AlgebraElement, ev: ChenEvaluator) -> tuple[Matrix, Matrix]:
    return mat_mul(ev.angle(s), ev.angle(b)), ev.angle(convolve(s, b))


def chen_product_check(s: AlgebraElement, b: AlgebraElement, A: PolyOperator, B: PolyOperator,
                       x=DEFAULT_WINDOW[0], t=DEFAULT_WINDOW[1]) -> bool:
    """``<s> <b> == <s * b>`` as exact matrices."""
    lhs, rhs = chen_product_sides(s, b, ChenEvaluator({"a": A, "b": B}, x, t))
    return lhs == rhs


def positional_integral(perm: SignedPermutation, ops: Sequence[PolyOperator], x, t) -> Matrix:
    """``∫ ops[0](t_{perm(1)}) ... ops[n-1](t_{perm(n)})`` over the simplex."""
    if len(ops) != perm.degree:
        raise ValueError("need one operator per position")
    return integrate_factors([(op, v - 1) for op, v in zip(ops, perm.values)], x, t)


def general_chen_sides(alpha: SignedPermutation, beta: SignedPermutation, As: Sequence[PolyOperator],
                       Bs: Sequence[PolyOperator], x, t) -> tuple[Matrix, Matrix]:
    if not (alpha.is_unsigned and beta.is_unsigned):
        raise PermutationError("the positional Chen formula takes unsigned permutations")
    lhs = mat_mul(positional_integral(alpha, As, x, t), positional_integral(beta, Bs, x, t))
    product = convolve(AlgebraElement.basis(alpha), AlgebraElement.basis(beta))
    ops = list(As) + list(Bs)
    rhs = zeros(As[0].dim)
    for sigma, c in product.terms.items():
        rhs = mat_add(rhs, mat_scale(positional_integral(sigma, ops, x, t), c))
    return lhs, rhs


def general_chen_check(alpha: SignedPermutation, beta: SignedPermutation, As: Sequence[PolyOperator],
                       Bs: Sequence[PolyOperator], x=DEFAULT_WINDOW[0], t=DEFAULT_WINDOW[1]) -> bool:
    """``A_alpha B_beta == (AB)_{alpha * beta}`` with one operator per position."""
    lhs, rhs = general_chen_sides(alpha, beta, As, Bs, x, t)
    return lhs == rhs
