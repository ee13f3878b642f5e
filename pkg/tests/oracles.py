"""Slow reference implementations written independently of the library code."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial


def signed_words(n):
    """All signed permutations of 1..n as plain tuples of nonzero ints."""
    for perm in permutations(range(1, n + 1)):
        for signs in product((1, -1), repeat=n):
            yield tuple(s * v for s, v in zip(signs, perm))


def std(word):
    """Relative order of |entries|, signs kept in place."""
    ranks = {v: i + 1 for i, v in enumerate(sorted(abs(x) for x in word))}
    return tuple(ranks[abs(x)] * (1 if x > 0 else -1) for x in word)


def brute_convolution(s, b):
    """Filter all of B_{n+m} by standardized prefix and suffix."""
    n = len(s)
    return sorted(w for w in signed_words(n + len(b)) if std(w[:n]) == s and std(w[n:]) == b)


def regressions(w):
    # Position i is a regression when the step w_i -> w_{i+1} goes "the wrong way"
    # for the bar on w_{i+1}: up onto a barred letter, or down onto an unbarred one.
    out = set()
    for i in range(len(w) - 1):
        up = abs(w[i]) < abs(w[i + 1])
        if up == (w[i + 1] < 0):
            out.add(i + 1)
    return frozenset(out)


def regression_class(n, S):
    return sorted(w for w in signed_words(n) if regressions(w) == frozenset(S))


def simplex_integral_closed_form(exponents, x, t):
    """Integral of prod t_i^{e_i} over x < t_n < ... < t_1 < t.

    Shifting u_i = t_i - x moves the window to [0, t - x], where each monomial
    has the closed form L^N / prod_j (sum_{i >= j} (a_i + 1)).
    """
    x, t = Fraction(x), Fraction(t)
    L = t - x
    n = len(exponents)
    total = Fraction(0)
    for ks in product(*(range(e + 1) for e in exponents)):
        coef = Fraction(1)
        for e, k in zip(exponents, ks):
            coef *= comb(e, k) * x ** (e - k)
        denom, tail = 1, 0
        for j in reversed(range(n)):
            tail += ks[j] + 1
            denom *= tail
        total += coef * L ** tail / denom if n else coef
    return total


def nested_angle(perm, A, B, x, t):
    """<perm> for matrices of polynomials given as coefficient tuples.

    The integrand at position p is A or B (barred) evaluated at t_{|perm(p)|};
    the matrix product is expanded into monomials and each one integrated by
    the closed form above.
    """
    n = len(perm)
    d = len(A)
    out = [[Fraction(0)] * d for _ in range(d)]
    ops = [B if v < 0 else A for v in perm]
    for i in range(d):
        for j in range(d):
            # walk all index chains i = k0, k1, ..., kn = j
            for chain in product(range(d), repeat=n - 1):
                idx = (i,) + chain + (j,)
                polys = [ops[p][idx[p]][idx[p + 1]] for p in range(n)]
                for powers in product(*(range(len(q)) for q in polys)):
                    c = Fraction(1)
                    for q, k in zip(polys, powers):
                        c *= q[k]
                    if not c:
                        continue
                    exps = [0] * n
                    for p, k in enumerate(powers):
                        exps[abs(perm[p]) - 1] += k
                    out[i][j] += c * simplex_integral_closed_form(exps, x, t)
    return out


def eulerian_count(n):
    return 2 * factorial(n)


def binomial(n, k):
    return comb(n, k)


def counter_of(words):
    return Counter(tuple(w) for w in words)
