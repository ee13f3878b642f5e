"""Signed permutations (elements of the hyperoctahedral group B_n).

A signed permutation is stored in one-line notation as the underlying
permutation ``values`` together with a parallel tuple of ``bars``.  The
unsigned symmetric group S_n is the sub-case where no bar is set.

Text form: integers separated by spaces or commas, a minus sign marking a
bar, so ``"2 -3 1"`` is (2, 3̄, 1).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class PermutationError(ValueError):
    """Raised for malformed permutations or incompatible degrees."""


@dataclass(frozen=True, order=True)
class SignedPermutation:
    values: tuple[int, ...]
    bars: tuple[bool, ...]

    def __post_init__(self):
        values = tuple(int(v) for v in self.values)
        bars = tuple(bool(b) for b in self.bars)
        if len(values) != len(bars):
            raise PermutationError("values and bars differ in length")
        if sorted(values) != list(range(1, len(values) + 1)):
            raise PermutationError(f"{values} is not a permutation of 1..{len(values)}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bars", bars)

    @classmethod
    def from_signed(cls, seq: Iterable[int]) -> SignedPermutation:
        """Build from a sequence where a negative entry means a barred letter."""
        seq = list(seq)
        if any(v == 0 for v in seq):
            raise PermutationError("0 is not a valid letter")
        return cls(tuple(abs(v) for v in seq), tuple(v < 0 for v in seq))

    @classmethod
    def unsigned(cls, values: Iterable[int]) -> SignedPermutation:
        values = tuple(values)
        return cls(values, (False,) * len(values))

    @classmethod
    def _make(cls, values: tuple[int, ...], bars: tuple[bool, ...]) -> SignedPermutation:
        # skips validation; callers guarantee a valid permutation
        obj = object.__new__(cls)
        object.__setattr__(obj, "values", values)
        object.__setattr__(obj, "bars", bars)
        return obj

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls(tuple(range(1, n + 1)), (False,) * n)

    @classmethod
    def parse(cls, text: str) -> SignedPermutation:
        tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
        try:
            seq = [int(tok) for tok in tokens]
        except ValueError as exc:
            raise PermutationError(f"cannot parse permutation {text!r}") from exc
        return cls.from_signed(seq)

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.signed())

    def __repr__(self) -> str:
        return f"SignedPermutation({str(self)!r})"

    def __len__(self) -> int:
        return len(self.values)

    @property
    def degree(self) -> int:
        return len(self.values)

    @property
    def is_unsigned(self) -> bool:
        return not any(self.bars)

    def signed(self) -> tuple[int, ...]:
        return tuple(-v if b else v for v, b in zip(self.values, self.bars))

    def erase_bars(self) -> SignedPermutation:
        return SignedPermutation.unsigned(self.values)

    def __call__(self, i: int) -> int:
        """Signed image of position ``i`` (1-based); negative means barred."""
        v = self.values[i - 1]
        return -v if self.bars[i - 1] else v


def compose(b: SignedPermutation, s: SignedPermutation) -> SignedPermutation:
    """The group law ``b ∘ s`` of B_n.

    Underlying permutations compose as maps; the bar at position ``i`` is the
    bar of ``s`` at ``i`` flipped by the bar of ``b`` at ``|s(i)|``.
    """
    if b.degree != s.degree:
        raise PermutationError(f"degree mismatch: {b.degree} != {s.degree}")
    values = tuple(b.values[v - 1] for v in s.values)
    bars = tuple(sb ^ b.bars[v - 1] for v, sb in zip(s.values, s.bars))
    return SignedPermutation(values, bars)


def inverse(s: SignedPermutation) -> SignedPermutation:
    n = s.degree
    values = [0] * n
    bars = [False] * n
    for i, (v, bar) in enumerate(zip(s.values, s.bars), start=1):
        values[v - 1] = i
        bars[v - 1] = bar
    return SignedPermutation(tuple(values), tuple(bars))


def standardize(word: Sequence[int], ties: str = "reject") -> SignedPermutation:
    """Standardize a decorated integer sequence (negative entries are barred).

    Each entry is replaced by the rank of its absolute value; bars stay at
    their positions.  Repeated absolute values raise unless ``ties="stable"``,
    in which case earlier occurrences rank lower.
    """
    if ties not in ("reject", "stable"):
        raise ValueError(f"unknown tie rule {ties!r}")
    absolute = [abs(w) for w in word]
    if any(a == 0 for a in absolute):
        raise PermutationError("0 is not a valid letter")
    if ties == "reject" and len(set(absolute)) != len(absolute):
        raise PermutationError(f"repeated entries in {tuple(word)}")
    order = sorted(range(len(absolute)), key=lambda p: (absolute[p], p))
    values = [0] * len(absolute)
    for rank, p in enumerate(order, start=1):
        values[p] = rank
    return SignedPermutation(tuple(values), tuple(w < 0 for w in word))


def descent_set(s: SignedPermutation) -> frozenset[int]:
    if not s.is_unsigned:
        raise PermutationError("descent set is defined for unsigned permutations")
    v = s.values
    return frozenset(i for i in range(1, len(v)) if v[i - 1] > v[i])


def regression_set(s: SignedPermutation) -> frozenset[int]:
    """Positions ``i < n`` that are not progressions.

    ``i`` is a progression when ``|s(i)| < |s(i+1)|`` with ``i+1`` unbarred,
    or ``|s(i)| > |s(i+1)|`` with ``i+1`` barred.
    """
    v, b = s.values, s.bars
    return frozenset(
        i for i in range(1, len(v)) if (v[i - 1] < v[i]) == b[i]
    )


def shift(s: SignedPermutation, k: int) -> tuple[int, ...]:
    """Signed word of ``s`` with every letter raised by ``k``."""
    return tuple(-(v + k) if bar else v + k for v, bar in zip(s.values, s.bars))


@lru_cache(maxsize=None)
def _group(n: int, signed: bool) -> tuple[SignedPermutation, ...]:
    bar_patterns = list(itertools.product((False, True), repeat=n)) if signed else [(False,) * n]
    return tuple(
        SignedPermutation(values, bars)
        for values in itertools.permutations(range(1, n + 1))
        for bars in bar_patterns
    )


def hyperoctahedral_group(n: int) -> tuple[SignedPermutation, ...]:
    """All of B_n in canonical (values, bars) lexicographic order."""
    return _group(n, True)


def symmetric_group(n: int) -> tuple[SignedPermutation, ...]:
    return _group(n, False)


def subsets(n: int) -> Iterator[frozenset[int]]:
    """All subsets of {1, ..., n-1}, by size then lexicographically."""
    ground = range(1, n)
    for r in range(max(n, 1)):
        for combo in itertools.combinations(ground, r):
            yield frozenset(combo)


def format_subset(S: Iterable[int]) -> str:
    return " ".join(str(i) for i in sorted(S))


def parse_subset(text: str, n: int) -> frozenset[int]:
    tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
    try:
        S = frozenset(int(tok) for tok in tokens)
    except ValueError as exc:
        raise PermutationError(f"cannot parse subset {text!r}") from exc
    if any(not 1 <= i <= n - 1 for i in S):
        raise PermutationError(f"subset {sorted(S)} not contained in [1, {n - 1}]")
    return S
