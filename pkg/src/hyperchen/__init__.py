"""Exact Chen calculus on symmetric and hyperoctahedral group algebras."""

from .algebra import (
    AlgebraElement,
    GradedSeries,
    convolve,
    internal_product,
    series_exp,
    series_log,
    series_multiply,
    shuffle,
)
from .perms import (
    SignedPermutation,
    compose,
    descent_set,
    inverse,
    regression_set,
    standardize,
)

__version__ = "0.1.0"
