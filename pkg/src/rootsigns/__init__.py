"""Exact classification of realizable (pos, neg) root-count pairs for sign patterns."""

__version__ = "0.1.0"

from .exactpoly import ExactPolynomial, RootCount, count_roots, sign_pattern_of
from .patterns import SignPattern, RootPair, OrbitKey

__all__ = [
    "__version__",
    "ExactPolynomial",
    "RootCount",
    "count_roots",
    "sign_pattern_of",
    "SignPattern",
    "RootPair",
    "OrbitKey",
]
