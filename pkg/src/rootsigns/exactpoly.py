"""Exact rational polynomial arithmetic and multiplicity-aware real root counting.

Polynomials are dense lists of Fractions indexed by ascending monomial degree.
Everything here is pure and exact; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .patterns import SignPattern

ExactRational = Fraction


class RootCount(NamedTuple):
    pos: int
    neg: int
    complex_pairs: int


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _deriv(p: Sequence[Fraction]) -> list:
    return [Fraction(i) * c for i, c in enumerate(p)][1:]


def _polydiv(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and _trim(a):
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for i, x in enumerate(b):
            a[i + k] -= c * x
        a = _trim(a)
    return q, a


def _gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _polydiv(a, b)
        a, b = b, _trim(r)
    return [c / a[-1] for c in a] if a else a


def _mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _add(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else Fraction(0)
        y = b[i] if i < len(b) else Fraction(0)
        out.append(x + y)
    return out


def _eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sturm_chain(p: Sequence[Fraction]) -> list:
    chain = [_trim(list(p)), _trim(_deriv(p))]
    while len(chain[-1]) > 1:
        _, r = _polydiv(chain[-2], chain[-1])
        r = _trim([-c for c in r])
        if not r:
            break
        chain.append(r)
    return chain


def _variations(signs: Iterable[int]) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _var_at(chain, x: Fraction) -> int:
    return _variations(_eval(p, x) for p in chain)


def _var_inf(chain, sign: int) -> int:
    signs = []
    for p in chain:
        s = p[-1]
        if sign < 0 and (len(p) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


class ExactPolynomial:
    """Immutable dense polynomial over the rationals, ascending coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable):
        coeffs = [Fraction(c) for c in coefficients]
        trimmed = _trim(coeffs)
        if not trimmed:
            # the zero polynomial, kept representable so add() is total
            trimmed = [Fraction(0)]
        object.__setattr__(self, "coefficients", tuple(trimmed))

    def __setattr__(self, name, value):
        raise AttributeError("ExactPolynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return self.coefficients == (Fraction(0),)

    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def constant(self) -> Fraction:
        return self.coefficients[0]

    def __call__(self, x) -> Fraction:
        return _eval(self.coefficients, Fraction(x))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactPolynomial) and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial([-c for c in self.coefficients])

    def __reduce__(self):
        return (ExactPolynomial, (self.coefficients,))

    def __repr__(self) -> str:
        return f"ExactPolynomial({[str(c) for c in self.coefficients]})"


def add(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    return ExactPolynomial(_add(p.coefficients, q.coefficients))


def multiply(p: ExactPolynomial, q: ExactPolynomial) -> ExactPolynomial:
    return ExactPolynomial(_mul(p.coefficients, q.coefficients))


def derivative(p: ExactPolynomial) -> ExactPolynomial:
    return ExactPolynomial(_deriv(p.coefficients) or [0])


def scale_tail(p: ExactPolynomial, eps) -> ExactPolynomial:
    """eps^d * p(x/eps): coefficient of x^k becomes c_k * eps^(d-k), leading unchanged."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    d = p.degree
    return ExactPolynomial([c * eps ** (d - k) for k, c in enumerate(p.coefficients)])


def squarefree_decomposition(p: ExactPolynomial):
    """Yun factorization into pairwise-coprime squarefree parts with multiplicities.

    The product of part^multiplicity equals p up to a nonzero rational scalar.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    raw = list(p.coefficients)
    g = _gcd(raw, _deriv(raw))
    if len(g) == 1:
        monic = [c / raw[-1] for c in raw]
        return [(ExactPolynomial(monic), 1)]
    a, _ = _polydiv(raw, g)
    b, _ = _polydiv(_deriv(raw), g)
    c = _trim(_add(b, [-x for x in _deriv(a)]))
    out = []
    i = 1
    while len(a) > 1:
        gi = _gcd(a, c) if c else [x / a[-1] for x in a]
        if len(gi) > 1:
            out.append((ExactPolynomial(gi), i))
        a, _ = _polydiv(a, gi)
        b, _ = _polydiv(c, gi) if c else ([], [])
        c = _trim(_add(b, [-x for x in _deriv(a)]))
        i += 1
    return out


def _count_squarefree(raw: Sequence[Fraction], lo: Optional[Fraction], hi: Optional[Fraction]) -> int:
    chain = _sturm_chain(raw)
    at_lo = _var_inf(chain, -1) if lo is None else _var_at(chain, lo)
    at_hi = _var_inf(chain, +1) if hi is None else _var_at(chain, hi)
    return at_lo - at_hi


def sturm_count(p: ExactPolynomial, interval) -> int:
    """Distinct real roots of squarefree p in the open interval (lo, hi).

    Endpoints are Fractions or None for the infinities; an endpoint that is
    itself a root is rejected.
    """
    lo, hi = interval
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if p.degree < 1:
        return 0
    raw = list(p.coefficients)
    if len(_gcd(raw, _deriv(raw))) != 1:
        raise ValueError("sturm_count requires a squarefree polynomial")
    for endpoint in (lo, hi):
        if endpoint is not None and _eval(raw, endpoint) == 0:
            raise ValueError("interval endpoint is a root; perturb it")
    return _count_squarefree(raw, lo, hi)


def _count_roots_raw(raw: Sequence[Fraction]) -> RootCount:
    pos = neg = 0
    work = _trim(list(raw))
    d = len(work) - 1
    while len(work) > 1:
        g = _gcd(work, _deriv(work))
        sf = work if len(g) == 1 else _polydiv(work, g)[0]
        pos += _count_squarefree(sf, Fraction(0), None)
        neg += _count_squarefree(sf, None, Fraction(0))
        work, r = _polydiv(work, sf)
        assert not _trim(r)
    return RootCount(pos, neg, (d - pos - neg) // 2)


def count_roots(p: ExactPolynomial) -> RootCount:
    """Positive and negative real roots counted with multiplicity, plus complex pairs.

    Requires every coefficient nonzero, so 0 is never a root and the complex
    count is determined by the degree.
    """
    if any(c == 0 for c in p.coefficients):
        raise ValueError("count_roots requires all coefficients nonzero")
    return _count_roots_raw(p.coefficients)


def sign_pattern_of(p: ExactPolynomial) -> SignPattern:
    """Coefficient signs from leading to constant term; leading must be positive."""
    if any(c == 0 for c in p.coefficients):
        raise ValueError("sign pattern undefined with zero coefficients")
    if p.leading() < 0:
        raise ValueError("normalize the leading coefficient to be positive first")
    return SignPattern(tuple(1 if c > 0 else -1 for c in reversed(p.coefficients)))


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    # accepts "3/4", "-2", and decimal literals like "0.1690"
    return Fraction(s.strip())


def polynomial_to_strings(p: ExactPolynomial) -> list:
    return [format_rational(c) for c in p.coefficients]


def polynomial_from_strings(items: Sequence[str]) -> ExactPolynomial:
    return ExactPolynomial([parse_rational(s) for s in items])
