"""Independent root-counting oracle for cross-checking the Sturm route.

Counts real roots by Descartes bounds on Moebius-transformed polynomials plus
interval bisection, sharing no code with the library's Sturm chain.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple


def _trim(c: List[Fraction]) -> List[Fraction]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _add(a: Sequence[Fraction], b: Sequence[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] += y
    return _trim(out)


def _eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def _deriv(c: Sequence[Fraction]) -> List[Fraction]:
    if len(c) == 1:
        return [Fraction(0)]
    return [k * c[k] for k in range(1, len(c))]


def _divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(x != 0 for x in a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] / b[-1]
        q[shift] = factor
        for i in range(len(b)):
            a[shift + i] -= factor * b[i]
        a.pop()
    return _trim(q), _trim(a if a else [Fraction(0)])


def _gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while any(x != 0 for x in b):
        a, b = b, _divmod(a, b)[1]
    return [x / a[-1] for x in a] if a[-1] != 0 else a


def _changes(c: Sequence[Fraction]) -> int:
    signs = [1 if x > 0 else -1 for x in c if x != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _mobius(c: Sequence[Fraction], lo: Fraction, hi: Fraction) -> List[Fraction]:
    # (1+x)^n P((lo + hi x)/(1 + x)); positive roots of the image are the
    # roots of P inside (lo, hi)
    n = len(c) - 1
    num = [lo, hi]
    den = [Fraction(1), Fraction(1)]
    out = [Fraction(0)]
    for k, a in enumerate(c):
        term = [a]
        for _ in range(k):
            term = _mul(term, num)
        for _ in range(n - k):
            term = _mul(term, den)
        out = _add(out, term)
    return out


def _count_open(c: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots of squarefree c in the open interval (lo, hi)."""
    v = _changes(_mobius(c, lo, hi))
    if v == 0:
        return 0
    if v == 1:
        return 1
    mid = (lo + hi) / 2
    at_mid = 1 if _eval(c, mid) == 0 else 0
    return _count_open(c, lo, mid) + at_mid + _count_open(c, mid, hi)


def _root_bound(c: Sequence[Fraction]) -> Fraction:
    lead = abs(c[-1])
    return 1 + max(abs(x) for x in c[:-1]) / lead


def _squarefree(c: Sequence[Fraction]) -> List[Fraction]:
    g = _gcd(c, _deriv(c))
    if len(g) == 1:
        return list(c)
    return _divmod(c, g)[0]


def _positive_distinct(c: Sequence[Fraction]) -> int:
    sf = _squarefree(c)
    b = _root_bound(sf)
    count = _count_open(sf, Fraction(0), b)
    if _eval(sf, b) == 0:
        count += 1
    return count


def bisection_count(coefficients: Sequence[Fraction]) -> Tuple[int, int]:
    """(pos, neg) with multiplicity, for a polynomial with nonzero constant."""
    c = _trim([Fraction(x) for x in coefficients])
    assert c[0] != 0, "constant term must be nonzero"
    pos = neg = 0
    while len(c) > 1:
        sf = _squarefree(c)
        pos += _positive_distinct(sf)
        neg += _positive_distinct([x * (-1) ** k for k, x in enumerate(sf)])
        c = _gcd(c, _deriv(c))
    return pos, neg


def descartes_bound(coefficients: Sequence[Fraction]) -> int:
    return _changes(list(coefficients))
