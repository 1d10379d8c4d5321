"""Sound non-realizability tests returning machine-checkable certificates.

Index convention: entries[j] is the sign of the degree d-j coefficient, so a
monomial of degree k sits at index d-k.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .exactpoly import parse_rational
from .patterns import GROUP, RootPair, SignPattern, act, admissible_pairs

KIND_EVEN_PATTERN = "EvenPattern"
KIND_THREE_BLOCK_KAPPA = "ThreeBlockKappa"
KIND_ODD_NEGATIVE_EVEN_PART = "OddNegativeEvenPart"
KIND_ODD_COEFFICIENT_COMPARISON = "OddCoefficientComparison"


@dataclass(frozen=True)
class Certificate:
    kind: str
    parameters: tuple
    transported_by: str = "id"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": {k: str(v) for k, v in self.parameters},
            "transported_by": self.transported_by,
        }


def _param_value(text: str):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        return text


def certificate_from_json(data: dict) -> Certificate:
    # JSON objects keep insertion order, so parameter order survives the trip.
    params = tuple((k, _param_value(v)) for k, v in data.get("parameters", {}).items())
    return Certificate(data["kind"], params, data.get("transported_by", "id"))


def _changes(seq) -> int:
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


def cert_even_pattern(sp: SignPattern, pair: RootPair) -> Optional[Certificate]:
    """Even degree, positive constant, all odd-degree entries positive, and
    l >= 1 minus signs among the interior even-degree entries: the pairs
    (2,0), (4,0), ..., (2l,0) are not realizable."""
    d = sp.degree
    if d % 2 or d < 2:
        return None
    e = sp.entries
    if e[d] != 1:
        return None
    if any(e[j] != 1 for j in range(1, d, 2)):
        return None
    l = sum(1 for j in range(2, d - 1, 2) if e[j] == -1)
    if l < 1:
        return None
    pos, neg = pair
    if neg != 0 or pos % 2 or not 2 <= pos <= 2 * l:
        return None
    return Certificate(KIND_EVEN_PATTERN, (("l", l),))


def cert_three_block_kappa(sp: SignPattern, pair: RootPair) -> Optional[Certificate]:
    """Patterns shaped as m pluses, n minuses, p pluses cannot realize
    (0, d-2) when ((d-m-1)/m) * ((d-p-1)/p) >= 4."""
    d = sp.degree
    e = sp.entries
    runs = []
    for s in e:
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    if len(runs) != 3 or runs[0][0] != 1 or runs[1][0] != -1:
        return None
    m, n, p = runs[0][1], runs[1][1], runs[2][1]
    if tuple(pair) != (0, d - 2):
        return None
    kappa = Fraction(d - m - 1, m) * Fraction(d - p - 1, p)
    if kappa < 4:
        return None
    return Certificate(
        KIND_THREE_BLOCK_KAPPA, (("m", m), ("n", n), ("p", p), ("kappa", kappa))
    )


def cert_odd_negative_even_part(sp: SignPattern, pair: RootPair) -> Optional[Certificate]:
    """Odd degree, positive constant, every other even-degree entry negative,
    and at most one sign change among the odd-degree entries: of the pairs
    (0, s) only (0, 1) is realizable, so any s >= 3 is excluded."""
    d = sp.degree
    if d % 2 == 0:
        return None
    e = sp.entries
    if e[d] != 1:
        return None
    # even degrees live at odd indices when d is odd; the constant is one of them
    if any(e[j] != -1 for j in range(1, d, 2)):
        return None
    odd_part = [e[j] for j in range(0, d, 2)]
    if _changes(odd_part) > 1:
        return None
    pos, neg = pair
    if pos != 0 or neg < 3:
        return None
    return Certificate(KIND_ODD_NEGATIVE_EVEN_PART, ())


def cert_odd_comparison(sp: SignPattern, pair: RootPair) -> Optional[Certificate]:
    """Positive leading and constant entries with every odd-degree entry
    negative force P(x) < P(-x) for x > 0, so one negative root implies at
    least two positive ones: pairs with neg >= 1 and pos <= 1 are excluded."""
    d = sp.degree
    e = sp.entries
    if e[d] != 1:
        return None
    if any(e[d - k] != -1 for k in range(1, d + 1, 2)):
        return None
    pos, neg = pair
    if neg < 1 or pos > 1:
        return None
    return Certificate(
        KIND_ODD_COEFFICIENT_COMPARISON,
        (("comparison", "negative root forces two positive roots"),),
    )


ALL_CERTIFICATES = (
    cert_even_pattern,
    cert_three_block_kappa,
    cert_odd_negative_even_part,
    cert_odd_comparison,
)

_BY_KIND = {
    KIND_EVEN_PATTERN: cert_even_pattern,
    KIND_THREE_BLOCK_KAPPA: cert_three_block_kappa,
    KIND_ODD_NEGATIVE_EVEN_PART: cert_odd_negative_even_part,
    KIND_ODD_COEFFICIENT_COMPARISON: cert_odd_comparison,
}


def check_all(sp: SignPattern, pair: RootPair) -> Optional[Certificate]:
    """Try every certificate on every orbit member; first hit wins.

    The returned certificate's transported_by is the group element carrying
    the queried combination into the member the criterion fired on.
    """
    pair = RootPair(*pair)
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    for g in GROUP:
        image_sp, image_pair = act(sp, pair, g)
        for cert_fn in ALL_CERTIFICATES:
            cert = cert_fn(image_sp, image_pair)
            if cert is not None:
                return replace(cert, transported_by=g)
    return None


def refires(sp: SignPattern, pair: RootPair, cert: Certificate) -> bool:
    """Re-run the named test on the transported combination."""
    image_sp, image_pair = act(sp, RootPair(*pair), cert.transported_by)
    fn = _BY_KIND.get(cert.kind)
    if fn is None:
        return False
    found = fn(image_sp, image_pair)
    return found is not None
