"""Sign-pattern combinatorics: Descartes pairs, admissible pairs, the Z2xZ2
action, orbit canonicalization, and exhaustive enumeration."""

from __future__ import annotations

import math
from itertools import product
from typing import Iterator, NamedTuple, Tuple

GROUP = ("id", "flip", "reverse", "flip.reverse")


class RootPair(NamedTuple):
    pos: int
    neg: int


class SignPattern:
    """Sequence of +1/-1 entries, leading term first, leading entry +1."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        entries = tuple(int(e) for e in entries)
        if not entries:
            raise ValueError("empty sign pattern")
        if any(e not in (1, -1) for e in entries):
            raise ValueError("entries must be +1 or -1")
        if entries[0] != 1:
            raise ValueError("leading entry must be +1")
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("SignPattern is immutable")

    @property
    def degree(self) -> int:
        return len(self.entries) - 1

    @classmethod
    def from_string(cls, text: str) -> "SignPattern":
        # accepts "+--+", "+,-,-,+", and the unicode minus sign
        cleaned = text.strip().replace(",", "").replace("−", "-")
        if not cleaned or any(ch not in "+-" for ch in cleaned):
            raise ValueError(f"cannot parse sign pattern {text!r}")
        return cls(tuple(1 if ch == "+" else -1 for ch in cleaned))

    def __str__(self) -> str:
        return "".join("+" if e > 0 else "-" for e in self.entries)

    def __repr__(self) -> str:
        return f"SignPattern({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SignPattern) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __reduce__(self):
        return (SignPattern, (self.entries,))


class OrbitKey(NamedTuple):
    pattern: SignPattern
    pair: RootPair
    applied: str


def descartes_pair(sp: SignPattern) -> RootPair:
    """(sign changes, sign preservations) of the pattern; they sum to the degree."""
    changes = sum(1 for a, b in zip(sp.entries, sp.entries[1:]) if a != b)
    return RootPair(changes, sp.degree - changes)


def admissible_pairs(sp: SignPattern) -> set:
    """All (pos, neg) below the Descartes pair with matching parities."""
    p, n = descartes_pair(sp)
    return {
        RootPair(pos, neg)
        for pos in range(p % 2, p + 1, 2)
        for neg in range(n % 2, n + 1, 2)
    }


def _flip(entries: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(e * (-1) ** j for j, e in enumerate(entries))


def _reverse(entries: Tuple[int, ...]) -> Tuple[int, ...]:
    rev = entries[::-1]
    if rev[0] < 0:
        rev = tuple(-e for e in rev)
    return rev


def act(sp: SignPattern, pair: RootPair, g: str):
    """Apply a group element.

    flip is x -> -x up to leading-sign normalization: entry j picks up (-1)^j
    and the pair swaps.  reverse is x -> 1/x: the pattern reads backwards
    (renormalized to leading +) and the pair is unchanged.
    """
    if g == "id":
        return sp, RootPair(*pair)
    if g == "flip":
        return SignPattern(_flip(sp.entries)), RootPair(pair[1], pair[0])
    if g == "reverse":
        return SignPattern(_reverse(sp.entries)), RootPair(*pair)
    if g == "flip.reverse":
        return SignPattern(_flip(_reverse(sp.entries))), RootPair(pair[1], pair[0])
    raise ValueError(f"unknown group element {g!r}")


def orbit_members(sp: SignPattern, pair: RootPair):
    """The distinct (pattern, pair, element) images, in fixed group order."""
    seen = {}
    for g in GROUP:
        image = act(sp, pair, g)
        key = (image[0].entries, tuple(image[1]))
        if key not in seen:
            seen[key] = (image[0], image[1], g)
    return list(seen.values())


def _order_key(sp: SignPattern, pair: RootPair):
    # lexicographic with + < - on entries, ties broken by the pair
    return tuple(0 if e > 0 else 1 for e in sp.entries), tuple(pair)


def canonical_orbit_rep(sp: SignPattern, pair: RootPair) -> OrbitKey:
    """Deterministic minimum of the orbit; records the element that reaches it."""
    best = None
    for g in GROUP:
        image_sp, image_pair = act(sp, pair, g)
        key = _order_key(image_sp, image_pair)
        if best is None or key < best[0]:
            best = (key, image_sp, image_pair, g)
    return OrbitKey(best[1], best[2], best[3])


def count_combinations(d: int) -> int:
    """Both-leading-signs count of (pattern, admissible pair) combinations.

    The admissible-pair count depends only on the number p of sign changes,
    so the sum collapses to binomials: 2 * sum_p C(d,p) (p//2+1) ((d-p)//2+1).
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    total = sum(
        math.comb(d, p) * (p // 2 + 1) * ((d - p) // 2 + 1) for p in range(d + 1)
    )
    return 2 * total


def count_monic_combinations(d: int) -> int:
    return count_combinations(d) // 2


def enumerate_patterns(d: int) -> Iterator[SignPattern]:
    """All 2^d monic patterns of degree d, lexicographic with + before -."""
    for tail in product((1, -1), repeat=d):
        yield SignPattern((1,) + tail)


def enumerate_orbits(d: int, max_degree: int = 10) -> Iterator[OrbitKey]:
    """Each (pattern, admissible pair) combination appears in exactly one orbit.

    Emits canonical representatives in deterministic order: a combination is
    emitted iff it is its own canonical form.
    """
    if not 1 <= d <= max_degree:
        raise ValueError(f"degree out of range: {d}")
    for sp in enumerate_patterns(d):
        for pair in sorted(admissible_pairs(sp)):
            rep = canonical_orbit_rep(sp, pair)
            if rep.pattern == sp and rep.pair == pair:
                yield OrbitKey(sp, pair, "id")


def orbit_size(sp: SignPattern, pair: RootPair) -> int:
    return len(orbit_members(sp, pair))
