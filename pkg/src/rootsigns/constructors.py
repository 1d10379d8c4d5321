"""Witness builders.

Every constructor returns an exact polynomial wrapped in a Witness that has
been re-verified by the root-counting oracle before being handed back.
Constructors that cannot serve a request raise ConstructorFailure so the
caller can fall through to the next strategy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Optional, Sequence, Tuple, Union

from .exactpoly import (
    ExactPolynomial,
    RootCount,
    _count_roots_raw,
    _mul,
    count_roots,
    format_rational,
    parse_rational,
    scale_tail,
    sign_pattern_of,
)
from .patterns import RootPair, SignPattern, admissible_pairs, descartes_pair


class ConstructorFailure(Exception):
    """A strategy exhausted its schedule or search space."""


@dataclass(frozen=True)
class Witness:
    polynomial: ExactPolynomial
    pattern: SignPattern
    pair: RootPair
    method: str
    trace: tuple
    seed: Optional[int] = None


def expected_count(degree: int, pair: RootPair) -> RootCount:
    rest = degree - pair.pos - pair.neg
    if rest < 0 or rest % 2:
        raise ValueError(f"pair {tuple(pair)} impossible at degree {degree}")
    return RootCount(pair.pos, pair.neg, rest // 2)


def make_witness(polynomial: ExactPolynomial, pattern: SignPattern, pair: RootPair,
                 method: str, trace: tuple, seed: Optional[int] = None) -> Witness:
    """Construct a Witness, re-verifying pattern and root counts exactly."""
    pair = RootPair(*pair)
    if sign_pattern_of(polynomial) != pattern:
        raise ValueError("witness polynomial does not match the claimed pattern")
    if count_roots(polynomial) != expected_count(polynomial.degree, pair):
        raise ValueError("witness polynomial does not match the claimed pair")
    return Witness(polynomial, pattern, pair, method, tuple(trace), seed)


def witness_to_json(w: Witness) -> dict:
    return {
        "coefficients": [format_rational(c) for c in w.polynomial.coefficients],
        "pattern": str(w.pattern),
        "pos": w.pair.pos,
        "neg": w.pair.neg,
        "method": w.method,
        "trace": [dict(step) for step in w.trace],
        "seed": w.seed,
    }


def witness_from_json(data: dict) -> Witness:
    poly = ExactPolynomial([parse_rational(s) for s in data["coefficients"]])
    pattern = SignPattern.from_string(data["pattern"])
    pair = RootPair(int(data["pos"]), int(data["neg"]))
    trace = tuple(dict(step) for step in data.get("trace", []))
    return make_witness(poly, pattern, pair, data.get("method", "unknown"),
                        trace, data.get("seed"))


def verify_witness_json(data: dict):
    """Re-check a claimed witness; returns (ok, message) instead of raising."""
    try:
        poly = ExactPolynomial([parse_rational(s) for s in data["coefficients"]])
        pattern = SignPattern.from_string(data["pattern"])
        pair = RootPair(int(data["pos"]), int(data["neg"]))
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed witness: {exc}") from exc
    actual_pattern = sign_pattern_of(poly) if all(c != 0 for c in poly.coefficients) else None
    if actual_pattern != pattern:
        return False, f"pattern mismatch: claimed {pattern}, computed {actual_pattern}"
    actual = count_roots(poly)
    want = expected_count(poly.degree, pair)
    if actual != want:
        return False, f"pair mismatch: claimed {tuple(want)}, computed {tuple(actual)}"
    return True, "ok"


# ---------------------------------------------------------------------------
# factor catalog

@dataclass(frozen=True)
class CatalogFactor:
    name: str
    polynomial: ExactPolynomial
    pair: RootPair
    complex_pairs: int
    tail: Tuple[int, ...]  # shortened sign pattern, leading entry dropped


def _factor(name, coeffs, pair, cc) -> CatalogFactor:
    poly = ExactPolynomial([Fraction(c) for c in coeffs])
    tail = tuple(1 if c > 0 else -1 for c in reversed(poly.coefficients))[1:]
    return CatalogFactor(name, poly, RootPair(*pair), cc, tail)


_CUBIC_EPS = Fraction(1, 8)  # small enough for both end-case cubics to keep a complex pair

CATALOG: Tuple[CatalogFactor, ...] = (
    _factor("x-1", [-1, 1], (1, 0), 0),
    _factor("x+1", [1, 1], (0, 1), 0),
    _factor("x^2+2x+2", [2, 2, 1], (0, 0), 1),
    _factor("x^2-2x+2", [2, -2, 1], (0, 0), 1),
    _factor("cubic+-", [-1, -_CUBIC_EPS, _CUBIC_EPS, 1], (1, 0), 1),
    _factor("cubic-+", [-1, _CUBIC_EPS, -_CUBIC_EPS, 1], (1, 0), 1),
)

_CATALOG_BY_NAME = {f.name: f for f in CATALOG}


def catalog_by_tail(tail: Tuple[int, ...]):
    return [f for f in CATALOG if f.tail == tail]


# ---------------------------------------------------------------------------
# base table, degree <= 3

_POS_ROOTS = [Fraction(x) for x in (1, 2, 3, Fraction(1, 2), 4, Fraction(3, 2),
                                    Fraction(5, 2), Fraction(1, 3), 5, Fraction(1, 4),
                                    8, Fraction(2, 3))]

_QUAD_GRID = [(Fraction(b), Fraction(g)) for b, g in (
    (0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (Fraction(1, 2), 1), (Fraction(-1, 2), 1),
    (1, 4), (-1, 4), (3, 2), (-3, 2), (2, Fraction(1, 4)), (-2, Fraction(1, 4)),
    (4, 8), (-4, 8), (Fraction(1, 4), Fraction(1, 16)), (Fraction(-1, 4), Fraction(1, 16)),
    (Fraction(1, 2), 8), (Fraction(-1, 2), 8),
)]

# hand-picked witnesses kept stable for the simplest combinations
_BASE_SEEDS = {
    ((1, 1), (0, 1)): [1, 1],
    ((1, -1), (1, 0)): [-1, 1],
    ((1, 1, 1), (0, 0)): [2, 2, 1],
    ((1, -1, 1), (0, 0)): [2, -2, 1],
    ((1, -1, -1), (1, 1)): [-2, -1, 1],
    ((1, 1, -1), (1, 1)): [-2, 1, 1],
}

_BASE_TABLES: dict = {}


def _signs_desc(coeffs: Sequence[Fraction]) -> Tuple[int, ...]:
    return tuple(1 if c > 0 else (-1 if c < 0 else 0) for c in reversed(coeffs))


def _expand(roots: Sequence[Fraction], quads) -> list:
    p = [Fraction(1)]
    for r in roots:
        p = _mul(p, [-r, Fraction(1)])
    for b, g in quads:
        p = _mul(p, [b * b + g, -2 * b, Fraction(1)])
    return p


def _base_table(d: int) -> dict:
    if d in _BASE_TABLES:
        return _BASE_TABLES[d]
    from .patterns import enumerate_patterns

    table = {}
    neg_roots = [-r for r in _POS_ROOTS]
    for sp in enumerate_patterns(d):
        for pair in sorted(admissible_pairs(sp)):
            key = (sp.entries, tuple(pair))
            if key in _BASE_SEEDS:
                coeffs = [Fraction(c) for c in _BASE_SEEDS[key]]
                assert _signs_desc(coeffs) == sp.entries
                table[key] = ExactPolynomial(coeffs)
                continue
            cc = (d - pair.pos - pair.neg) // 2
            found = None
            for pr in combinations_with_replacement(_POS_ROOTS, pair.pos):
                for nr in combinations_with_replacement(neg_roots, pair.neg):
                    for quads in (combinations_with_replacement(_QUAD_GRID, cc) if cc else ((),)):
                        coeffs = _expand(list(pr) + list(nr), quads)
                        if _signs_desc(coeffs) == sp.entries:
                            found = ExactPolynomial(coeffs)
                            break
                    if found:
                        break
                if found:
                    break
            if found is None:
                raise RuntimeError(f"base table gap at {sp} {tuple(pair)}")
            table[key] = found
    _BASE_TABLES[d] = table
    return table


def realize_base(sp: SignPattern, pair: RootPair) -> Witness:
    """Table lookup for degrees up to 3, where every admissible pair is realizable."""
    pair = RootPair(*pair)
    d = sp.degree
    if d > 3:
        raise ConstructorFailure("base table covers degrees 1..3 only")
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    poly = _base_table(d)[(sp.entries, tuple(pair))]
    trace = ({"step": "base", "pattern": str(sp), "pos": pair.pos, "neg": pair.neg},)
    return make_witness(poly, sp, pair, "base", trace)


# ---------------------------------------------------------------------------
# rootless witnesses for even degree

def realize_positive(sp: SignPattern) -> Witness:
    """Target pair (0,0): double the constant term until the graph clears the axis."""
    d = sp.degree
    if d % 2:
        raise ValueError("a monic polynomial of odd degree always has a real root")
    if sp.entries[d] != 1:
        raise ValueError("pair (0,0) needs a positive constant term: P(0) > 0 is necessary")
    coeffs = [Fraction(e) for e in reversed(sp.entries)]
    target = RootCount(0, 0, d // 2)
    for _ in range(201):
        if _count_roots_raw(coeffs) == target:
            trace = ({"step": "positive", "constant": format_rational(coeffs[0])},)
            return make_witness(ExactPolynomial(coeffs), sp, RootPair(0, 0), "positive", trace)
        coeffs[0] *= 2
    raise ConstructorFailure("constant doubling schedule exhausted")


# ---------------------------------------------------------------------------
# product concatenation (appending a factor's pattern at the low end)

def _as_factor(p2: Union[CatalogFactor, Witness]) -> CatalogFactor:
    if isinstance(p2, CatalogFactor):
        return p2
    cc = (p2.polynomial.degree - p2.pair.pos - p2.pair.neg) // 2
    return CatalogFactor(f"witness:{p2.pattern}", p2.polynomial, p2.pair, cc,
                         p2.pattern.entries[1:])


def concat_product(w1: Witness, p2: Union[CatalogFactor, Witness]) -> Witness:
    """Multiply by a tail-scaled factor: the factor's shortened pattern (or its
    negation, when w1 ends in a minus) is appended and the pairs add."""
    f = _as_factor(p2)
    if w1.polynomial.leading() != 1 or any(c == 0 for c in w1.polynomial.coefficients):
        raise ValueError("left operand must be monic with all nonzero coefficients")
    if f.polynomial.leading() != 1 or f.polynomial.constant() == 0:
        raise ValueError("factor must be monic with nonzero constant term")
    tau = w1.pattern.entries[-1]
    block = f.tail if tau == 1 else tuple(-s for s in f.tail)
    expected_entries = w1.pattern.entries + block
    expected_pair = RootPair(w1.pair.pos + f.pair.pos, w1.pair.neg + f.pair.neg)
    eps = Fraction(1)
    for _ in range(201):
        cand = _mul(w1.polynomial.coefficients, scale_tail(f.polynomial, eps).coefficients)
        if _signs_desc(cand) == expected_entries:
            trace = w1.trace + ({"step": "factor", "name": f.name, "eps": format_rational(eps)},)
            return make_witness(ExactPolynomial(cand), SignPattern(expected_entries),
                                expected_pair, "concat-product", trace, w1.seed)
        eps /= 2
    raise ConstructorFailure("factor scaling schedule exhausted")


# ---------------------------------------------------------------------------
# middle concatenation (gluing at a shared junction entry)

def glue_polynomials(phigh: Sequence[Fraction], plow: Sequence[Fraction],
                     expected_signs: Tuple[int, ...], expected_pair: RootPair):
    """Raw gluing: lower part of plow, a shared junction monomial, then the
    tail of phigh with an eps-shrunk argument.  The sign sequence holds for
    every eps > 0; the root counts only for small eps, so both are checked.

    Needs phigh's constant and plow's leading coefficient positive.  Returns
    (coefficients, eps); the result is not normalized.
    """
    phigh = list(phigh)
    plow = list(plow)
    if phigh[0] <= 0:
        raise ValueError("high part needs a positive constant term")
    if plow[-1] <= 0:
        raise ValueError("low part needs a positive leading coefficient")
    d1 = len(plow) - 1
    d2 = len(phigh) - 1
    want = expected_count(d1 + d2, expected_pair)
    # small eps splits the roots between the parts, so only the summed counts
    # can stabilize; rejecting other requests here skips a doomed schedule
    low_count = _count_roots_raw(plow)
    high_count = _count_roots_raw(phigh)
    if (low_count.pos + high_count.pos, low_count.neg + high_count.neg) != \
            (want.pos, want.neg):
        raise ConstructorFailure("part root counts do not sum to the request")
    # any sufficiently small eps works, so grow the exponent geometrically
    # instead of paying a Sturm count per halving
    exponent = 0
    while exponent <= 256:
        eps = Fraction(1, 2 ** exponent)
        coeffs = [c / plow[-1] for c in plow[:-1]]
        coeffs.append(Fraction(1))
        coeffs.extend(phigh[k] * eps ** k / phigh[0] for k in range(1, d2 + 1))
        if _signs_desc(coeffs) == expected_signs and _count_roots_raw(coeffs) == want:
            return coeffs, eps
        exponent = exponent * 2 if exponent else 1
    raise ConstructorFailure("gluing schedule exhausted")


def _monic(coeffs: Sequence[Fraction]) -> ExactPolynomial:
    lead = coeffs[-1]
    return ExactPolynomial([c / lead for c in coeffs])


def concat_middle(w1: Witness, w2: Witness) -> Witness:
    """Glue w1 above w2 at a shared plus junction; pairs add."""
    if w1.pattern.entries[-1] != 1:
        raise ValueError("high witness must end in a plus entry")
    expected_entries = w1.pattern.entries + w2.pattern.entries[1:]
    expected_pair = RootPair(w1.pair.pos + w2.pair.pos, w1.pair.neg + w2.pair.neg)
    coeffs, eps = glue_polynomials(w1.polynomial.coefficients, w2.polynomial.coefficients,
                                   expected_entries, expected_pair)
    trace = w2.trace + ({
        "step": "glue",
        "eps": format_rational(eps),
        "high": [format_rational(c) for c in w1.polynomial.coefficients],
        "negated": False,
    }, {"step": "monic"})
    return make_witness(_monic(coeffs), SignPattern(expected_entries), expected_pair,
                        "concat-middle", trace, w1.seed or w2.seed)


def glue_onto(block_coeffs: Sequence[Fraction], cur_coeffs: Sequence[Fraction],
              expected_signs: Tuple[int, ...], expected_pair: RootPair):
    """Fold step used by chained gluing: attach a high block onto a lower
    aggregate, transporting through negation when the junction entry is minus.

    The junction sign is the block's constant sign, which must equal the
    aggregate's leading sign.  Returns (coefficients, eps, negated).
    """
    junction = 1 if block_coeffs[0] > 0 else -1
    if (1 if cur_coeffs[-1] > 0 else -1) != junction:
        raise ValueError("junction signs disagree")
    if junction == 1:
        coeffs, eps = glue_polynomials(block_coeffs, cur_coeffs, expected_signs, expected_pair)
        return coeffs, eps, False
    flipped = glue_polynomials([-c for c in block_coeffs], [-c for c in cur_coeffs],
                               tuple(-s for s in expected_signs), expected_pair)
    return [-c for c in flipped[0]], flipped[1], True


# ---------------------------------------------------------------------------
# suffix factor search

def suffix_factor_search(sp: SignPattern, pair: RootPair,
                         node_budget: int = 1_000_000) -> Witness:
    """Depth-first peeling of 1-3 trailing entries against the factor catalog,
    rebuilding forward with concat_product from a degree <= 3 base case."""
    pair = RootPair(*pair)
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    entries = sp.entries
    failed = set()
    nodes = 0

    def dfs(length: int, pos: int, neg: int) -> Optional[Witness]:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ConstructorFailure("suffix search node budget exhausted")
        key = (length, pos, neg)
        if key in failed:
            return None
        deg = length - 1
        if deg - pos - neg < 0 or (deg - pos - neg) % 2:
            failed.add(key)
            return None
        if deg <= 3:
            prefix = SignPattern(entries[:length])
            if RootPair(pos, neg) in admissible_pairs(prefix):
                return realize_base(prefix, RootPair(pos, neg))
        for block_len in (1, 2, 3):
            if deg - block_len < 1:
                break
            tau = entries[length - block_len - 1]
            block = entries[length - block_len:length]
            need = block if tau == 1 else tuple(-s for s in block)
            for f in catalog_by_tail(need):
                if f.pair.pos > pos or f.pair.neg > neg:
                    continue
                sub = dfs(length - block_len, pos - f.pair.pos, neg - f.pair.neg)
                if sub is not None:
                    try:
                        return concat_product(sub, f)
                    except ConstructorFailure:
                        continue
        failed.add(key)
        return None

    found = dfs(sp.degree + 1, pair.pos, pair.neg)
    if found is None:
        raise ConstructorFailure("suffix factor search exhausted")
    return replace(found, method="suffix")


# ---------------------------------------------------------------------------
# lopsided polynomials and the deletion constructor

def lopsided_witness(sp: SignPattern) -> ExactPolynomial:
    """Signed magnitudes t^(d^2 - k^2), t = d + 1: each monomial dominates all
    others at its own checkpoint x_k = t^(2k), so the polynomial is real-rooted
    under every reassignment of coefficient signs.  Verified exactly."""
    d = sp.degree
    for t in (d + 1, 2 * (d + 1)):
        mags = [t ** (d * d - k * k) for k in range(d + 1)]
        ok = True
        for k in range(d + 1):
            x = t ** (2 * k)
            own = mags[k] * x ** k
            rest = sum(mags[j] * x ** j for j in range(d + 1) if j != k)
            if own <= rest:
                ok = False
                break
        if ok:
            return ExactPolynomial([sp.entries[d - k] * Fraction(mags[k])
                                    for k in range(d + 1)])
    raise AssertionError("lopsidedness check failed at both magnitude laws")


def _twisted(signs, degrees):
    return tuple(s if k % 2 == 0 else -s for s, k in zip(signs, degrees))


def _changes(seq) -> int:
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


def realize_by_deletion(sp: SignPattern, pair: RootPair) -> Witness:
    """Shrink deleted coefficients of a lopsided polynomial until the kept
    subpattern's straight/twisted change counts become the root counts."""
    pair = RootPair(*pair)
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    d = sp.degree
    want = expected_count(d, pair)
    base = None
    for size in range(d):
        for deleted in combinations(range(1, d), size):
            kept = [k for k in range(d, -1, -1) if k not in deleted]
            signs = tuple(sp.entries[d - k] for k in kept)
            if _changes(signs) != pair.pos or _changes(_twisted(signs, kept)) != pair.neg:
                continue
            if base is None:
                base = lopsided_witness(sp).coefficients
            delta = Fraction(1)
            for _ in range(201):
                coeffs = list(base)
                for k in deleted:
                    coeffs[k] = base[k] * delta
                if _count_roots_raw(coeffs) == want:
                    trace = ({"step": "deletion", "deleted": sorted(deleted),
                              "delta": format_rational(delta)},)
                    return make_witness(ExactPolynomial(coeffs), sp, pair,
                                        "deletion", trace)
                delta /= 2
    raise ConstructorFailure("no deletion subpattern reaches this pair")


# ---------------------------------------------------------------------------
# block decomposition

def _compositions(total: int, largest: int = 3):
    if total == 0:
        yield ()
        return
    for first in range(min(largest, total), 0, -1):
        for rest in _compositions(total - first, largest):
            yield (first,) + rest


def _distribute(base, caps, extra):
    # hand out +2 upgrades greedily within each block's capacity
    out = list(base)
    for i, cap in enumerate(caps):
        take = min((cap - out[i]) // 2, extra)
        out[i] += 2 * take
        extra -= take
        if not extra:
            break
    return out if not extra else None


def realize_block_decomposition(sp: SignPattern, pair: RootPair) -> Witness:
    """Split the pattern into junction-sharing blocks of degree <= 3, realize
    each from the base table, and glue low to high.  Applies when
    min(pos, neg) > floor((d-4)/3)."""
    pair = RootPair(*pair)
    d = sp.degree
    if min(pair) <= (d - 4) // 3:
        raise ValueError("precondition min(pos, neg) > floor((d-4)/3) fails")
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    if d <= 3:
        return replace(realize_base(sp, pair), method="block")
    entries = sp.entries
    for comp in _compositions(d):
        starts = [0]
        for part in comp:
            starts.append(starts[-1] + part)
        blocks = [entries[starts[i]:starts[i + 1] + 1] for i in range(len(comp))]
        q = [_changes(b) for b in blocks]
        r = [len(b) - 1 - qi for b, qi in zip(blocks, q)]
        base_pos = [qi % 2 for qi in q]
        base_neg = [ri % 2 for ri in r]
        if sum(base_pos) > pair.pos or sum(base_neg) > pair.neg:
            continue
        pos_parts = _distribute(base_pos, q, (pair.pos - sum(base_pos)) // 2)
        neg_parts = _distribute(base_neg, r, (pair.neg - sum(base_neg)) // 2)
        if pos_parts is None or neg_parts is None:
            continue
        try:
            polys = []
            for b, bp, bn in zip(blocks, pos_parts, neg_parts):
                negated = b[0] == -1
                normalized = tuple(-e for e in b) if negated else b
                w = realize_base(SignPattern(normalized), RootPair(bp, bn))
                coeffs = [-c for c in w.polynomial.coefficients] if negated \
                    else list(w.polynomial.coefficients)
                polys.append(coeffs)
            cur = polys[-1]
            cur_pos, cur_neg = pos_parts[-1], neg_parts[-1]
            steps = [{"step": "poly", "coefficients": [format_rational(c) for c in cur]}]
            for i in range(len(blocks) - 2, -1, -1):
                cur_pos += pos_parts[i]
                cur_neg += neg_parts[i]
                slice_signs = entries[starts[i]:]
                cur, eps, negated = glue_onto(polys[i], cur, slice_signs,
                                              RootPair(cur_pos, cur_neg))
                steps.append({"step": "glue", "eps": format_rational(eps),
                              "high": [format_rational(c) for c in polys[i]],
                              "negated": negated})
            steps.append({"step": "monic"})
            trace = ({"step": "blocks", "composition": list(comp),
                      "pos_parts": pos_parts, "neg_parts": neg_parts},) + tuple(steps)
            return make_witness(_monic(cur), sp, pair, "block", trace)
        except ConstructorFailure:
            continue
    raise ConstructorFailure("no block composition glued successfully")


# ---------------------------------------------------------------------------
# randomized root placement

def _mant(rng: random.Random, grain: int = 64) -> Fraction:
    return 1 + Fraction(rng.randrange(-grain // 2, grain), grain)


def _mag(rng: random.Random, espan: int = 4) -> Fraction:
    return Fraction(2) ** rng.randint(-espan, espan) * _mant(rng)


def _split_count(rng: random.Random, n: int):
    parts = []
    left = n
    while left > 0:
        k = rng.randint(1, left)
        parts.append(k)
        left -= k
    return parts


def _sample_factors(rng: random.Random, d: int, pos: int, neg: int):
    """Clustered signed real roots plus complex-pair quadratics (beta, gamma),
    parameterized as x^2 - 2 beta x + (beta^2 + gamma) with gamma > 0."""
    cc = (d - pos - neg) // 2
    mags = []
    roots = []
    for count, sgn in ((pos, 1), (neg, -1)):
        if not count:
            continue
        for part in _split_count(rng, count):
            r = _mag(rng)
            mags.append(r)
            for _ in range(part):
                rr = r * (1 + Fraction(rng.randrange(-32, 33), 1024)) \
                    if rng.random() < 0.5 else r
                roots.append(sgn * rr)
    quads = []
    for _ in range(cc):
        if mags and rng.random() < 0.5:
            b = rng.choice(mags) * Fraction(2) ** rng.randint(-1, 1) * _mant(rng)
        else:
            b = _mag(rng)
        if rng.random() < 0.5:
            b = -b
        g = b * b * Fraction(2) ** rng.randint(-10, 12) * _mant(rng)
        quads.append((b, g))
    return roots, quads


def _pick(lo, hi):
    if lo is not None and hi is not None:
        return (lo + hi) / 2 if lo < hi else None
    if lo is not None:
        return lo + max(abs(lo), Fraction(1))
    if hi is not None:
        return hi - max(abs(hi), Fraction(1))
    return Fraction(1)


def _window(sig, u_coeffs, v_coeffs, lo, hi):
    # feasibility window for a parameter entering every coefficient linearly:
    # sign_i * (u_i + v_i * param) > 0 for all i
    d = len(sig) - 1
    for i in range(d + 1):
        s = sig[d - i]
        u = s * (u_coeffs[i] if i < len(u_coeffs) else 0)
        v = s * (v_coeffs[i] if i < len(v_coeffs) else 0)
        if v == 0:
            if u <= 0:
                return None
        elif v > 0:
            bound = -Fraction(u, v)
            if lo is None or bound > lo:
                lo = bound
        else:
            bound = -Fraction(u, v)
            if hi is None or bound < hi:
                hi = bound
    if lo is not None and hi is not None and hi <= lo:
        return None
    return _pick(lo, hi)


def _try_solved(sig, roots, quads):
    # free one quadratic's gamma, then one real root; coefficients are linear
    # in either, so the sign constraints intersect to an exact window
    for free in range(len(quads) - 1, -1, -1):
        beta = quads[free][0]
        a = [Fraction(1)]
        for r in roots:
            a = _mul(a, [-r, Fraction(1)])
        for j, (b, g) in enumerate(quads):
            if j != free:
                a = _mul(a, [b * b + g, -2 * b, Fraction(1)])
        base = _mul(a, [beta * beta, -2 * beta, Fraction(1)])
        g = _window(sig, base, a, Fraction(0), None)
        if g is not None:
            out = list(quads)
            out[free] = (beta, g)
            return roots, out
    for free in range(len(roots) - 1, -1, -1):
        a = [Fraction(1)]
        for j, r in enumerate(roots):
            if j != free:
                a = _mul(a, [-r, Fraction(1)])
        for b, g in quads:
            a = _mul(a, [b * b + g, -2 * b, Fraction(1)])
        shifted = [Fraction(0)] + a
        neg_a = [-c for c in a]
        if roots[free] > 0:
            r = _window(sig, shifted, neg_a, Fraction(0), None)
        else:
            r = _window(sig, shifted, neg_a, None, Fraction(0))
        if r is not None:
            out = list(roots)
            out[free] = r
            return out, quads
    return None


def random_root_placement(sp: SignPattern, pair: RootPair, budget: int = 50_000,
                          seed: int = 0) -> Optional[Witness]:
    """Seeded randomized placement; returns None when the budget runs out."""
    pair = RootPair(*pair)
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    sig = sp.entries
    d = sp.degree
    rng = random.Random(seed)
    for trial in range(budget):
        roots, quads = _sample_factors(rng, d, pair.pos, pair.neg)
        solved = _try_solved(sig, roots, quads)
        if solved is None:
            continue
        roots, quads = solved
        coeffs = _expand(roots, quads)
        assert _signs_desc(coeffs) == sig
        trace = ({"step": "random", "trial": trial + 1,
                  "roots": [format_rational(r) for r in roots],
                  "quads": [[format_rational(b), format_rational(g)] for b, g in quads]},)
        return make_witness(ExactPolynomial(coeffs), sp, pair, "random", trace, seed)
    return None


# ---------------------------------------------------------------------------
# trace replay

def replay_trace(witness: Witness) -> ExactPolynomial:
    """Re-execute a derivation trace; returns the reconstructed polynomial,
    which must equal the witness's own."""
    cur = None
    for step in witness.trace:
        kind = step["step"]
        if kind == "base":
            cur = realize_base(SignPattern.from_string(step["pattern"]),
                               RootPair(step["pos"], step["neg"])).polynomial.coefficients
        elif kind == "positive":
            coeffs = [Fraction(e) for e in reversed(witness.pattern.entries)]
            coeffs[0] = parse_rational(step["constant"])
            cur = tuple(coeffs)
        elif kind == "poly":
            cur = tuple(parse_rational(s) for s in step["coefficients"])
        elif kind == "factor":
            f = _CATALOG_BY_NAME[step["name"]]
            cur = tuple(_mul(cur, scale_tail(f.polynomial,
                                             parse_rational(step["eps"])).coefficients))
        elif kind == "glue":
            high = [parse_rational(s) for s in step["high"]]
            low = list(cur)
            eps = parse_rational(step["eps"])
            if step.get("negated"):
                high = [-c for c in high]
                low = [-c for c in low]
            d2 = len(high) - 1
            out = [c / low[-1] for c in low[:-1]] + [Fraction(1)]
            out.extend(high[k] * eps ** k / high[0] for k in range(1, d2 + 1))
            cur = tuple(-c for c in out) if step.get("negated") else tuple(out)
        elif kind == "monic":
            cur = tuple(c / cur[-1] for c in cur)
        elif kind == "deletion":
            base = lopsided_witness(witness.pattern).coefficients
            delta = parse_rational(step["delta"])
            cur = tuple(c * delta if k in set(step["deleted"]) else c
                        for k, c in enumerate(base))
        elif kind == "random":
            roots = [parse_rational(s) for s in step["roots"]]
            quads = [(parse_rational(b), parse_rational(g)) for b, g in step["quads"]]
            cur = tuple(_expand(roots, quads))
        elif kind == "blocks":
            continue
        else:
            raise ValueError(f"unknown trace step {kind!r}")
    return ExactPolynomial(cur)
