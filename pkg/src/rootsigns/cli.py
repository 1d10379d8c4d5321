"""Command line interface.

Exit codes: 0 success or witness found, 1 mismatch, 2 bad arguments or parse
failure, 3 inadmissible pair, 4 certified non-realizable, 5 unknown after
budgets, 6 incomplete store.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .classify import (
    ClassifyConfig,
    NOT_REALIZABLE,
    REALIZABLE,
    Store,
    StoreLocked,
    UNKNOWN,
    audit_conjecture,
    classify_degree,
    classify_pair,
    export_report,
    format_report_text,
    verify_against_reference,
)
from .constructors import verify_witness_json, witness_to_json
from .exactpoly import format_rational
from .patterns import (
    RootPair,
    SignPattern,
    admissible_pairs,
    count_combinations,
    count_monic_combinations,
    descartes_pair,
    enumerate_orbits,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INADMISSIBLE = 3
EXIT_CERTIFIED = 4
EXIT_UNKNOWN = 5
EXIT_INCOMPLETE = 6


class UsageError(Exception):
    pass


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}")


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k != "wall_ms"}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _emit(data: dict, fmt: str, text: str):
    if fmt == "json":
        print(json.dumps(_strip_timing(data), sort_keys=True, indent=2))
    else:
        print(text)


def _parse_pattern(raw: str) -> SignPattern:
    try:
        return SignPattern.from_string(raw)
    except ValueError as exc:
        raise UsageError(f"bad pattern: {exc}")


def _poly_text(coefficients) -> str:
    terms = []
    for k in range(len(coefficients) - 1, -1, -1):
        c = coefficients[k]
        if c == 0:
            continue
        mag = format_rational(abs(c))
        if k == 0:
            body = mag
        elif k == 1:
            body = "x" if abs(c) == 1 else f"{mag} x"
        else:
            body = f"x^{k}" if abs(c) == 1 else f"{mag} x^{k}"
        terms.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(terms)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def _config_from(args) -> ClassifyConfig:
    jobs = args.jobs if getattr(args, "jobs", None) is not None \
        else _env_int("DESCARTES_JOBS", 1)
    budget_random = args.budget_random if getattr(args, "budget_random", None) is not None \
        else _env_int("DESCARTES_BUDGET_RANDOM", 50_000)
    return ClassifyConfig(
        seed=getattr(args, "seed", 0) or 0,
        budget_random=budget_random,
        budget_dfs=getattr(args, "budget_dfs", None) or 1_000_000,
        jobs=jobs,
        allow_long=getattr(args, "allow_long", False),
    )


def cmd_classify(args) -> int:
    config = _config_from(args)
    try:
        records = classify_degree(args.degree, config, store_path=args.out,
                                  resume=args.resume)
    except StoreLocked as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MISMATCH
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    store = Store(args.out or "", args.degree, config)
    for rec in records:
        store.add(rec)
    report = _strip_timing(export_report([store]))
    _emit(report, args.format, format_report_text(report))
    return EXIT_OK


def cmd_realize(args) -> int:
    sp = _parse_pattern(args.pattern)
    pair = RootPair(args.pos, args.neg)
    if pair not in admissible_pairs(sp):
        p, n = descartes_pair(sp)
        msg = (f"pair ({pair.pos},{pair.neg}) is not admissible for {sp}: "
               f"needs pos <= {p}, neg <= {n}, matching parities")
        _emit({"status": "INADMISSIBLE", "pattern": str(sp),
               "pos": pair.pos, "neg": pair.neg, "reason": msg}, args.format, msg)
        return EXIT_INADMISSIBLE
    config = _config_from(args)
    rec = classify_pair(sp, pair, config)
    if rec.status == NOT_REALIZABLE:
        data = {"status": rec.status, "pattern": str(sp), "pos": pair.pos,
                "neg": pair.neg, "certificate": rec.certificate.to_json()}
        text = (f"{sp} ({pair.pos},{pair.neg}): not realizable\n"
                f"certificate: {rec.certificate.kind} via {rec.certificate.transported_by}")
        _emit(data, args.format, text)
        return EXIT_CERTIFIED
    if rec.status == UNKNOWN:
        data = {"status": rec.status, "pattern": str(sp), "pos": pair.pos,
                "neg": pair.neg, "budget_random": config.budget_random,
                "budget_dfs": config.budget_dfs}
        text = (f"{sp} ({pair.pos},{pair.neg}): unknown after "
                f"{config.budget_random} randomized trials")
        _emit(data, args.format, text)
        return EXIT_UNKNOWN
    w = rec.witness
    data = {"status": rec.status, "witness": witness_to_json(w)}
    text = (f"{sp} ({pair.pos},{pair.neg}): realizable via {w.method}\n"
            f"P(x) = {_poly_text(w.polynomial.coefficients)}")
    _emit(data, args.format, text)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        with open(args.witness, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read witness: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(data, dict) and isinstance(data.get("witness"), dict):
        data = data["witness"]  # accept realize's json output unmodified
    try:
        ok, message = verify_witness_json(data)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(message if ok else f"witness check failed: {message}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_verify(args) -> int:
    try:
        store = Store.load(args.store)
    except (OSError, ValueError) as exc:
        print(f"cannot load store: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = verify_against_reference(store)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if report["status"] == "incomplete":
        text = (f"degree {report['degree']}: store incomplete, "
                f"{report['stored']} of {report['expected']} orbits")
        _emit(report, args.format, text)
        return EXIT_INCOMPLETE
    audit = audit_conjecture([store])
    combined = {"tables": report, "audit": audit}
    lines = [f"degree {report['degree']}: {report['status']}"]
    for note in report["corrections_applied"]:
        lines.append(f"  correction: {note}")
    nr = report["not_realizable"]
    lines.append(f"  not realizable: {len(nr['matched'])} matched")
    for k in nr["missing"]:
        lines.append(f"  missing not-realizable: {k}")
    for k in nr["unexpected"]:
        lines.append(f"  unexpected not-realizable: {k}")
    unk = report["unknown"]
    if unk["matched"] or unk["resolved_beyond_reference"] or unk["unexpected"]:
        lines.append(f"  unknown: {len(unk['matched'])} matched")
        for k in unk["resolved_beyond_reference"]:
            lines.append(f"  resolved beyond reference: {k}")
        for k in unk["unexpected"]:
            lines.append(f"  unexpected unknown: {k}")
    lines.append(f"  conjecture audit: {'ok' if audit['ok'] else 'VIOLATIONS'} "
                 f"({audit['block_swept']} combinations swept)")
    for v in audit["violations"]:
        lines.append(f"  audit violation: {v}")
    _emit(combined, args.format, "\n".join(lines))
    ok = report["status"] == "ok" and audit["ok"]
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_count(args) -> int:
    if args.pattern:
        sp = _parse_pattern(args.pattern)
        p, n = descartes_pair(sp)
        pairs = sorted(admissible_pairs(sp))
        data = {
            "pattern": str(sp),
            "degree": sp.degree,
            "descartes_pair": [p, n],
            "admissible_pairs": [[a, b] for a, b in pairs],
        }
        text = (f"{sp}: degree {sp.degree}, Descartes pair ({p},{n})\n"
                f"admissible pairs: " + ", ".join(f"({a},{b})" for a, b in pairs))
        _emit(data, args.format, text)
        return EXIT_OK
    if args.degree is None:
        print("count needs --degree or --pattern", file=sys.stderr)
        return EXIT_USAGE
    d = args.degree
    try:
        orbits = sum(1 for _ in enumerate_orbits(d)) if d <= 10 else None
        data = {
            "degree": d,
            "combinations": count_combinations(d),
            "monic_combinations": count_monic_combinations(d),
            "patterns": 2 ** d,
            "orbits": orbits,
        }
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    text = (f"degree {d}: {data['combinations']} combinations over both leading signs, "
            f"{data['monic_combinations']} monic, {data['patterns']} monic patterns, "
            f"{data['orbits']} orbits")
    _emit(data, args.format, text)
    return EXIT_OK


def cmd_audit(args) -> int:
    stores = []
    for path in args.stores:
        try:
            stores.append(Store.load(path))
        except (OSError, ValueError) as exc:
            print(f"cannot load store: {exc}", file=sys.stderr)
            return EXIT_USAGE
    report = audit_conjecture(stores)
    lines = [f"degrees {report['degrees']}: "
             f"{'ok' if report['ok'] else 'VIOLATIONS'}",
             f"  block-decomposition sweep: {report['block_swept']} combinations"]
    for v in report["violations"]:
        lines.append(f"  violation: {v}")
    _emit(report, args.format, "\n".join(lines))
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootsigns",
        description="Classify realizable root-count pairs of sign patterns")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget=True):
        p.add_argument("--seed", type=int, default=0)
        if budget:
            p.add_argument("--budget-random", type=int, default=None,
                           help="randomized placement trials per combination")
            p.add_argument("--budget-dfs", type=int, default=None,
                           help="suffix search node budget")
        p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("classify", help="classify every orbit of a degree")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default=None, help="JSONL store path")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--allow-long", action="store_true",
                   help="permit degrees 9 and 10")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("realize", help="find a witness or a refutation")
    p.add_argument("--pattern", required=True,
                   help="sign pattern, leading first: '+--+' or '+,-,-,+'")
    p.add_argument("--pos", type=int, required=True)
    p.add_argument("--neg", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check", help="re-verify a stored witness file")
    p.add_argument("witness", help="path to a witness JSON file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="compare a store against the published tables")
    p.add_argument("--store", required=True)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="combination and orbit counts")
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--pattern", default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("audit", help="audit stores against the mixed-pair conjecture")
    p.add_argument("stores", nargs="+", help="JSONL store paths")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_audit)

    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
