"""Command-line front end.

Exit codes: 0 success or PASS, 1 verification FAIL, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import birat, geometry, invariants, lefschetz, lfunction, qseries
from .cache import CacheConflict, CountCache, default_path
from .ffield import is_prime

log = logging.getLogger("rigidcy")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    pmax: int = 97
    fit_primes: tuple[int, ...] = lefschetz.DEFAULT_FIT_PRIMES
    workers: int = 1
    cache_path: Path | None = None
    fmt: str = "table"

    def __post_init__(self):
        if self.pmax < 5:
            raise ConfigError(f"pmax must be >= 5, got {self.pmax}")
        for p in self.fit_primes:
            if not is_prime(p) or p in lefschetz.BAD_PRIMES or p > 13:
                raise ConfigError(f"fit primes must be good primes <= 13, got {p}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.fmt not in ("table", "json", "csv"):
            raise ConfigError(f"unknown format {self.fmt!r}")


def _prime_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}") from None


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def cached_counts(cache: CountCache | None, primes: Sequence[int], workers: int = 1) -> dict[int, lefschetz.PrimeCounts]:
    """Per-prime counts, served from the cache where possible; misses are computed then written serially."""
    if cache is None:
        return lefschetz.collect_counts(primes, workers)
    keys = ("fiberprod", "fiberprod_resolved", "node_census")
    have = {p: [cache.get(k, p) for k in keys] for p in primes}
    missing = [p for p, vals in have.items() if None in vals]
    cache.hits += sum(1 for p in primes if p not in missing)
    cache.misses += len(missing)
    fresh = lefschetz.collect_counts(missing, workers) if missing else {}
    out = {}
    for p in primes:
        if p in fresh:
            c = fresh[p]
            cache.put("fiberprod", p, c.N2_singular)
            cache.put("fiberprod_resolved", p, c.N2)
            cache.put("node_census", p, c.R)
            out[p] = c
        else:
            out[p] = lefschetz.PrimeCounts(p, *have[p])
    return out


def _open_cache(args) -> CountCache | None:
    path = default_path(getattr(args, "cache", None))
    return CountCache(path) if path else None


def _emit_rows(rows: list[dict], fmt: str, out=None):
    out = out or sys.stdout
    if not rows:
        return
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    else:
        cols = list(rows[0])
        widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in cols}
        out.write("  ".join(c.rjust(widths[c]) for c in cols) + "\n")
        for r in rows:
            out.write("  ".join(str(r[c]).rjust(widths[c]) for c in cols) + "\n")


# subcommands

def cmd_verify(args) -> int:
    cfg = RunConfig(args.pmax, args.fit_primes, args.workers, default_path(args.cache), args.format)
    cache = CountCache(cfg.cache_path) if cfg.cache_path else None
    primes = sorted(set(lefschetz.good_primes(cfg.pmax)) | set(cfg.fit_primes))
    table = cached_counts(cache, primes, cfg.workers)
    report = lefschetz.verify_modularity(cfg.pmax, cfg.fit_primes, counts=table.__getitem__)
    doc = report.as_dict()
    doc["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    rows = [{k: r[k] for k in ("p", "role", "N2", "R", "sigma", "t2", "t3", "ap", "match")}
            for r in doc["primes"]]
    if cfg.fmt == "json":
        json.dump(doc, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _emit_rows(rows, cfg.fmt)
        for cls, v in sorted(doc["calibration"].items()):
            print(f"# {cls}: sigma={v['sigma']} R={v['R']}")
        for line in report.findings:
            print(f"# finding: {line}")
        for line in report.failures:
            print(f"# FAIL: {line}")
        print(f"# verdict: {report.verdict}")
    if args.figures:
        from .plotting import plot_traces
        for path in plot_traces(report, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_ap(args) -> int:
    f = qseries.newform_coefficients(args.n)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "a_n"])
    for n in range(1, args.n + 1):
        w.writerow([n, f[n]])
    return EXIT_OK


def cmd_count(args) -> int:
    geometry.get_model(args.model)
    cache = _open_cache(args)
    if args.p < 5 and args.model != "verrill":
        raise ConfigError("fibred models need p >= 5")
    if cache is not None:
        n = cache.lookup(args.model, args.p, lambda: geometry.count_model(args.model, args.p))
    else:
        n = geometry.count_model(args.model, args.p)
    print(f"{args.model},{args.p},{n}")
    return EXIT_OK


def cmd_fibers(args) -> int:
    if args.p < 5:
        raise ConfigError("fibre counts need p >= 5")
    fibers = geometry.fiber_counts(args.p)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["s", "N_s", "singular"])
    for f in fibers:
        w.writerow([f.s_label, f.N, int(f.singular)])
    if args.figures:
        from .plotting import plot_fibers
        for path in plot_fibers(fibers, args.figures):
            log.info("wrote %s", path)
    return EXIT_OK


def cmd_euler(args) -> int:
    a = qseries.newform_coefficients(max(args.p, 4))[args.p]
    print(f"{args.p}: {lfunction.euler_factor(args.p, a)}")
    return EXIT_OK


def lcheck(n: int) -> bool:
    f = qseries.newform_coefficients(n)
    factors = {p: lfunction.euler_factor(p, f[p]) for p in range(2, n + 1) if is_prime(p)}
    return lfunction.dirichlet_from_euler(factors, n)[1:] == list(f.coeffs[1:])


def cmd_lcheck(args) -> int:
    ok = lcheck(args.n)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_gamma(args) -> int:
    vals = invariants.projective_equality_set(args.nmax)
    print(",".join(map(str, vals)))
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = []
    for row in invariants.BEAUVILLE_TABLE:
        rep = invariants.beauville_check(row)
        rows.append({
            "group": row.group, "fibers": "/".join(f"I{b}" for b in row.fibers),
            "sum_b2": rep.sum_squares, "h11": row.h11, "chi": row.euler,
            "status": "PASS" if rep.ok else "FAIL",
        })
    _emit_rows(rows, args.format)
    return EXIT_OK if all(r["status"] == "PASS" for r in rows) else EXIT_FAIL


def cmd_birat(args) -> int:
    for p in args.p:
        if p not in (5, 7, 11, 13):
            raise ConfigError(f"point check runs at p in 5, 7, 11, 13; got {p}")
    cert = birat.certify(primes=tuple(args.p))
    print(cert.to_json(indent=2))
    return EXIT_OK if cert.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigidcy", description="Modularity checks for Verrill's rigid Calabi-Yau threefold")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="calibrate and compare t3(p) with a_p")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--fit-primes", type=_prime_list, default=lefschetz.DEFAULT_FIT_PRIMES)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cache", metavar="PATH")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--figures", metavar="DIR", help="write trace plots here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ap", help="newform coefficients as CSV")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("count", help="point count of a registry model")
    p.add_argument("--model", choices=("verrill", "surface", "fiberprod"), required=True)
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--cache", metavar="PATH")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("fibers", help="per-fibre counts as CSV")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_fibers)

    p = sub.add_parser("euler", help="Euler factor at p")
    p.add_argument("--p", type=_prime, required=True)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("lcheck", help="Euler product vs q-expansion round trip")
    p.add_argument("--n", type=int, default=qseries.DEFAULT_ORDER)
    p.set_defaults(func=cmd_lcheck)

    p = sub.add_parser("gamma", help="N with PGamma_1(N) = PGamma_0(N)")
    p.add_argument("--nmax", type=int, required=True)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("table1", help="Beauville table checks")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("birat", help="birational certificate as JSON")
    p.add_argument("--p", type=_prime, action="append", help="prime for the point check (repeatable)")
    p.set_defaults(func=cmd_birat)
    return parser


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "birat" and not args.p:
        args.p = [5, 7]
    try:
        return args.func(args)
    except (ConfigError, CacheConflict, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
