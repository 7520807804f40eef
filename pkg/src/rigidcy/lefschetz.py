"""Frobenius traces from point counts, and the modularity comparison.

For a good prime p the resolved threefold satisfies

    t3(p) = 1 + p^3 + (1 + p) t2(p) - #X(F_p),   t2(p) = p * sigma(p),

where sigma(p) is the trace of Frobenius on the divisor classes.  The point
count of the resolved model is reconstructed from the fibre product of the
minimal elliptic surface with itself: N2 = sum_s (#fibre_s)^2, plus p for
each rational node, whose small resolution swaps a point for a P^1.

sigma and the node count R are fitted on a few primes per class mod 3, then
held fixed while t3(p) is compared with the newform coefficient a_p at the
remaining primes.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from . import geometry
from .ffield import is_prime, primes_in
from .lfunction import rh_check
from .qseries import ap_table

log = logging.getLogger(__name__)

BAD_PRIMES = frozenset({2, 3})
H11 = 50
DEFAULT_FIT_PRIMES = (5, 7, 11, 13)


class BadPrimeError(ValueError):
    pass


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeCounts:
    """Raw counting data for one prime."""

    p: int
    N2_singular: int  # sum of squared fibre counts on S as written
    N2: int  # same on the minimal resolution of S
    R: int  # rational nodes of the fibre product (census)


def prime_counts(p: int) -> PrimeCounts:
    sing, _ = geometry.count_fiber_product(p)
    return PrimeCounts(p, sing, geometry.resolved_square_sum(p), geometry.node_census(p).R)


def t3_from_counts(p: int, N2: int, R: int, sigma: int) -> int:
    if p in BAD_PRIMES:
        raise BadPrimeError(f"{p} is a prime of bad reduction")
    resolved_count = N2 + p * R
    return 1 + p**3 + (1 + p) * p * sigma - resolved_count


@dataclass
class TraceRecord:
    p: int
    N2: int
    R: int
    sigma: int
    t2: int
    t3: int
    ap: int
    N2_singular: Optional[int] = None
    census_R: Optional[int] = None
    role: str = "holdout"

    @property
    def match(self) -> bool:
        return self.t3 == self.ap

    @property
    def rh_ok(self) -> bool:
        return rh_check(self.p, self.t3)

    @property
    def t2_ok(self) -> bool:
        return abs(self.t2) <= H11 * self.p

    def as_dict(self) -> dict:
        d = asdict(self)
        d["match"] = self.match
        d["rh_ok"] = self.rh_ok
        d["t2_ok"] = self.t2_ok
        return d


def residue_class(p: int) -> int:
    return p % 3


def calibrate(fit_primes: Sequence[int], oracle: Mapping[int, int] | Callable[[int], int],
              counts: Optional[Callable[[int], PrimeCounts]] = None,
              check_census: bool = True) -> dict[int, tuple[int, int]]:
    """Fit integer (sigma, R) per class of p mod 3 so that t3(p) = a_p on the fit primes.

    Each prime gives one linear equation (p + 1) sigma - R = b(p) / p with
    b(p) = a_p - 1 - p^3 + N2(p); the first two primes of a class determine
    the pair and the rest must agree.
    """
    get_ap = oracle if callable(oracle) else oracle.__getitem__
    counts = counts or prime_counts
    by_class: dict[int, list[int]] = {1: [], 2: []}
    for p in sorted(set(fit_primes)):
        if p in BAD_PRIMES or not is_prime(p):
            raise CalibrationError(f"fit prime {p} is not a good prime")
        by_class[residue_class(p)].append(p)
    for cls, ps in by_class.items():
        if len(ps) < 2:
            raise CalibrationError(f"need at least two fit primes = {cls} mod 3, got {ps}")

    out = {}
    for cls, ps in by_class.items():
        rows = []
        for p in ps:
            c = counts(p)
            b = get_ap(p) - 1 - p**3 + c.N2
            rows.append((p, c, Fraction(b, p)))
        (p1, _, r1), (p2, _, r2) = rows[0], rows[1]
        # (p + 1) sigma - R = r
        sigma = (r1 - r2) / (p1 - p2)
        R = (p1 + 1) * sigma - r1
        if sigma.denominator != 1 or R.denominator != 1:
            raise CalibrationError(f"class {cls} mod 3: no integer solution (sigma={sigma}, R={R})")
        sigma, R = int(sigma), int(R)
        for p, c, r in rows:
            if (p + 1) * sigma - R != r:
                raise CalibrationError(f"class {cls} mod 3: prime {p} inconsistent with sigma={sigma}, R={R}")
            if check_census and c.R != R:
                raise CalibrationError(f"class {cls} mod 3: fitted R={R} but node census gives {c.R} at p={p}")
        out[cls] = (sigma, R)
        log.info("class %d mod 3: sigma=%d R=%d from %s", cls, sigma, R, ps)
    return out


@dataclass
class ModularityReport:
    pmin: int
    pmax: int
    fit_primes: tuple[int, ...]
    calibration: dict[int, tuple[int, int]] = field(default_factory=dict)
    records: list[TraceRecord] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def holdout(self) -> list[TraceRecord]:
        return [r for r in self.records if r.role == "holdout"]

    @property
    def passed(self) -> bool:
        return bool(self.holdout) and not self.failures

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def as_dict(self) -> dict:
        cal = {f"class{k}": {"sigma": s, "R": r} for k, (s, r) in sorted(self.calibration.items())}
        return {
            "range": {"pmin": self.pmin, "pmax": self.pmax, "fit_primes": list(self.fit_primes)},
            "calibration": cal,
            "primes": [r.as_dict() for r in self.records],
            "failures": list(self.failures),
            "findings": list(self.findings),
            "verdict": self.verdict,
        }


def good_primes(pmax: int, pmin: int = 5) -> list[int]:
    return [p for p in primes_in(pmin, pmax) if p not in BAD_PRIMES]


def collect_counts(primes: Sequence[int], workers: int = 1,
                   counts: Optional[Callable[[int], PrimeCounts]] = None) -> dict[int, PrimeCounts]:
    counts = counts or prime_counts
    if workers > 1 and counts is prime_counts:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return dict(zip(primes, pool.map(prime_counts, primes)))
    return {p: counts(p) for p in primes}


def verify_modularity(pmax: int, fit_primes: Sequence[int] = DEFAULT_FIT_PRIMES,
                      oracle: Mapping[int, int] | None = None, workers: int = 1,
                      counts: Optional[Callable[[int], PrimeCounts]] = None) -> ModularityReport:
    """Calibrate on ``fit_primes`` and compare t3(p) with a_p at every other good p <= pmax."""
    fit = tuple(sorted(set(fit_primes)))
    if any(p > 13 for p in fit):
        raise ValueError(f"fit primes must be <= 13, got {fit}")
    primes = good_primes(pmax)
    held = [p for p in primes if p not in fit]
    if not held:
        raise ValueError(f"no held-out good primes up to {pmax} outside the fit set {fit}")
    if oracle is None:
        oracle = ap_table(max(pmax, 13))
    report = ModularityReport(5, pmax, fit)
    table = collect_counts(sorted(set(primes) | set(fit)), workers, counts)

    try:
        report.calibration = calibrate(fit, oracle, counts=table.__getitem__)
    except CalibrationError as exc:
        report.failures.append(f"calibration: {exc}")
        return report

    sigma_ne_R = []
    for p in primes:
        c = table[p]
        sigma, R = report.calibration[residue_class(p)]
        rec = TraceRecord(
            p=p, N2=c.N2, R=R, sigma=sigma, t2=p * sigma,
            t3=t3_from_counts(p, c.N2, R, sigma), ap=oracle[p],
            N2_singular=c.N2_singular, census_R=c.R,
            role="fit" if p in fit else "holdout",
        )
        report.records.append(rec)
        if rec.role == "holdout" and not rec.match:
            report.failures.append(f"p={p}: t3={rec.t3} but a_p={rec.ap}")
        if not rec.rh_ok:
            report.failures.append(f"p={p}: t3={rec.t3} violates t3^2 <= 4p^3")
        if not rec.t2_ok:
            report.failures.append(f"p={p}: |t2|={abs(rec.t2)} exceeds {H11}p")
        if c.R != R:
            report.findings.append(f"p={p}: calibrated R={R} differs from node census {c.R}")
        if sigma != R:
            sigma_ne_R.append(p)
    if sigma_ne_R:
        report.findings.append(f"sigma != R at p in {sigma_ne_R}")
    return report
