"""Euler factors and their Dirichlet-series expansion.

A good prime contributes 1 - a_p T + p^3 T^2; the bad primes 2 and 3 take the
newform's linear factors 1 - a_p T.  This is a convention: nothing here
determines the true bad factors of the threefold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .ffield import is_prime

BAD_PRIMES = (2, 3)
WEIGHT = 4


class RHBoundError(ValueError):
    pass


def rh_check(p: int, t3: int) -> bool:
    """Integer form of |t3| <= 2 p^{3/2}."""
    return t3 * t3 <= 4 * p**3


@dataclass(frozen=True)
class EulerFactor:
    p: int
    coeffs: tuple[int, ...]  # coefficients of T^0, T^1, ... of the reciprocal polynomial

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" {'+' if c > 0 else '-'} {body}")
        return "".join(parts) or "0"


def euler_factor(p: int, ap: int, bad_primes: Iterable[int] = BAD_PRIMES) -> EulerFactor:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in tuple(bad_primes):
        return EulerFactor(p, (1, -ap))
    if not rh_check(p, ap):
        raise RHBoundError(f"a_{p} = {ap} violates a_p^2 <= 4p^3 = {4 * p**3}")
    return EulerFactor(p, (1, -ap, p ** (WEIGHT - 1)))


def dirichlet_from_euler(factors: Mapping[int, EulerFactor] | Iterable[EulerFactor], order: int) -> list[int]:
    """Coefficients a_1..a_N (index 0 unused) of prod_p factor(p^{-s})^{-1}."""
    if not isinstance(factors, Mapping):
        factors = {f.p: f for f in factors}
    missing = [p for p in range(2, order + 1) if is_prime(p) and p not in factors]
    if missing:
        raise KeyError(f"no Euler factor for primes {missing}")
    # local coefficients b_k = a_{p^k} from 1/factor(T), by the linear recurrence
    local: dict[int, list[int]] = {}
    for p, f in factors.items():
        if p > order:
            continue
        b = [1]
        pk = p
        while pk <= order:
            k = len(b)
            b.append(-sum(f.coeffs[j] * b[k - j] for j in range(1, min(f.degree, k) + 1)))
            pk *= p
        local[p] = b
    a = [0] * (order + 1)
    a[1] = 1
    for n in range(2, order + 1):
        m, val = n, 1
        for p, b in local.items():
            if m % p == 0:
                k = 0
                while m % p == 0:
                    m //= p
                    k += 1
                val *= b[k]
                if m == 1:
                    break
        a[n] = val
    return a
