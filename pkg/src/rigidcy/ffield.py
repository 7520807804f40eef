"""Arithmetic modulo a prime and enumeration of multi-projective points.

Points of ``P^{n_1} x ... x P^{n_k}`` over ``F_p`` are produced in canonical
form: within each factor the first nonzero coordinate is 1.  Enumeration is
lexicographic over canonical representatives, factor by factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

MAX_MODULUS = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [n for n in range(max(lo, 2), hi + 1) if is_prime(n)]


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise TypeError(f"modulus must be an int, got {type(self.p).__name__}")
        if not 2 <= self.p < MAX_MODULUS:
            raise ValueError(f"modulus {self.p} outside [2, 2^31)")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __int__(self):
        return self.p

    def reduce(self, a: int) -> int:
        return a % self.p

    def inv(self, a: int) -> int:
        return inv(a, self)


def _modulus(p) -> int:
    return p.p if isinstance(p, PrimeModulus) else PrimeModulus(int(p)).p


def inv(a: int, p: PrimeModulus | int) -> int:
    """Inverse of ``a`` modulo ``p``; raises ZeroDivisionError when a = 0 mod p."""
    q = _modulus(p)
    a %= q
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse modulo {q}")
    return pow(a, -1, q)


def projective_count(n: int, p: int) -> int:
    """#P^n(F_p) = p^n + ... + p + 1."""
    return sum(p**i for i in range(n + 1))


def _factor_points(n: int, p: int) -> list[tuple[int, ...]]:
    # more leading zeros sorts first lexicographically
    pts = []
    for lead in range(n, -1, -1):
        head = (0,) * lead + (1,)
        for tail in itertools.product(range(p), repeat=n - lead):
            pts.append(head + tail)
    return pts


@dataclass(frozen=True)
class ProjPoint:
    """A point of a product of projective spaces, one tuple per factor."""

    coords: tuple[tuple[int, ...], ...]
    normalized: bool = True

    def flat(self) -> tuple[int, ...]:
        return tuple(c for factor in self.coords for c in factor)


def normalize(coords: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    v = [c % p for c in coords]
    for c in v:
        if c:
            s = pow(c, -1, p)
            return tuple(x * s % p for x in v)
    raise ValueError("the zero vector is not a projective point")


def enumerate_points(space: Sequence[int], p: PrimeModulus | int) -> Iterator[ProjPoint]:
    """Yield every point of ``P^{n_1} x ... x P^{n_k}(F_p)`` once, in canonical form."""
    q = _modulus(p)
    if any(n < 1 for n in space):
        raise ValueError(f"projective dimensions must be >= 1, got {list(space)}")
    factors = [_factor_points(n, q) for n in space]
    for combo in itertools.product(*factors):
        yield ProjPoint(tuple(combo))


def point_array(n: int, p: PrimeModulus | int) -> np.ndarray:
    """Canonical points of P^n(F_p) as an int64 array of shape (count, n+1).

    Row order matches :func:`enumerate_points` for a single factor.
    """
    q = _modulus(p)
    blocks = []
    for lead in range(n, -1, -1):
        m = n - lead
        block = np.zeros((q**m, n + 1), dtype=np.int64)
        block[:, lead] = 1
        if m:
            grid = np.indices((q,) * m).reshape(m, -1).T
            block[:, lead + 1:] = grid
        blocks.append(block)
    return np.concatenate(blocks, axis=0)
