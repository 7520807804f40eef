"""Hodge and Betti bookkeeping, Beauville's table, and PGamma_1(N) = PGamma_0(N)."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


@dataclass(frozen=True)
class HodgeData:
    h11: int
    h21: int = 0

    def __post_init__(self):
        if self.h11 < 0 or self.h21 < 0:
            raise ValueError("Hodge numbers are nonnegative")

    @property
    def rigid(self) -> bool:
        return self.h21 == 0


@dataclass(frozen=True)
class Betti:
    B: tuple[int, ...]  # B0..B6
    euler: int

    def hodge(self) -> HodgeData:
        """Inverse of :func:`betti` on Calabi-Yau diamonds."""
        return HodgeData(self.B[2], (self.B[3] - 2) // 2)


def betti(h: HodgeData) -> Betti:
    """Betti numbers and Euler characteristic of a Calabi-Yau threefold diamond."""
    B = (1, 0, h.h11, 2 * (1 + h.h21), h.h11, 0, 1)
    chi = sum((-1) ** i * b for i, b in enumerate(B))
    assert chi == 2 * (h.h11 - h.h21)
    return Betti(B, chi)


@dataclass(frozen=True)
class BeauvilleRow:
    group: str
    fibers: tuple[int, ...]  # I_b multiplicities of the four singular fibres
    h11: int
    euler: int


#: Beauville's semistable rational elliptic modular surfaces with four singular fibres
BEAUVILLE_TABLE = (
    BeauvilleRow("Gamma(3)", (3, 3, 3, 3), 36, 72),
    BeauvilleRow("Gamma_1(4) cap Gamma(2)", (4, 4, 2, 2), 40, 80),
    BeauvilleRow("Gamma_1(5)", (5, 5, 1, 1), 52, 104),
    BeauvilleRow("Gamma_1(6)", (6, 3, 2, 1), 50, 100),
    BeauvilleRow("Gamma_0(8) cap Gamma_1(4)", (8, 2, 1, 1), 70, 140),
    BeauvilleRow("Gamma_0(9) cap Gamma_1(3)", (9, 1, 1, 1), 84, 168),
)


@dataclass
class RowReport:
    row: BeauvilleRow
    sum_squares: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def beauville_check(row: BeauvilleRow) -> RowReport:
    sq = sum(b * b for b in row.fibers)
    rep = RowReport(row, sq)
    rep.checks["sum b_i^2 = h11"] = sq == row.h11
    rep.checks["chi = 2 h11"] = row.euler == 2 * row.h11
    rep.checks["sum b_i = 12"] = sum(row.fibers) == 12
    return rep


def projective_images_equal(N: int) -> bool:
    """True iff every unit mod N is +-1, i.e. PGamma_1(N) = PGamma_0(N)."""
    if N < 1:
        raise ValueError("N must be positive")
    return all(a % N in (1 % N, (-1) % N) for a in range(1, N + 1) if gcd(a, N) == 1)


def projective_equality_set(nmax: int) -> list[int]:
    return [n for n in range(1, nmax + 1) if projective_images_equal(n)]
