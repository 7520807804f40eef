"""Truncated integer q-expansions and eta quotients.

The newform of weight 4 on Gamma_0(6) is the eta product

    f(q) = eta(q)^2 eta(q^2)^2 eta(q^3)^2 eta(q^6)^2,

and its coefficients a_p are the modular side of the trace comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .ffield import is_prime

DEFAULT_ORDER = 100

#: (d, r) pairs for the level 6 weight 4 newform
NEWFORM_6 = ((1, 2), (2, 2), (3, 2), (6, 2))


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class IntSeries:
    """Coefficients a_0..a_N of a power series in q, exact through order N."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a series needs at least the constant coefficient")

    @classmethod
    def one(cls, order: int) -> "IntSeries":
        return cls((1,) + (0,) * order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if n < 0 or n > self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def truncate(self, order: int) -> "IntSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend a series known to order {self.order} to {order}")
        return IntSeries(self.coeffs[: order + 1])

    def __add__(self, other: "IntSeries") -> "IntSeries":
        n = min(self.order, other.order)
        return IntSeries(tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)))

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        b = other.coeffs
        for i, a in enumerate(self.coeffs[: n + 1]):
            if a:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += a * b[j]
        return IntSeries(tuple(out))

    def __pow__(self, k: int) -> "IntSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = IntSeries.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "IntSeries":
        """Formal reciprocal; requires constant term +-1 so it stays integral."""
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise SeriesError(f"constant term {c0} is not a unit in Z")
        n = self.order
        out = [0] * (n + 1)
        out[0] = c0
        for k in range(1, n + 1):
            acc = sum(self.coeffs[j] * out[k - j] for j in range(1, k + 1))
            out[k] = -acc * c0
        return IntSeries(tuple(out))

    def shift(self, k: int) -> "IntSeries":
        """Multiply by q^k (k >= 0), keeping the truncation order."""
        if k < 0:
            raise SeriesError("negative shifts leave the power-series ring")
        n = self.order
        return IntSeries(((0,) * k + self.coeffs)[: n + 1])


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod_d eta(q^d)^{r_d} given as (d, r_d) pairs."""

    factors: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(d), int(r)) for d, r in self.factors))
        for d, _ in self.factors:
            if d < 1:
                raise SeriesError(f"eta divisor must be positive, got {d}")

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def leading_power(self) -> Fraction:
        return Fraction(sum(d * r for d, r in self.factors), 24)


def euler_factor_series(d: int, order: int) -> IntSeries:
    """prod_{n >= 1} (1 - q^{dn}) truncated at q^order."""
    if d < 1 or order < 0:
        raise SeriesError(f"need d >= 1 and order >= 0, got d={d}, order={order}")
    c = [0] * (order + 1)
    c[0] = 1
    step = d
    while step <= order:
        # multiply in place by (1 - q^step), high to low
        for k in range(order, step - 1, -1):
            c[k] -= c[k - step]
        step += d
    return IntSeries(tuple(c))


def eta_quotient_expansion(spec: EtaQuotientSpec | tuple, order: int = DEFAULT_ORDER) -> IntSeries:
    if not isinstance(spec, EtaQuotientSpec):
        spec = EtaQuotientSpec(tuple(spec))
    lead = spec.leading_power
    if lead.denominator != 1 or lead < 0:
        raise SeriesError(f"leading q-power {lead} is not a nonnegative integer")
    result = IntSeries.one(order)
    for d, r in spec.factors:
        result = result * euler_factor_series(d, order) ** r
    return result.shift(int(lead))


def newform_coefficients(order: int = DEFAULT_ORDER) -> IntSeries:
    """q-expansion of eta(q)^2 eta(q^2)^2 eta(q^3)^2 eta(q^6)^2."""
    return eta_quotient_expansion(EtaQuotientSpec(NEWFORM_6), order)


@dataclass
class HeckeReport:
    nmax: int
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_hecke_relations(f: IntSeries, level: int = 6, weight: int = 4, nmax: int = DEFAULT_ORDER) -> HeckeReport:
    """Check the multiplicative relations a normalized newform must satisfy.

    Primes dividing ``level`` use a_{p^r} = a_p^r (the squarefree-level case);
    other primes use a_{p^{r+1}} = a_p a_{p^r} - p^{k-1} a_{p^{r-1}}.
    """
    if nmax < 4:
        raise SeriesError("nmax must be at least 4")
    if nmax > f.order:
        raise IndexError(f"nmax={nmax} exceeds truncation order {f.order}")
    a = f.coeffs
    rep = HeckeReport(nmax)

    def expect(cond: bool, what: str):
        rep.checked += 1
        if not cond:
            rep.violations.append(what)

    expect(a[1] == 1, f"a_1 = {a[1]}, expected 1")
    for m in range(2, nmax + 1):
        for n in range(m + 1, nmax // m + 1):
            if gcd(m, n) == 1:
                expect(a[m * n] == a[m] * a[n], f"a_{m * n} = {a[m * n]} != a_{m} a_{n} = {a[m] * a[n]}")
    for p in range(2, nmax + 1):
        if not is_prime(p):
            continue
        pk = p * p
        r = 2
        while pk <= nmax:
            if level % p == 0:
                want = a[p] ** r
                expect(a[pk] == want, f"a_{pk} = {a[pk]} != a_{p}^{r} = {want}")
            else:
                want = a[p] * a[pk // p] - p ** (weight - 1) * a[pk // (p * p)]
                expect(a[pk] == want, f"a_{pk} = {a[pk]} != a_{p} a_{pk // p} - {p}^{weight - 1} a_{pk // (p * p)} = {want}")
            pk *= p
            r += 1
    return rep


def ap_table(order: int = DEFAULT_ORDER) -> dict[int, int]:
    """a_p of the level 6 newform for every prime p <= order."""
    f = newform_coefficients(order)
    return {p: f[p] for p in range(2, order + 1) if is_prime(p)}
