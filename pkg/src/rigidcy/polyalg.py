"""Sparse multivariate polynomials with exact rational coefficients.

An :class:`MPoly` carries an ordered tuple of variable names and a dict from
exponent tuples to nonzero :class:`~fractions.Fraction` coefficients.  The
monomial order is graded lexicographic over the declared variable order; it
drives printing and division.

Text grammar accepted by :func:`parse`::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*        # '/' only by a nonzero integer
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | NAME | '(' expr ')'

Implicit multiplication and negative exponents are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}")


def _grlex_key(e: Exponent):
    return (sum(e), e)


class MPoly:
    """Immutable sparse polynomial over Q in an ordered set of variables."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, Fraction | int] | None = None):
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise PolyError(f"duplicate variable names in {self.vars}")
        n = len(self.vars)
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise PolyError(f"exponent {e} does not match {n} variables")
            if any(k < 0 for k in e):
                raise PolyError(f"negative exponent in {e}")
            c = Fraction(c)
            if c:
                clean[e] = c
        self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def const(cls, vars: Sequence[str], c) -> "MPoly":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "MPoly":
        vars = tuple(vars)
        if name not in vars:
            raise PolyError(f"unknown variable {name!r}")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    def with_vars(self, vars: Sequence[str]) -> "MPoly":
        """Re-express over a variable list containing every variable that occurs."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for i, v in enumerate(self.vars):
            if v in vars:
                idx.append(vars.index(v))
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            new = [0] * len(vars)
            for i, k in enumerate(e):
                if k:
                    if idx[i] is None:
                        raise PolyError(f"variable {self.vars[i]!r} occurs but is not in {vars}")
                    new[idx[i]] = k
            out[tuple(new)] = c
        return MPoly(vars, out)

    def _coerce(self, other) -> tuple["MPoly", "MPoly"]:
        if isinstance(other, MPoly):
            if other.vars == self.vars:
                return self, other
            merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
            return self.with_vars(merged), other.with_vars(merged)
        if isinstance(other, (int, Fraction)):
            return self, MPoly.const(self.vars, other)
        return NotImplemented, NotImplemented

    # arithmetic

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(i + j for i, j in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolyError(f"only nonnegative integer powers, got {k!r}")
        result = MPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.vars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if other.vars != self.vars:
            try:
                a, b = self._coerce(other)
            except PolyError:
                return False
            return a.terms == b.terms
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            # hash is variable-order independent so equal polys hash equal
            self._hash = hash(frozenset(
                (frozenset((v, k) for v, k in zip(self.vars, e) if k), c) for e, c in self.terms.items()
            ))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"MPoly({self.vars}, {self})"

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in decreasing grlex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, v: str) -> int:
        i = self._index(v)
        return max((e[i] for e in self.terms), default=-1)

    def free_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e in self.terms))

    def is_homogeneous_in(self, group: Iterable[str]) -> int | None:
        """Degree in the variable group if every term has the same one, else None."""
        idx = [self._index(v) for v in group]
        degs = {sum(e[i] for i in idx) for e in self.terms}
        if not degs:
            return 0
        return degs.pop() if len(degs) == 1 else None

    def _index(self, v: str) -> int:
        try:
            return self.vars.index(v)
        except ValueError:
            raise PolyError(f"unknown variable {v!r}") from None

    def coefficients_in(self, v: str) -> dict[int, "MPoly"]:
        """Split as sum_k c_k v^k; c_k live in the same variable list."""
        i = self._index(v)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            rest = e[:i] + (0,) + e[i + 1:]
            parts.setdefault(k, {})[rest] = c
        return {k: MPoly(self.vars, t) for k, t in parts.items()}

    def coefficients_wrt(self, group: Sequence[str]) -> dict[Exponent, "MPoly"]:
        """Split by the exponents of ``group``; coefficients omit those variables."""
        idx = [self._index(v) for v in group]
        keep = [i for i in range(len(self.vars)) if i not in idx]
        rest_vars = tuple(self.vars[i] for i in keep)
        parts: dict[Exponent, dict] = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i in idx)
            parts.setdefault(key, {})[tuple(e[i] for i in keep)] = c
        return {k: MPoly(rest_vars, t) for k, t in parts.items()}

    def derivative(self, v: str) -> "MPoly":
        i = self._index(v)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MPoly(self.vars, out)

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent: the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * len(self.vars)
        es = list(self.terms)
        return tuple(min(e[i] for e in es) for i in range(len(self.vars)))

    def divide_monomial(self, e: Exponent) -> "MPoly":
        out = {}
        for t, c in self.terms.items():
            q = tuple(a - b for a, b in zip(t, e))
            if any(k < 0 for k in q):
                raise PolyError(f"monomial {e} does not divide term {t}")
            out[q] = c
        return MPoly(self.vars, out)

    def content(self) -> Fraction:
        """Positive rational c with self/c primitive over Z (0 for the zero poly)."""
        from math import gcd, lcm
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
        return Fraction(num, den)

    # evaluation and substitution

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(point[v]) if v in point else None for v in self.vars]
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise PolyError(f"no value for {self.vars[i]!r}")
                    t *= vals[i] ** k
            total += t
        return total

    def evaluate_mod(self, point: Mapping[str, object], p: int):
        """Evaluate modulo p; values may be ints or int64 numpy arrays of residues.

        Requires p to divide no coefficient denominator.
        """
        n = len(self.vars)
        powers: list[dict[int, object]] = [dict() for _ in range(n)]

        def pw(i: int, k: int):
            cache = powers[i]
            if k not in cache:
                base = point[self.vars[i]]
                if k == 1:
                    cache[k] = base % p
                else:
                    cache[k] = pw(i, k - 1) * pw(i, 1) % p
            return cache[k]

        total = 0
        for e, c in self.terms.items():
            if c.denominator % p == 0:
                raise PolyError(f"coefficient {c} is not p-integral for p={p}")
            t = c.numerator % p * pow(c.denominator, -1, p) % p
            for i, k in enumerate(e):
                if k:
                    t = t * pw(i, k) % p
            total = (total + t) % p
        return total

    def substitute(self, images: Mapping[str, "MPoly"], vars: Sequence[str] | None = None) -> "MPoly":
        """Polynomial substitution; variables without an image are kept."""
        out_vars = tuple(vars) if vars is not None else _union_vars(
            [tuple(v for v in self.vars if v not in images)] + [g.vars for g in images.values()]
        )
        imgs = []
        for v in self.vars:
            if v in images:
                imgs.append(images[v].with_vars(out_vars))
            else:
                imgs.append(MPoly.var(out_vars, v))
        cache: dict[tuple[int, int], MPoly] = {}
        total = MPoly(out_vars)
        for e, c in self.terms.items():
            t = MPoly.const(out_vars, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = imgs[i] ** k
                    t = t * cache[key]
            total = total + t
        return total

    def __str__(self):
        return to_text(self)


def _union_vars(groups: Iterable[Sequence[str]]) -> tuple[str, ...]:
    out: list[str] = []
    for g in groups:
        for v in g:
            if v not in out:
                out.append(v)
    return tuple(out)


def polys(vars: Sequence[str]) -> tuple[MPoly, ...]:
    """Generators of the polynomial ring on ``vars``."""
    return tuple(MPoly.var(vars, v) for v in vars)


# printing

def _monomial_text(vars, e) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts)


def to_text(f: MPoly) -> str:
    """Canonical text in decreasing grlex order; re-parses to the same polynomial."""
    if not f.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = _monomial_text(f.vars, e)
        if a.denominator == 1:
            coef = str(a.numerator)
        else:
            coef = f"{a.numerator}/{a.denominator}"
        if not mono:
            body = coef
        elif a == 1:
            body = mono
        else:
            body = f"{coef}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


# parsing

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)")


def _tokenize(text: str):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m.group(1) is not None:
            toks.append(("int", m.group(1), pos))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), pos))
        else:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise ParseError(f"unexpected character {ch!r}", pos, text)
            toks.append(("op", ch, pos))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.vars = tuple(vars)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self) -> MPoly:
        f = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def expr(self) -> MPoly:
        f = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            g = self.term()
            f = f + g if op == "+" else f - g
        return f

    def term(self) -> MPoly:
        f = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            if op == "*":
                f = f * self.unary()
            else:
                tok = self.peek()
                if tok[0] != "int":
                    self.fail("division only by an integer literal")
                d = int(self.take()[1])
                if d == 0:
                    self.fail("division by zero", tok)
                f = f * Fraction(1, d)
        if self.peek()[0] in ("int", "name") or self.peek()[1] == "(":
            self.fail("implicit multiplication is not allowed")
        return f

    def unary(self) -> MPoly:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            f = self.unary()
            return -f if tok[1] == "-" else f
        return self.power()

    def power(self) -> MPoly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "int":
                self.fail("exponent must be a nonnegative integer literal")
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self) -> MPoly:
        tok = self.take()
        kind, val, pos = tok
        if kind == "int":
            return MPoly.const(self.vars, int(val))
        if kind == "name":
            if val not in self.vars:
                raise ParseError(f"unknown variable {val!r}", pos, self.text)
            return MPoly.var(self.vars, val)
        if kind == "op" and val == "(":
            f = self.expr()
            close = self.peek()
            if close[1] != ")" or close[0] != "op":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "end":
            raise ParseError("unexpected end of input", pos, self.text)
        raise ParseError(f"unexpected {val!r}", pos, self.text)


def parse(text: str, vars: Sequence[str]) -> MPoly:
    return _Parser(text, vars).parse()


# division

def exact_divide(f: MPoly, g: MPoly) -> MPoly | None:
    """Return q with f = q*g, or None when g does not divide f."""
    f, g = f._coerce(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lg, cg = g.leading_term()
    rem = dict(f.terms)
    quot: dict[Exponent, Fraction] = {}
    g_terms = list(g.terms.items())
    while rem:
        lr = max(rem, key=_grlex_key)
        shift = tuple(a - b for a, b in zip(lr, lg))
        if any(k < 0 for k in shift):
            return None
        c = rem[lr] / cg
        quot[shift] = c
        for e, cc in g_terms:
            t = tuple(a + b for a, b in zip(e, shift))
            v = rem.get(t, 0) - c * cc
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return MPoly(f.vars, quot)


def divide_with_remainder(f: MPoly, g: MPoly) -> tuple[MPoly, MPoly]:
    """Multivariate division by one divisor: f = q*g + r, no term of r divisible by lt(g)."""
    f, g = f._coerce(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lg, cg = g.leading_term()
    work = dict(f.terms)
    quot: dict[Exponent, Fraction] = {}
    rem: dict[Exponent, Fraction] = {}
    g_terms = list(g.terms.items())
    while work:
        lr = max(work, key=_grlex_key)
        shift = tuple(a - b for a, b in zip(lr, lg))
        if any(k < 0 for k in shift):
            rem[lr] = work.pop(lr)
            continue
        c = work[lr] / cg
        quot[shift] = quot.get(shift, 0) + c
        for e, cc in g_terms:
            t = tuple(a + b for a, b in zip(e, shift))
            v = work.get(t, 0) - c * cc
            if v:
                work[t] = v
            else:
                work.pop(t, None)
    return MPoly(f.vars, quot), MPoly(f.vars, rem)


def pseudo_remainder(f: MPoly, g: MPoly, v: str) -> tuple[MPoly, MPoly]:
    """Pseudo-remainder of f by g as polynomials in ``v``.

    Returns ``(r, m)`` with m = lc_v(g) and m^k f = q g + r for
    k = max(deg_v f - deg_v g + 1, 0), deg_v r < deg_v g.
    """
    f, g = f._coerce(g)
    dg = g.degree(v)
    if dg < 1:
        raise PolyError(f"divisor has degree {dg} in {v!r}; need a positive degree")
    gc = g.coefficients_in(v)
    m = gc[dg]
    x = MPoly.var(f.vars, v)
    df = f.degree(v)
    k = max(df - dg + 1, 0)
    r = f
    steps = 0
    while not r.is_zero() and r.degree(v) >= dg:
        dr = r.degree(v)
        lr = r.coefficients_in(v)[dr]
        r = m * r - lr * x ** (dr - dg) * g
        steps += 1
    if steps < k:
        r = r * m ** (k - steps)
    return r, m


def pseudo_exponent(f: MPoly, g: MPoly, v: str) -> int:
    """The power k of lc_v(g) used by :func:`pseudo_remainder`."""
    return max(f.degree(v) - g.degree(v) + 1, 0)


# rational substitutions

@dataclass(frozen=True)
class RationalSubstitution:
    """Per-variable images num/den; variables without an entry map to themselves."""

    images: Mapping[str, tuple[MPoly, MPoly]]

    def __post_init__(self):
        for v, (num, den) in self.images.items():
            if den.is_zero():
                raise ZeroDivisionError(f"zero denominator in the image of {v!r}")

    @classmethod
    def polynomial(cls, images: Mapping[str, MPoly]) -> "RationalSubstitution":
        return cls({v: (g, MPoly.const(g.vars, 1)) for v, g in images.items()})

    def target_vars(self) -> tuple[str, ...]:
        return _union_vars([n.vars + d.vars for n, d in self.images.values()])

    def evaluate(self, v: str, point: Mapping[str, Fraction]) -> Fraction:
        num, den = self.images[v]
        d = den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError(f"denominator of {v!r} vanishes at {dict(point)}")
        return num.evaluate(point) / d


def substitute_clearing_denominators(f: MPoly, sigma: RationalSubstitution) -> tuple[MPoly, MPoly]:
    """Compose f with a rational substitution and clear denominators.

    Returns ``(N, D)`` with f o sigma = N / D.  D is the product over the
    variables of f of their image denominators raised to deg_v f; no common
    factor is cancelled.
    """
    for v in f.free_vars():
        if v not in sigma.images:
            raise PolyError(f"variable {v!r} has no image")
    out_vars = sigma.target_vars()
    nums, dens, degs = [], [], []
    for i, v in enumerate(f.vars):
        d = f.degree(v)
        degs.append(max(d, 0))
        if v in sigma.images:
            n_, d_ = sigma.images[v]
            nums.append(n_.with_vars(out_vars))
            dens.append(d_.with_vars(out_vars))
        else:
            nums.append(None)
            dens.append(None)
    cache: dict[tuple[int, int, bool], MPoly] = {}

    def power(i, k, den):
        key = (i, k, den)
        if key not in cache:
            cache[key] = (dens[i] if den else nums[i]) ** k
        return cache[key]

    one = MPoly.const(out_vars, 1)
    N = MPoly(out_vars)
    for e, c in f.terms.items():
        t = MPoly.const(out_vars, c)
        for i, k in enumerate(e):
            if degs[i] == 0:
                continue
            if k:
                t = t * power(i, k, False)
            if degs[i] - k:
                t = t * power(i, degs[i] - k, True)
        N = N + t
    D = one
    for i in range(len(f.vars)):
        if degs[i]:
            D = D * power(i, degs[i], True)
    return N, D
