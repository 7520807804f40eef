"""Explicit models and point counting over F_p.

Models live in ``models.json`` as polynomial text, one variable group per
projective factor.  The elliptic surface S is

    H*(s1, s0; x, y, z) = (s1 + s0) xyz - s0 (x + y + z)(yz + zx + xy),

fibred over P^1 with s = s1/s0.  Its singular fibres sit at s = 8, -1, 0, oo
(Kodaira types I1, I2, I3, I6 after resolving S).

Counts here are on the models exactly as written.  Fibre counts on the
minimal resolution of S, which differ only over s = oo, are provided
separately for the trace assembly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .ffield import PrimeModulus, point_array, projective_count
from .polyalg import MPoly, parse

INF = None  # the point s = oo of P^1

#: finite s-values with singular fibres, keyed by Kodaira type
SINGULAR_S = {"I1": 8, "I2": -1, "I3": 0}


@dataclass(frozen=True)
class VarietyModel:
    name: str
    factors: tuple[tuple[str, ...], ...]
    equations: tuple[MPoly, ...]
    description: str = ""

    @property
    def ambient(self) -> tuple[int, ...]:
        return tuple(len(f) - 1 for f in self.factors)

    @property
    def vars(self) -> tuple[str, ...]:
        return tuple(v for f in self.factors for v in f)

    def multidegrees(self) -> list[tuple[int, ...]]:
        """Multidegree of each equation; raises if one is not multihomogeneous."""
        out = []
        for eq in self.equations:
            degs = []
            for group in self.factors:
                d = eq.is_homogeneous_in(group)
                if d is None:
                    raise ValueError(f"{self.name}: equation not homogeneous in {group}")
                degs.append(d)
            out.append(tuple(degs))
        return out


def make_model(name: str, factors: Sequence[Sequence[str]], equations: Sequence[str | MPoly], description: str = "") -> VarietyModel:
    factors = tuple(tuple(f) for f in factors)
    allvars = tuple(v for f in factors for v in f)
    eqs = tuple(e.with_vars(allvars) if isinstance(e, MPoly) else parse(e, allvars) for e in equations)
    model = VarietyModel(name, factors, eqs, description)
    model.multidegrees()
    return model


@lru_cache(maxsize=None)
def registry() -> dict[str, VarietyModel]:
    raw = json.loads(resources.files(__package__).joinpath("models.json").read_text())
    return {
        name: make_model(name, spec["factors"], spec["equations"], spec.get("description", ""))
        for name, spec in raw.items()
    }


def get_model(name: str) -> VarietyModel:
    try:
        return registry()[name]
    except KeyError:
        raise KeyError(f"unknown model {name!r}; known: {sorted(registry())}") from None


def _p(p) -> int:
    return p.p if isinstance(p, PrimeModulus) else PrimeModulus(int(p)).p


def count_projective_zeros(model: VarietyModel, p) -> int:
    """Brute-force count of common zeros in the ambient product space."""
    q = _p(p)
    arrays = [point_array(n, q) for n in model.ambient]
    inner = max(range(len(arrays)), key=lambda i: arrays[i].shape[0])
    outer = [i for i in range(len(arrays)) if i != inner]
    inner_vals = {v: arrays[inner][:, j] for j, v in enumerate(model.factors[inner])}
    size = arrays[inner].shape[0]
    total = 0
    for rows in itertools.product(*(arrays[i] for i in outer)):
        vals = dict(inner_vals)
        for i, row in zip(outer, rows):
            vals.update({v: int(c) for v, c in zip(model.factors[i], row)})
        mask = np.ones(size, dtype=bool)
        for eq in model.equations:
            mask &= np.broadcast_to(np.asarray(eq.evaluate_mod(vals, q)) == 0, (size,))
        total += int(mask.sum())
    return total


# fibres of S -> P^1

@dataclass(frozen=True)
class FiberCount:
    p: int
    s: Optional[int]  # residue in [0, p), or None for oo
    N: int
    singular: bool

    @property
    def s_label(self) -> str:
        return "inf" if self.s is None else str(self.s)

    def hasse_ok(self) -> bool:
        return (self.p + 1 - self.N) ** 2 <= 4 * self.p


@lru_cache(maxsize=8)
def _plane_data(p: int):
    pts = point_array(2, p)
    x, y, z = pts.T
    e = (x + y + z) % p * ((y * z + z * x + x * y) % p) % p
    m = x * y % p * z % p
    return e, m


def singular_s_values(p: int) -> set:
    return {8 % p, (-1) % p, 0, INF}


def count_fiber(p, s: Optional[int]) -> FiberCount:
    """Points of the plane cubic H*(s) = 0 over F_p, s in F_p or None for oo."""
    q = _p(p)
    if q < 5:
        raise ValueError("fibre counts need p >= 5")
    e, m = _plane_data(q)
    if s is None:
        n = int(np.count_nonzero(m == 0))
    else:
        s %= q
        n = int(np.count_nonzero(((s + 1) * m - e) % q == 0))
    return FiberCount(q, s, n, s in singular_s_values(q))


def fiber_counts(p) -> list[FiberCount]:
    """All fibres, s = 0..p-1 then oo."""
    q = _p(p)
    return [count_fiber(q, s) for s in range(q)] + [count_fiber(q, INF)]


def count_fiber_product(p) -> tuple[int, list[FiberCount]]:
    fibers = fiber_counts(p)
    return sum(f.N * f.N for f in fibers), fibers


def count_surface(p) -> int:
    return sum(f.N for f in fiber_counts(p))


def direct_fiber_product_count(p) -> int:
    """#{(s, P, Q) : H(s, P) = H(s, Q) = 0} by enumeration of P^1 x P^2 x P^2."""
    return count_projective_zeros(get_model("fiberprod"), p)


# singular points

def fiber_polynomial(s: int) -> MPoly:
    """H(x, y, z) at a finite s, as a cubic in x, y, z."""
    h = get_model("surface").equations[0]
    return h.substitute({"s1": MPoly.const(("x",), s), "s0": MPoly.const(("x",), 1)}, vars=("x", "y", "z"))


def _common_zeros_p2(polys: Sequence[MPoly], p: int) -> list[tuple[int, ...]]:
    pts = point_array(2, p)
    vals = {"x": pts[:, 0], "y": pts[:, 1], "z": pts[:, 2]}
    mask = np.ones(pts.shape[0], dtype=bool)
    for f in polys:
        mask &= np.broadcast_to(np.asarray(f.evaluate_mod(vals, p)) == 0, mask.shape)
    return [tuple(int(c) for c in row) for row in pts[mask]]


def fiber_nodes(p, s: int) -> list[tuple[int, ...]]:
    """F_p-rational singular points of the fibre cubic at finite s."""
    q = _p(p)
    h = fiber_polynomial(s % q)
    return _common_zeros_p2([h] + [h.derivative(v) for v in ("x", "y", "z")], q)


def surface_singular_points_at_infinity(p) -> list[tuple[int, ...]]:
    """Rational singular points of S over s = oo, in the chart s1 = 1, s0 = u."""
    q = _p(p)
    h = get_model("surface").equations[0]
    chart = h.substitute({"s1": MPoly.const(("u", "x", "y", "z"), 1), "s0": MPoly.var(("u", "x", "y", "z"), "u")},
                         vars=("u", "x", "y", "z"))
    at_zero = {"u": MPoly.const(("x", "y", "z"), 0)}
    eqs = [chart] + [chart.derivative(v) for v in ("u", "x", "y", "z")]
    eqs = [g.substitute(at_zero, vars=("x", "y", "z")) for g in eqs]
    return _common_zeros_p2(eqs, q)


def resolved_fiber_counts(p) -> list[int]:
    """Fibre counts on the minimal resolution of S, same order as fiber_counts.

    Blowing up a rational node of S replaces one point with an exceptional
    conic, which has p + 1 points over F_p.
    """
    q = _p(p)
    counts = [f.N for f in fiber_counts(q)]
    counts[-1] += q * len(surface_singular_points_at_infinity(q))
    return counts


def resolved_square_sum(p) -> int:
    return sum(n * n for n in resolved_fiber_counts(p))


@dataclass
class NodeCensus:
    p: int
    R: int
    nodes: dict = field(default_factory=dict)  # s label -> node count on the resolved fibre
    points: dict = field(default_factory=dict)  # s label -> rational node coordinates


def node_census(p) -> NodeCensus:
    """Rational nodes of the fibre product of the resolved surface with itself.

    Over each singular s the fibre product has (#rational fibre nodes)^2
    nodes.  Over oo the resolved fibre is a hexagon: each blown-up vertex of
    the coordinate triangle xyz = 0 is replaced by a line meeting the two
    coordinate lines through it, giving two rational nodes per vertex.
    """
    q = _p(p)
    if q < 5:
        raise ValueError("node census needs p >= 5")
    census = NodeCensus(q, 0)
    for kind, s in SINGULAR_S.items():
        pts = fiber_nodes(q, s)
        census.nodes[str(s % q)] = len(pts)
        census.points[str(s % q)] = pts
    vertices = surface_singular_points_at_infinity(q)
    census.nodes["inf"] = 2 * len(vertices)
    census.points["inf"] = vertices
    census.R = sum(k * k for k in census.nodes.values())
    return census


def count_model(name: str, p) -> int:
    """Point count of a registry model, using the fibrewise route where one exists."""
    q = _p(p)
    if name == "surface":
        return count_surface(q)
    if name == "fiberprod":
        return count_fiber_product(q)[0]
    return count_projective_zeros(get_model(name), q)


__all__ = [
    "INF", "VarietyModel", "FiberCount", "NodeCensus", "make_model", "registry", "get_model",
    "count_projective_zeros", "count_fiber", "fiber_counts", "count_fiber_product", "count_surface",
    "direct_fiber_product_count", "fiber_nodes", "surface_singular_points_at_infinity",
    "resolved_fiber_counts", "resolved_square_sum", "node_census", "count_model", "projective_count",
]
