"""Combinatorics of simple normal crossing resolution data.

A resolution graph records, for each divisor component E_k, the vector
L_k of multiplicities of the pullbacks of f_1..f_r along E_k and the Euler
number chi_k of the open stratum.  From that data the module produces:

* the active component set for a twist a (components where the twisted
  pullback actually vanishes),
* the slope set {primitive L_k},
* the product b-element prod_k prod_{j=1..L_k.a} (L_k.s + j) together
  with, for pure monomial collections, the witnessing operator
  prod_k d_k^(L_k.a), which `solver.verify` confirms exactly,
* the monodromy zeta factorization prod (1 - t^L_k)^chi_k and its
  one-variable specializations,
* combinatorial support loci: unions of torsion cosets lambda^L_k = 1.

The support loci are a combinatorial model read off the resolution data;
they are validated against exponential images of computed zero loci on
the bundled corpus rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .hyperplanes import linear_form
from .polynomials import MPoly, format_poly, grlex_key
from .solver import BSCertificate
from .weyl import GermContext, WeylOperator


class SNCError(Exception):
    pass


class EmptySupportError(SNCError):
    """empty-K: no component carries an f_i with nonzero twist."""


def default_x_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class GraphComponent:
    weights: tuple[int, ...]
    chi: int

    def __post_init__(self):
        if not self.weights or all(w == 0 for w in self.weights):
            raise ValueError("component must carry at least one f_i")
        if any(w < 0 or not isinstance(w, int) for w in self.weights):
            raise ValueError("multiplicities must be nonnegative ints")


@dataclass(frozen=True)
class ResolutionGraph:
    r: int
    components: tuple[GraphComponent, ...]

    def __post_init__(self):
        if any(len(c.weights) != self.r for c in self.components):
            raise ValueError("every component needs one multiplicity per f_i")

    def maps_into(self, k: int) -> frozenset[int]:
        """Indices i of the f_i whose divisor contains component k."""
        return frozenset(
            i for i, w in enumerate(self.components[k].weights) if w > 0
        )

    @classmethod
    def from_json_dict(cls, data: dict) -> "ResolutionGraph":
        try:
            r = int(data["r"])
            comps = tuple(
                GraphComponent(tuple(int(x) for x in c["L"]), int(c.get("chi", 0)))
                for c in data["components"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed resolution graph: {exc}") from exc
        return cls(r, comps)

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "components": [
                {"L": list(c.weights), "chi": c.chi} for c in self.components
            ],
        }


def graph_from_exponents(
    exponents: Sequence[Sequence[int]], chis: Sequence[int] | None = None
) -> ResolutionGraph:
    """Graph of a pure monomial collection: one component per coordinate.

    exponents[j][k] is the power of coordinate k in f_j; coordinates that
    appear in no f_j are not divisor components and are dropped.
    """
    r = len(exponents)
    if r == 0:
        raise ValueError("need at least one monomial")
    n = len(exponents[0])
    if any(len(row) != n for row in exponents):
        raise ValueError("ragged exponent matrix")
    comps = []
    for k in range(n):
        weights = tuple(int(exponents[j][k]) for j in range(r))
        if all(w == 0 for w in weights):
            continue
        chi = int(chis[k]) if chis is not None else 0
        comps.append(GraphComponent(weights, chi))
    return ResolutionGraph(r, tuple(comps))


def support_components(graph: ResolutionGraph, a: Sequence[int]) -> tuple[int, ...]:
    """Components carrying some f_i with a_i != 0; error when none do."""
    a = tuple(a)
    if len(a) != graph.r:
        raise ValueError("twist length mismatch")
    out = tuple(
        k
        for k in range(len(graph.components))
        if any(a[i] != 0 for i in graph.maps_into(k))
    )
    if not out:
        raise EmptySupportError(
            "empty-K: no component carries an f_i with nonzero twist"
        )
    return out


def slope_set(graph: ResolutionGraph, a: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Primitive multiplicity vectors of the active components, sorted."""
    prims = {
        _primitive(graph.components[k].weights)
        for k in support_components(graph, a)
    }
    return tuple(sorted(prims, key=grlex_key))


def snc_b_element(graph: ResolutionGraph, a: Sequence[int]) -> MPoly:
    """prod over active components k of prod_{j=1..L_k.a} (L_k.s + j)."""
    a = tuple(a)
    out = MPoly.const(graph.r, 1)
    for k in support_components(graph, a):
        weights = graph.components[k].weights
        la = sum(w * x for w, x in zip(weights, a))
        for j in range(1, la + 1):
            out = out * linear_form(weights, j)
    return out


def snc_certificate(
    exponents: Sequence[Sequence[int]],
    a: Sequence[int],
    x_names: Sequence[str] | None = None,
    s_vars: Sequence[str] | None = None,
) -> BSCertificate:
    """Closed-form certificate for a pure monomial collection.

    With f_j = prod_k y_k^(l_{j,k}) and c_k = sum_j a_j l_{j,k}, the
    operator prod_k d_k^(c_k) applied to f^(s+a) produces exactly the
    graph b-element times f^s; the returned certificate carries that pair.
    """
    from .polynomials import s_names as _s_names

    graph = graph_from_exponents(exponents)
    a = tuple(a)
    b = snc_b_element(graph, a)  # raises on empty support

    r = len(exponents)
    n = len(exponents[0])
    xn = list(x_names) if x_names is not None else default_x_names(n)
    sn = list(s_vars) if s_vars is not None else _s_names(r)
    F = [
        MPoly.monomial(n, tuple(int(e) for e in row))
        for row in exponents
    ]
    ctx = GermContext(xn, sn, F)
    beta = tuple(
        sum(a[j] * int(exponents[j][k]) for j in range(r)) for k in range(n)
    )
    P = WeylOperator.d_power(n, r, beta)
    return BSCertificate(ctx, a, b, P)


def pullback_slope_check(
    slopes: Iterable[Sequence[int]], graph: ResolutionGraph, a: Sequence[int]
) -> bool:
    """Every given slope occurs among the active components' slopes."""
    allowed = set(slope_set(graph, a))
    return all(tuple(int(x) for x in s) in allowed for s in slopes)


@dataclass(frozen=True)
class MonZeta:
    """Formal product prod (1 - t^v)^e over nonzero exponent vectors v."""

    r: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def make(cls, r: int, pairs: Iterable[tuple[Sequence[int], int]]) -> "MonZeta":
        acc: dict[tuple[int, ...], int] = {}
        for v, e in pairs:
            v = tuple(int(x) for x in v)
            if len(v) != r or all(x == 0 for x in v) or any(x < 0 for x in v):
                raise ValueError(f"bad exponent vector {v}")
            acc[v] = acc.get(v, 0) + int(e)
        factors = tuple(
            (v, e) for v, e in sorted(acc.items(), key=lambda t: grlex_key(t[0])) if e
        )
        return cls(r, factors)

    def text(self) -> str:
        if not self.factors:
            return "1"
        names = ["t"] if self.r == 1 else [f"t{i + 1}" for i in range(self.r)]
        parts = []
        for v, e in self.factors:
            mono = format_poly(MPoly.monomial(self.r, v), names)
            parts.append(f"(1 - {mono})^{e}")
        return " * ".join(parts)

    def to_json_dict(self) -> dict:
        return {"factors": [{"v": list(v), "exp": e} for v, e in self.factors]}


def mon_zeta(graph: ResolutionGraph) -> MonZeta:
    return MonZeta.make(
        graph.r, ((c.weights, c.chi) for c in graph.components)
    )


def sabbah_specialize(z: MonZeta, m: Sequence[int]) -> MonZeta:
    """Substitute t_i := t^(m_i), m strictly positive: exponent vectors
    contract to v.m and equal contractions merge."""
    m = tuple(int(x) for x in m)
    if len(m) != z.r or any(x <= 0 for x in m):
        raise ValueError("specialization weights must be positive")
    return MonZeta.make(
        1, (((sum(a * b for a, b in zip(v, m)),), e) for v, e in z.factors)
    )


def reweight(graph: ResolutionGraph, m: Sequence[int]) -> ResolutionGraph:
    """Graph of the product f_1^(m_1) ... f_r^(m_r): multiplicities contract."""
    m = tuple(int(x) for x in m)
    if len(m) != graph.r or any(x <= 0 for x in m):
        raise ValueError("weights must be positive")
    comps = tuple(
        GraphComponent((sum(w * x for w, x in zip(c.weights, m)),), c.chi)
        for c in graph.components
    )
    return ResolutionGraph(1, comps)


def support_loci(graph: ResolutionGraph, a: Sequence[int]):
    """Union over i with a_i != 0 of the torsion loci lambda^(L_k) = 1 for
    the components containing the divisor of f_i, as sorted canonical cosets."""
    from .torus import TorusCoset, cosets_of_character

    a = tuple(a)
    support_components(graph, a)  # raises empty-K consistently
    out: set[TorusCoset] = set()
    for i in range(graph.r):
        if a[i] == 0:
            continue
        for k in range(len(graph.components)):
            if i in graph.maps_into(k):
                out.update(cosets_of_character(graph.components[k].weights, 0))
    return tuple(sorted(out, key=lambda c: c.sort_key()))
