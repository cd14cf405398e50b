"""Certificates for Bernstein-Sato functional equations, found and checked exactly.

A certificate is a pair (b, P) with b in Q[s_1..s_r] and P a Weyl operator
over Q[s] such that

    b(s) * f^s  ==  P . f^(s + a)

for the fixed collection F = (f_1..f_r) and twist a.  `verify` expands both
sides as germs and compares numerators exactly; it is the oracle every
other routine in the package defers to.

`find_bs_pair` searches a bounded ansatz: the identity is linear in the
coefficients of P and b, so candidates form the nullspace of an exact
linear system.  Among solutions with b != 0 the canonical one is the
reduced-echelon representative whose leading monomial is smallest in
graded lex; it has minimal total degree, is monic, and is deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .polynomials import MPoly, format_poly, grlex_key, iter_monomials
from .weyl import (
    GermContext,
    GermElement,
    WeylOperator,
    apply,
    format_operator,
    lift_s,
    partial_derivative,
)

Exps = tuple[int, ...]

_CELL_CAP_ENV = "BSIDEAL_MAX_CELLS"
_DEFAULT_CELL_CAP = 4_000_000


class SolverError(Exception):
    pass


class InvertibleTwistError(SolverError):
    """f^a is a nonzero constant, so the equation is trivial."""


class SolveCapExceeded(SolverError):
    """The bounded linear system would exceed the configured size cap."""


@dataclass(frozen=True)
class SolveBounds:
    max_operator_order: int
    max_x_degree: int
    max_s_degree: int
    max_b_degree: int

    def __post_init__(self):
        for name in ("max_operator_order", "max_x_degree", "max_s_degree", "max_b_degree"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative int")


@dataclass(frozen=True)
class BSCertificate:
    ctx: GermContext
    a: tuple[int, ...]
    b: MPoly
    P: WeylOperator

    def to_json_dict(self) -> dict:
        sn = list(self.ctx.s_vars)
        xn = list(self.ctx.x_names)
        return {
            "F": [format_poly(f, xn + sn) for f in self.ctx.F],
            "a": list(self.a),
            "b": format_poly(self.b, sn),
            "P": format_operator(self.P, xn, sn),
        }


def verify(cert: BSCertificate) -> bool:
    """Exact check of b(s) * f^s == P . f^(s+a)."""
    ctx = cert.ctx
    lhs = GermElement.power(ctx, (0,) * ctx.r).scale(cert.b)
    rhs = apply(cert.P, GermElement.power(ctx, cert.a))
    return lhs == rhs


def _validate_twist(ctx: GermContext, a: Sequence[int]) -> tuple[int, ...]:
    a = tuple(a)
    if len(a) != ctx.r:
        raise ValueError("twist must have one entry per f_i")
    if any(x < 0 for x in a):
        raise ValueError("twist entries must be nonnegative")
    if ctx.invertible_power(a):
        raise InvertibleTwistError(
            "invertible-f^a: the twisted power is a nonzero constant"
        )
    return a


def _cell_cap() -> int:
    raw = os.environ.get(_CELL_CAP_ENV, "")
    try:
        return int(raw) if raw else _DEFAULT_CELL_CAP
    except ValueError:
        return _DEFAULT_CELL_CAP


def find_bs_pair(
    ctx: GermContext,
    a: Sequence[int],
    bounds: SolveBounds,
    d_support: Iterable[Exps] | None = None,
) -> BSCertificate | None:
    """Minimal certificate within the bounded ansatz, or None.

    d_support restricts which d-monomials the operator may use (defaults to
    every monomial of order up to the bound); it is how sampling strategies
    differ.  Every returned certificate has monic b and passes `verify`.
    """
    a = _validate_twist(ctx, a)
    n, r = ctx.n, ctx.r

    if d_support is None:
        betas = list(iter_monomials(n, bounds.max_operator_order))
    else:
        betas = sorted(
            {tuple(b) for b in d_support if sum(b) <= bounds.max_operator_order},
            key=grlex_key,
        )
        if (0,) * n not in betas:
            betas.insert(0, (0,) * n)

    germs: dict[Exps, GermElement] = {(0,) * n: GermElement.power(ctx, a)}

    def germ_for(beta: Exps) -> GermElement:
        g = germs.get(beta)
        if g is not None:
            return g
        j = next(i for i, e in enumerate(beta) if e > 0)
        prev = tuple(e - (1 if i == j else 0) for i, e in enumerate(beta))
        g = partial_derivative(germ_for(prev), j)
        germs[beta] = g
        return g

    for beta in betas:
        germ_for(beta)

    alphas = list(iter_monomials(n, bounds.max_x_degree))
    sigmas = list(iter_monomials(r, bounds.max_s_degree))
    taus = sorted(iter_monomials(r, bounds.max_b_degree), key=grlex_key, reverse=True)

    M = tuple(
        max(max(germs[b].denom[i] for b in betas), a[i]) for i in range(r)
    )

    ucols: list[tuple[Exps, Exps, Exps]] = [
        (beta, alpha, sigma) for beta in betas for alpha in alphas for sigma in sigmas
    ]
    ncols = len(ucols) + len(taus)

    rows: dict[Exps, dict[int, Fraction]] = {}

    def add_column(col: int, poly: MPoly) -> None:
        for mono, c in poly.terms.items():
            rows.setdefault(mono, {})[col] = c

    for t, (beta, alpha, sigma) in enumerate(ucols):
        g = germs[beta]
        lift = ctx.f_power(tuple(x - y for x, y in zip(M, g.denom)))
        mono = MPoly.monomial(ctx.nvars, tuple(alpha) + tuple(sigma))
        add_column(t, g.num * lift * mono)
    rhs_lift = ctx.f_power(tuple(x - y for x, y in zip(M, a)))
    for t, tau in enumerate(taus):
        mono = MPoly.monomial(ctx.nvars, (0,) * n + tuple(tau))
        add_column(len(ucols) + t, -(rhs_lift * mono))

    cap = _cell_cap()
    if len(rows) * ncols > cap:
        raise SolveCapExceeded(
            f"linear system of {len(rows)}x{ncols} exceeds cap {cap} "
            f"(set {_CELL_CAP_ENV} to raise it)"
        )

    ordered_rows = [rows[m] for m in sorted(rows, key=grlex_key, reverse=True)]
    basis = linalg.nullspace(ordered_rows, ncols)

    projections = []
    for vec in basis:
        proj = {j - len(ucols): v for j, v in vec.items() if j >= len(ucols) and v}
        if proj:
            projections.append(proj)
    if not projections:
        return None

    reduced = linalg.rref_rational(projections, len(taus))
    # columns are sorted by descending monomial, so the last pivot is the
    # smallest leading monomial available: minimal total degree, monic
    _, vstar = reduced[-1]
    b = MPoly(r, {taus[j]: c for j, c in vstar.items()})

    aug = []
    for row in ordered_rows:
        new: dict[int, Fraction] = {}
        rhs = Fraction(0)
        for j, c in row.items():
            if j < len(ucols):
                new[j] = c
            else:
                rhs -= c * vstar.get(j - len(ucols), Fraction(0))
        if rhs:
            new[len(ucols)] = rhs
        if new:
            aug.append(new)
    u = linalg.solve(aug, len(ucols))
    if u is None:  # pragma: no cover - system is consistent by construction
        raise SolverError("check-failed: inconsistent recovery system")

    op_terms: dict[tuple[Exps, Exps], MPoly] = {}
    for t, (beta, alpha, sigma) in enumerate(ucols):
        c = u[t]
        if not c:
            continue
        key = (alpha, beta)
        add = MPoly.monomial(r, sigma, c)
        op_terms[key] = op_terms[key] + add if key in op_terms else add
    P = WeylOperator(n, r, op_terms)

    cert = BSCertificate(ctx, a, b, P)
    if not verify(cert):  # pragma: no cover - solver postcondition
        raise SolverError("check-failed: solved certificate does not verify")
    return cert


# Fixed strategy list for sampling: each entry restricts the d-monomial
# support of the operator ansatz.  "mixed" allows everything up to the
# order bound, "axis-j" only powers of one derivative, "balanced" only
# products with equal exponents.
def _strategies(n: int, order: int) -> list[tuple[str, list[Exps] | None]]:
    out: list[tuple[str, list[Exps] | None]] = [("mixed", None)]
    for j in range(n):
        support = [
            tuple(k if i == j else 0 for i in range(n)) for k in range(order + 1)
        ]
        out.append((f"axis-{j + 1}", support))
    if n > 1:
        support = [(t,) * n for t in range(order // n + 1)]
        out.append(("balanced", support))
    return out


def sample_ideal(
    ctx: GermContext, a: Sequence[int], bounds: SolveBounds
) -> list[tuple[str, BSCertificate]]:
    """Certificates from every strategy that finds one, deduplicated by b.

    Sorted by (degree of b, canonical order of b); all verified.
    """
    a = _validate_twist(ctx, a)
    found: dict[MPoly, tuple[str, BSCertificate]] = {}
    for name, support in _strategies(ctx.n, bounds.max_operator_order):
        cert = find_bs_pair(ctx, a, bounds, d_support=support)
        if cert is None or cert.b in found:
            continue
        found[cert.b] = (name, cert)
    out = list(found.values())
    out.sort(key=lambda t: t[1].b.order_key())
    return out


def restrict_diagonal(p: MPoly) -> MPoly:
    """Substitute every s_i by a single s: Q[s_1..s_r] -> Q[s]."""
    t = MPoly.variable(1, 0)
    return p.compose([t] * p.nvars)
