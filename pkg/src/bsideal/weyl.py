"""Weyl algebra operators with polynomial parameters, acting on twisted germs.

Operators live in the algebra generated by x_1..x_n, d_1..d_n over
Q[s_1..s_r]; the s variables are central and d_j x_j = x_j d_j + 1.
Operators are kept normally ordered: every term is c(s) * x^alpha * d^beta.

A germ is a formal element

    num / (f_1^m_1 ... f_r^m_r) * f_1^(s_1+a_1) ... f_r^(s_r+a_r)

with num in Q[x, s], m in N^r, a in Z^r, for a fixed collection F of
nonzero polynomials f_i.  Differentiation acts through the product and
quotient rules, so denominators grow by at most one power of each f_i per
derivative and are cancelled back eagerly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

from .polynomials import MPoly, Scalar, format_poly, grlex_key

Exps = tuple[int, ...]


def lift_s(p: MPoly, n: int) -> MPoly:
    """Embed Q[s] into Q[x, s] (x block first)."""
    r = p.nvars
    return p.embed(n + r, [n + i for i in range(r)])


def lift_x(p: MPoly, r: int) -> MPoly:
    """Embed Q[x] into Q[x, s]."""
    n = p.nvars
    return p.embed(n + r, list(range(n)))


def _coeff_poly(c: Scalar | MPoly, ns: int) -> MPoly:
    if isinstance(c, MPoly):
        if c.nvars != ns:
            raise ValueError("coefficient has wrong number of s variables")
        return c
    return MPoly.const(ns, c)


class WeylOperator:
    """Normally ordered operator: sum of c(s) * x^alpha * d^beta terms."""

    __slots__ = ("nx", "ns", "terms")

    def __init__(
        self,
        nx: int,
        ns: int,
        terms: dict[tuple[Exps, Exps], MPoly] | None = None,
    ):
        clean: dict[tuple[Exps, Exps], MPoly] = {}
        if terms:
            for (alpha, beta), c in terms.items():
                if len(alpha) != nx or len(beta) != nx:
                    raise ValueError("exponent tuple length mismatch")
                c = _coeff_poly(c, ns)
                if not c.is_zero():
                    clean[(tuple(alpha), tuple(beta))] = c
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("WeylOperator is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nx: int, ns: int) -> "WeylOperator":
        return cls(nx, ns)

    @classmethod
    def scalar(cls, nx: int, ns: int, c: Scalar | MPoly) -> "WeylOperator":
        return cls(nx, ns, {((0,) * nx, (0,) * nx): _coeff_poly(c, ns)})

    @classmethod
    def x_power(cls, nx: int, ns: int, alpha: Sequence[int]) -> "WeylOperator":
        return cls(nx, ns, {(tuple(alpha), (0,) * nx): MPoly.const(ns, 1)})

    @classmethod
    def d_power(cls, nx: int, ns: int, beta: Sequence[int]) -> "WeylOperator":
        return cls(nx, ns, {((0,) * nx, tuple(beta)): MPoly.const(ns, 1)})

    @classmethod
    def coordinate(cls, nx: int, ns: int, j: int) -> "WeylOperator":
        e = [0] * nx
        e[j] = 1
        return cls.x_power(nx, ns, e)

    @classmethod
    def partial(cls, nx: int, ns: int, j: int) -> "WeylOperator":
        e = [0] * nx
        e[j] = 1
        return cls.d_power(nx, ns, e)

    # -- structure -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Highest total d-degree; -1 for the zero operator."""
        if not self.terms:
            return -1
        return max(sum(beta) for _, beta in self.terms)

    def sorted_terms(self) -> list[tuple[Exps, Exps, MPoly]]:
        """Terms sorted by graded lex on (beta, alpha), descending."""
        items = [(a, b, c) for (a, b), c in self.terms.items()]
        items.sort(key=lambda t: (grlex_key(t[1]), grlex_key(t[0])), reverse=True)
        return items

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylOperator):
            return NotImplemented
        return (
            self.nx == other.nx and self.ns == other.ns and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.nx, self.ns, frozenset(self.terms.items())))

    # -- algebra --------------------------------------------------------

    def _check(self, other: "WeylOperator") -> None:
        if self.nx != other.nx or self.ns != other.ns:
            raise ValueError("operator shape mismatch")

    def __add__(self, other: "WeylOperator") -> "WeylOperator":
        self._check(other)
        acc = dict(self.terms)
        for key, c in other.terms.items():
            acc[key] = acc[key] + c if key in acc else c
        return WeylOperator(self.nx, self.ns, acc)

    def __sub__(self, other: "WeylOperator") -> "WeylOperator":
        return self + other.scale(-1)

    def scale(self, c: Scalar | MPoly) -> "WeylOperator":
        c = _coeff_poly(c, self.ns)
        return WeylOperator(
            self.nx, self.ns, {key: c * v for key, v in self.terms.items()}
        )

    def __mul__(self, other: "WeylOperator") -> "WeylOperator":
        """Composition, reordered via d^b x^a = sum_k k! C(b,k) C(a,k) x^(a-k) d^(b-k)."""
        self._check(other)
        acc: dict[tuple[Exps, Exps], MPoly] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                c = c1 * c2
                ranges = [range(min(b, a) + 1) for b, a in zip(b1, a2)]
                for k in iproduct(*ranges):
                    w = 1
                    for kj, bj, aj in zip(k, b1, a2):
                        if kj:
                            w *= math.comb(bj, kj) * math.comb(aj, kj) * math.factorial(kj)
                    alpha = tuple(x + y - z for x, y, z in zip(a1, a2, k))
                    beta = tuple(x + y - z for x, y, z in zip(b1, b2, k))
                    add = c * w
                    key = (alpha, beta)
                    acc[key] = acc[key] + add if key in acc else add
        return WeylOperator(self.nx, self.ns, acc)

    def __pow__(self, k: int) -> "WeylOperator":
        if k < 0:
            raise ValueError("negative operator power")
        out = WeylOperator.scalar(self.nx, self.ns, 1)
        for _ in range(k):
            out = out * self
        return out

    def shift_s(self, offsets: Sequence[Scalar]) -> "WeylOperator":
        """Substitute s_i -> s_i + offsets[i] in every coefficient."""
        return WeylOperator(
            self.nx,
            self.ns,
            {key: c.shift(offsets) for key, c in self.terms.items()},
        )


def normal_order(
    raw_terms: Iterable[tuple[Scalar | MPoly, Iterable[tuple]]],
    nx: int,
    ns: int,
) -> WeylOperator:
    """Normally order a sum of generator words.

    Each raw term is (coefficient, atoms); an atom is ("x", j) or ("d", j),
    optionally ("x", j, power).  The word multiplies left to right.
    Already-ordered input reproduces itself.
    """
    total = WeylOperator.zero(nx, ns)
    for coeff, atoms in raw_terms:
        op = WeylOperator.scalar(nx, ns, coeff)
        for atom in atoms:
            kind, j = atom[0], atom[1]
            power = atom[2] if len(atom) > 2 else 1
            e = [0] * nx
            e[j] = power
            if kind == "x":
                factor = WeylOperator.x_power(nx, ns, e)
            elif kind == "d":
                factor = WeylOperator.d_power(nx, ns, e)
            else:
                raise ValueError(f"unknown atom kind {kind!r}")
            op = op * factor
        total = total + op
    return total


def format_operator(op: WeylOperator, x_names: Sequence[str], s_names: Sequence[str]) -> str:
    """Canonical text form: terms by descending (beta, alpha), d_j printed as dx etc."""
    if op.is_zero():
        return "0"
    chunks: list[str] = []
    for alpha, beta, c in op.sorted_terms():
        factors = []
        for i, k in enumerate(alpha):
            if k:
                factors.append(x_names[i] if k == 1 else f"{x_names[i]}^{k}")
        for i, k in enumerate(beta):
            if k:
                nm = f"d{x_names[i]}"
                factors.append(nm if k == 1 else f"{nm}^{k}")
        ctext = format_poly(c, s_names)
        if not factors:
            body = f"({ctext})" if len(c.terms) > 1 else ctext
        elif c == MPoly.const(op.ns, 1):
            body = "*".join(factors)
        else:
            lead = f"({ctext})" if (len(c.terms) > 1 or ctext.startswith("-")) else ctext
            body = "*".join([lead] + factors)
        chunks.append(body if not chunks else f"+ {body}")
    return " ".join(chunks)


# ---------------------------------------------------------------------
# germs
# ---------------------------------------------------------------------


class GermContext:
    """Fixed data shared by germs: variable names and the collection F.

    F is stored in the combined ring Q[x, s] with the x block first; each
    f_i must be nonzero and free of the s variables.
    """

    __slots__ = ("x_names", "s_vars", "F", "partials", "_power_cache")

    def __init__(self, x_names: Sequence[str], s_vars: Sequence[str], F: Sequence[MPoly]):
        n, r = len(x_names), len(s_vars)
        lifted: list[MPoly] = []
        for f in F:
            if f.nvars == n:
                f = lift_x(f, r)
            if f.nvars != n + r:
                raise ValueError("f_i must live in Q[x] or Q[x, s]")
            if f.is_zero():
                raise ValueError("f_i must be nonzero")
            if any(any(e[n:]) for e in f.terms):
                raise ValueError("f_i must not involve the s variables")
            lifted.append(f)
        if len(lifted) != r:
            raise ValueError("need exactly one f_i per s variable")
        object.__setattr__(self, "x_names", tuple(x_names))
        object.__setattr__(self, "s_vars", tuple(s_vars))
        object.__setattr__(self, "F", tuple(lifted))
        object.__setattr__(
            self,
            "partials",
            tuple(tuple(f.derivative(j) for j in range(n)) for f in lifted),
        )
        object.__setattr__(self, "_power_cache", {})

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("GermContext is immutable")

    @property
    def n(self) -> int:
        return len(self.x_names)

    @property
    def r(self) -> int:
        return len(self.s_vars)

    @property
    def nvars(self) -> int:
        return self.n + self.r

    def __eq__(self, other) -> bool:
        if not isinstance(other, GermContext):
            return NotImplemented
        return (
            self.x_names == other.x_names
            and self.s_vars == other.s_vars
            and self.F == other.F
        )

    def __hash__(self) -> int:
        return hash((self.x_names, self.s_vars, self.F))

    def one(self) -> MPoly:
        return MPoly.const(self.nvars, 1)

    def s_variable(self, i: int) -> MPoly:
        return MPoly.variable(self.nvars, self.n + i)

    def f_power(self, exps: Sequence[int]) -> MPoly:
        """Product f_1^e_1 ... f_r^e_r for e >= 0."""
        key = tuple(exps)
        if any(e < 0 for e in key):
            raise ValueError("negative f power")
        cached = self._power_cache.get(key)
        if cached is None:
            cached = self.one()
            for f, e in zip(self.F, key):
                cached = cached * f**e
            self._power_cache[key] = cached
        return cached

    def invertible_power(self, a: Sequence[int]) -> bool:
        """True when f^a is a nonzero constant (every active f_i constant)."""
        return all(e == 0 or f.is_constant() for f, e in zip(self.F, a))


class GermElement:
    """num / prod f_i^denom_i * prod f_i^(s_i + twist_i)."""

    __slots__ = ("ctx", "num", "denom", "twist")

    def __init__(
        self,
        ctx: GermContext,
        num: MPoly,
        denom: Sequence[int] = (),
        twist: Sequence[int] = (),
    ):
        denom = tuple(denom) if denom else (0,) * ctx.r
        twist = tuple(twist) if twist else (0,) * ctx.r
        if num.nvars != ctx.nvars:
            raise ValueError("numerator must live in the combined ring")
        if len(denom) != ctx.r or len(twist) != ctx.r:
            raise ValueError("denominator and twist must have one entry per f_i")
        if any(m < 0 for m in denom):
            raise ValueError("denominator exponents must be nonnegative")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "denom", denom)
        object.__setattr__(self, "twist", twist)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("GermElement is immutable")

    @classmethod
    def power(cls, ctx: GermContext, twist: Sequence[int]) -> "GermElement":
        """The generator f^(s + twist)."""
        return cls(ctx, ctx.one(), (0,) * ctx.r, twist)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def net_exponents(self) -> tuple[int, ...]:
        return tuple(t - m for t, m in zip(self.twist, self.denom))

    def reduce(self) -> "GermElement":
        """Cancel f_i out of the numerator while a denominator power remains."""
        num = self.num
        denom = list(self.denom)
        for i, f in enumerate(self.ctx.F):
            while denom[i] > 0:
                q = num.divide_exact(f)
                if q is None:
                    break
                num = q
                denom[i] -= 1
        return GermElement(self.ctx, num, tuple(denom), self.twist)

    def scale(self, p: MPoly | Scalar) -> "GermElement":
        if isinstance(p, MPoly):
            if p.nvars == self.ctx.r:
                p = lift_s(p, self.ctx.n)
            if p.nvars != self.ctx.nvars:
                raise ValueError("scale polynomial has wrong ring")
            num = self.num * p
        else:
            num = self.num * p
        return GermElement(self.ctx, num, self.denom, self.twist)

    def _aligned(self, other: "GermElement") -> tuple[MPoly, MPoly, tuple[int, ...]]:
        """Numerators over a common frame; returns (p, q, net exponent)."""
        if self.ctx != other.ctx:
            raise ValueError("germs attached to different collections")
        e1 = self.net_exponents()
        e2 = other.net_exponents()
        e = tuple(min(a, b) for a, b in zip(e1, e2))
        p = self.num * self.ctx.f_power(tuple(a - c for a, c in zip(e1, e)))
        q = other.num * self.ctx.f_power(tuple(b - c for b, c in zip(e2, e)))
        return p, q, e

    def __add__(self, other: "GermElement") -> "GermElement":
        p, q, e = self._aligned(other)
        denom = tuple(max(0, -x) for x in e)
        twist = tuple(x + m for x, m in zip(e, denom))
        return GermElement(self.ctx, p + q, denom, twist)

    def __sub__(self, other: "GermElement") -> "GermElement":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GermElement):
            return NotImplemented
        p, q, _ = self._aligned(other)
        return p == q

    def __hash__(self) -> int:
        reduced = self.reduce()
        return hash((reduced.ctx, reduced.num, reduced.net_exponents()))


def partial_derivative(v: GermElement, j: int) -> GermElement:
    """d/dx_j through the twisted product, quotient rule on the f_i."""
    ctx = v.ctx
    active = [i for i in range(ctx.r) if not ctx.partials[i][j].is_zero()]
    net = v.net_exponents()
    num = v.num.derivative(j)
    for i in active:
        num = num * ctx.F[i]
    for pos, i in enumerate(active):
        coeff = ctx.s_variable(i) + net[i]
        term = v.num * ctx.partials[i][j] * coeff
        for i2 in active:
            if i2 != i:
                term = term * ctx.F[i2]
        num = num + term
    denom = tuple(
        m + (1 if i in active else 0) for i, m in enumerate(v.denom)
    )
    return GermElement(ctx, num, denom, v.twist).reduce()


def apply(op: WeylOperator, v: GermElement) -> GermElement:
    """Apply a normally ordered operator to a germ."""
    ctx = v.ctx
    if op.nx != ctx.n or op.ns != ctx.r:
        raise ValueError("operator shape does not match germ context")
    total = GermElement(ctx, MPoly.zero(ctx.nvars), (0,) * ctx.r, v.twist)
    for (alpha, beta), c in sorted(
        op.terms.items(), key=lambda t: (grlex_key(t[0][1]), grlex_key(t[0][0]))
    ):
        w = v
        for j, b in enumerate(beta):
            for _ in range(b):
                w = partial_derivative(w, j)
        mono = MPoly.monomial(ctx.nvars, tuple(alpha) + (0,) * ctx.r)
        w = w.scale(mono * lift_s(c, ctx.n))
        total = total + w
    return total.reduce()


def specialize_integer(v: GermElement, k: Sequence[int]) -> MPoly:
    """Evaluate at s = k (integer point); returns the value as a polynomial.

    Requires k + twist - denom >= 0 so the twisted powers stay polynomial.
    """
    ctx = v.ctx
    if len(k) != ctx.r:
        raise ValueError("need one integer per s variable")
    net = tuple(ki + e for ki, e in zip(k, v.net_exponents()))
    if any(e < 0 for e in net):
        raise ValueError("specialization leaves the polynomial ring")
    reps = [MPoly.variable(ctx.nvars, i) for i in range(ctx.n)] + [
        MPoly.const(ctx.nvars, ki) for ki in k
    ]
    return v.num.compose(reps) * ctx.f_power(net)
