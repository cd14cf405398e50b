"""Sparse multivariate polynomials over the rationals.

Coefficients are `fractions.Fraction`, exponent vectors are tuples of
nonnegative ints, and every operation is exact.  Nothing in this package
ever touches floating point.

The fixed monomial order used for leading terms, display, and every
canonical tie-break is graded lexicographic: compare total degree first,
then the exponent tuple lexicographically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

Exponents = tuple[int, ...]
Scalar = int | Fraction


def grlex_key(exps: Exponents) -> tuple[int, Exponents]:
    return (sum(exps), exps)


def _coerce(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected int or Fraction, got {type(c).__name__}")


class MPoly:
    """Immutable sparse polynomial in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero Fraction coefficients.  The
    constructor normalizes: zero coefficients are dropped, ints are
    promoted to Fraction, exponent tuples are length-checked.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponents, Scalar] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: dict[Exponents, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                e = tuple(exps)
                if len(e) != nvars or any(x < 0 or not isinstance(x, int) for x in e):
                    raise ValueError(f"bad exponent tuple {e!r} for {nvars} variables")
                c = _coerce(c)
                if c:
                    acc = clean.get(e)
                    c = c if acc is None else acc + c
                    if c:
                        clean[e] = c
                    elif acc is not None:
                        del clean[e]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MPoly is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: Scalar) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MPoly":
        if not 0 <= i < nvars:
            raise IndexError("variable index out of range")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], c: Scalar = 1) -> "MPoly":
        return cls(nvars, {tuple(exps): c})

    # -- predicates and accessors ------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[Exponents, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def order_key(self) -> tuple:
        """Deterministic sort key: degree, then the sorted term list."""
        return (self.total_degree(), self.sorted_terms())

    # -- ring operations ---------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.nvars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            s = acc.get(e, Fraction(0)) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return MPoly._raw(self.nvars, acc)

    def __radd__(self, other) -> "MPoly":
        return self.__add__(other)

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.__add__(other.__neg__())

    def __rsub__(self, other) -> "MPoly":
        return self.__neg__().__add__(other)

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            if not c:
                return MPoly.zero(self.nvars)
            return MPoly._raw(self.nvars, {e: k * c for e, k in self.terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        acc: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = acc.get(e, Fraction(0)) + c1 * c2
                if s:
                    acc[e] = s
                else:
                    acc.pop(e, None)
        return MPoly._raw(self.nvars, acc)

    def __rmul__(self, other) -> "MPoly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponents, Fraction]) -> "MPoly":
        p = cls.__new__(cls)
        object.__setattr__(p, "nvars", nvars)
        object.__setattr__(p, "terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    # -- calculus and substitution -----------------------------------

    def derivative(self, i: int) -> "MPoly":
        acc: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                acc[tuple(d)] = c * e[i]
        return MPoly._raw(self.nvars, acc)

    def compose(self, replacements: Sequence["MPoly"]) -> "MPoly":
        """Substitute variable i by replacements[i] (all over one target ring)."""
        if len(replacements) != self.nvars:
            raise ValueError("need one replacement per variable")
        if not replacements:
            tgt = 0
        else:
            tgt = replacements[0].nvars
            if any(q.nvars != tgt for q in replacements):
                raise ValueError("replacements live in different rings")
        # per-variable power cache
        powers: list[list[MPoly]] = [[MPoly.const(tgt, 1)] for _ in range(self.nvars)]
        result = MPoly.zero(tgt)
        for e, c in self.sorted_terms():
            term = MPoly.const(tgt, c)
            for i, k in enumerate(e):
                cache = powers[i]
                while len(cache) <= k:
                    cache.append(cache[-1] * replacements[i])
                term = term * cache[k]
            result = result + term
        return result

    def shift(self, offsets: Sequence[Scalar]) -> "MPoly":
        """p(v1 + k1, ..., vn + kn) for scalar offsets k."""
        if len(offsets) != self.nvars:
            raise ValueError("need one offset per variable")
        reps = [
            MPoly.variable(self.nvars, i) + _coerce(k) for i, k in enumerate(offsets)
        ]
        return self.compose(reps)

    def eval_at(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("need one value per variable")
        vals = [_coerce(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            prod = c
            for v, k in zip(vals, e):
                if k:
                    prod *= v**k
            total += prod
        return total

    def embed(self, new_nvars: int, mapping: Sequence[int]) -> "MPoly":
        """Reindex variables: old variable i becomes mapping[i]."""
        if len(mapping) != self.nvars:
            raise ValueError("mapping length mismatch")
        if len(set(mapping)) != len(mapping):
            raise ValueError("mapping must be injective")
        acc: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            ne = [0] * new_nvars
            for i, k in enumerate(e):
                ne[mapping[i]] = k
            acc[tuple(ne)] = c
        return MPoly._raw(new_nvars, acc)

    # -- division -----------------------------------------------------

    def divide_exact(self, divisor: "MPoly") -> "MPoly | None":
        """Quotient self/divisor if the division is exact, else None."""
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MPoly.zero(self.nvars)
        lead_e, lead_c = divisor.leading()
        rem = dict(self.terms)
        quo: dict[Exponents, Fraction] = {}
        div_rest = [(e, c) for e, c in divisor.terms.items() if e != lead_e]
        while rem:
            e = max(rem, key=grlex_key)
            c = rem.pop(e)
            qe = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < 0 for x in qe):
                return None
            qc = c / lead_c
            quo[qe] = quo.get(qe, Fraction(0)) + qc
            for de, dc in div_rest:
                te = tuple(a + b for a, b in zip(qe, de))
                s = rem.get(te, Fraction(0)) - qc * dc
                if s:
                    rem[te] = s
                else:
                    rem.pop(te, None)
        return MPoly._raw(self.nvars, {e: c for e, c in quo.items() if c})

    def divides(self, multiple: "MPoly") -> bool:
        return multiple.divide_exact(self) is not None

    def top_form(self) -> "MPoly":
        """Homogeneous part of highest total degree."""
        d = self.total_degree()
        return MPoly._raw(
            self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d}
        )

    def __repr__(self) -> str:  # debug only; canonical text uses format_poly
        return f"MPoly({self.nvars}, {dict(self.sorted_terms())!r})"


# ---------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------


def format_poly(p: MPoly, names: Sequence[str]) -> str:
    """Render p canonically: terms in descending graded lex order,
    coefficients as reduced fractions, explicit '*' and '^'."""
    if len(names) != p.nvars:
        raise ValueError("need one name per variable")
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for e, c in p.sorted_terms():
        factors = [
            (names[i] if k == 1 else f"{names[i]}^{k}")
            for i, k in enumerate(e)
            if k > 0
        ]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not chunks:
            chunks.append(body if c > 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(chunks)


class PolyParseError(ValueError):
    """Raised when an expression cannot be parsed."""


class _Parser:
    """Recursive-descent parser for the expression grammar:

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

    Division is only allowed by nonzero constants.
    """

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.pos = 0
        self.names = list(names)
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)

    def error(self, msg: str) -> PolyParseError:
        return PolyParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self) -> MPoly:
        p = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("trailing input")
        return p

    def expr(self) -> MPoly:
        p = self.term()
        while True:
            if self.take("+"):
                p = p + self.term()
            elif self.take("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> MPoly:
        p = self.unary()
        while True:
            if self.take("*"):
                p = p * self.unary()
            elif self.take("/"):
                q = self.unary()
                if not q.is_constant() or q.is_zero():
                    raise self.error("division only by nonzero constants")
                p = p * (1 / q.constant_value())
            else:
                return p

    def unary(self) -> MPoly:
        if self.take("-"):
            return -self.unary()
        return self.power()

    def power(self) -> MPoly:
        p = self.atom()
        if self.take("^"):
            k = self.integer()
            return p**k
        return p

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected integer")
        return int(self.text[start : self.pos])

    def atom(self) -> MPoly:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            if not self.take(")"):
                raise self.error("expected ')'")
            return p
        if ch.isdigit():
            return MPoly.const(self.nvars, self.integer())
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.index:
                raise PolyParseError(
                    f"unknown variable {name!r} (have {self.names}) in {self.text!r}"
                )
            return MPoly.variable(self.nvars, self.index[name])
        raise self.error("unexpected character")


def parse_poly(text: str, names: Sequence[str]) -> MPoly:
    return _Parser(text, names).parse()


def s_names(r: int) -> list[str]:
    """Canonical names for the auxiliary variables: s for one, s1..sr otherwise."""
    if r == 1:
        return ["s"]
    return [f"s{i + 1}" for i in range(r)]


def iter_monomials(nvars: int, max_degree: int) -> Iterator[Exponents]:
    """All exponent tuples of total degree <= max_degree, ascending graded lex."""

    def rec(prefix: list[int], remaining: int, budget: int) -> Iterator[Exponents]:
        if remaining == 0:
            yield tuple(prefix)
            return
        for k in range(budget + 1):
            prefix.append(k)
            yield from rec(prefix, remaining - 1, budget - k)
            prefix.pop()

    out = list(rec([], nvars, max_degree)) if max_degree >= 0 else []
    out.sort(key=grlex_key)
    yield from out
