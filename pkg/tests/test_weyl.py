"""Operator algebra and twisted-germ calculus.

The independent oracle: a certificate statement specialized at integer
exponents is a statement about honest polynomials, checkable with plain
partial derivatives and no operator machinery.
"""

import math
import random
from fractions import Fraction

import pytest

from bsideal.polynomials import MPoly, parse_poly
from bsideal.weyl import (
    GermContext,
    GermElement,
    WeylOperator,
    apply,
    format_operator,
    lift_s,
    normal_order,
    partial_derivative,
    specialize_integer,
)


def op_from_atoms(*atoms, nx=1, ns=1):
    return normal_order([(Fraction(1), list(atoms))], nx, ns)


def test_commutator_dx_x():
    dx_x = op_from_atoms(("d", 0), ("x", 0))
    x_dx = op_from_atoms(("x", 0), ("d", 0))
    one = WeylOperator.scalar(1, 1, 1)
    assert dx_x - x_dx == one


def test_normal_order_d2x():
    got = op_from_atoms(("d", 0, 2), ("x", 0))
    assert format_operator(got, ["x"], ["s"]) == "x*dx^2 + 2*dx"


def test_normal_order_dbxa_coefficients():
    # d^3 x^2 = x^2 d^3 + 6 x d^2 + 6 d
    got = op_from_atoms(("d", 0, 3), ("x", 0, 2))
    want = (
        op_from_atoms(("x", 0, 2), ("d", 0, 3))
        + op_from_atoms(("x", 0), ("d", 0, 2)).scale(6)
        + op_from_atoms(("d", 0)).scale(6)
    )
    assert got == want


def test_mul_associative_random():
    rng = random.Random(408)

    def rand_op():
        terms = {}
        for _ in range(rng.randint(1, 3)):
            alpha = (rng.randint(0, 2),)
            beta = (rng.randint(0, 2),)
            c = MPoly(1, {(rng.randint(0, 1),): Fraction(rng.randint(-3, 3))})
            if c.is_zero():
                c = MPoly.const(1, 1)
            terms[(alpha, beta)] = c
        return WeylOperator(1, 1, terms)

    for _ in range(15):
        p, q, r = rand_op(), rand_op(), rand_op()
        assert (p * q) * r == p * (q * r)


def test_pow_matches_repeated_mul():
    dx = WeylOperator.partial(1, 1, 0)
    x = WeylOperator.coordinate(1, 1, 0)
    op = x * dx
    assert op**3 == op * op * op
    assert op**0 == WeylOperator.scalar(1, 1, 1)


def test_order():
    op = op_from_atoms(("x", 0, 2), ("d", 0, 3))
    assert op.order() == 3
    assert WeylOperator.scalar(1, 1, 5).order() == 0


def test_shift_s_roundtrip():
    s = MPoly.variable(1, 0)
    op = WeylOperator.partial(1, 1, 0).scale(s * s + 2)
    shifted = op.shift_s((3,))
    assert shifted != op
    assert shifted.shift_s((-3,)) == op


def ctx1():
    return GermContext(["x"], ["s"], [parse_poly("x", ["x"])])


def test_euler_operator_reads_off_s():
    ctx = ctx1()
    germ = GermElement.power(ctx, (0,))
    euler = op_from_atoms(("x", 0), ("d", 0))
    s = lift_s(MPoly.variable(1, 0), 1)
    assert apply(euler, germ) == germ.scale(s)


def test_partial_derivative_product_rule():
    # d/dx of (x^2+x) f^s for f = x: (2x+1) f^s + s (x+1) f^s
    ctx = ctx1()
    germ = GermElement.power(ctx, (0,)).scale(parse_poly("x^2 + x", ["x"]).embed(2, (0,)))
    got = partial_derivative(germ, 0)
    s = MPoly.variable(2, 1)
    x = MPoly.variable(2, 0)
    plain = GermElement.power(ctx, (0,))
    want = plain.scale(x * 2 + 1) + plain.scale(s * (x + 1))
    assert got == want


def test_germ_equality_alignment():
    # x * f^s / f == f^s for f = x
    ctx = ctx1()
    plain = GermElement.power(ctx, (0,))
    stretched = GermElement(ctx, MPoly.variable(2, 0), (1,), (0,))
    assert stretched == plain
    assert hash(stretched) == hash(plain)


def test_apply_linearity():
    ctx = GermContext(["x", "y"], ["s1", "s2"],
                      [parse_poly(t, ["x", "y"]) for t in ("x + y^2", "y")])
    germ = GermElement.power(ctx, (1, 0))
    rng = random.Random(409)
    for _ in range(10):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            key = ((rng.randint(0, 1), rng.randint(0, 1)),
                   (rng.randint(0, 2), rng.randint(0, 1)))
            terms[key] = MPoly.const(2, Fraction(rng.randint(1, 4)))
        p = WeylOperator(2, 2, terms)
        q = WeylOperator.partial(2, 2, 1)
        lhs = apply(p + q, germ)
        assert lhs == apply(p, germ) + apply(q, germ)


def test_apply_composition_random():
    ctx = GermContext(["x", "y"], ["s1", "s2"],
                      [parse_poly(t, ["x", "y"]) for t in ("x + y^2", "x*y + 1")])
    base = GermElement.power(ctx, (1, 2))
    rng = random.Random(410)

    def rand_op():
        terms = {}
        for _ in range(rng.randint(1, 2)):
            key = ((rng.randint(0, 1), rng.randint(0, 1)),
                   (rng.randint(0, 1), rng.randint(0, 1)))
            c = MPoly(2, {(rng.randint(0, 1), rng.randint(0, 1)):
                          Fraction(rng.randint(-3, 3))})
            terms[key] = c if not c.is_zero() else MPoly.const(2, 1)
        return WeylOperator(2, 2, terms)

    for _ in range(6):
        p, q = rand_op(), rand_op()
        assert apply(p * q, base) == apply(p, apply(q, base))
    # one deeper instance with second order factors
    p = WeylOperator.d_power(2, 2, (2, 0)) + WeylOperator.x_power(2, 2, (0, 1))
    q = WeylOperator.d_power(2, 2, (1, 1))
    assert apply(p * q, base) == apply(p, apply(q, base))


def plain_apply(op, poly, svals):
    """Differentiate an honest polynomial: the no-germ oracle."""
    n = poly.nvars
    acc = MPoly.zero(n)
    for (alpha, beta), c in op.terms.items():
        term = poly
        for j, bj in enumerate(beta):
            for _ in range(bj):
                term = term.derivative(j)
        mono = MPoly.monomial(n, tuple(alpha) + (0,) * (n - len(alpha)))
        cval = c.eval_at(tuple(Fraction(v) for v in svals))
        acc = acc + term * mono * cval
    return acc


def test_specialize_integer_matches_plain_calculus():
    ctx = GermContext(["x", "y"], ["s1", "s2"],
                      [parse_poly(t, ["x", "y"]) for t in ("x^2 + y", "y")])
    base = GermElement.power(ctx, (0, 1))
    rng = random.Random(411)
    for _ in range(10):
        beta = (rng.randint(0, 2), rng.randint(0, 2))
        op = WeylOperator.d_power(2, 2, beta)
        got = apply(op, base)
        # each derivative can lower both net exponents, so stay clear of 0
        k = (rng.randint(4, 6), rng.randint(4, 6))
        val = specialize_integer(got, k)
        # the same statement about honest polynomials, in the combined ring
        want = plain_apply(op, ctx.f_power((k[0], k[1] + 1)), k)
        assert val == want


def test_specialize_integer_rejects_negative_net():
    ctx = ctx1()
    germ = GermElement(ctx, MPoly.const(2, 1), (2,), (0,))
    with pytest.raises(ValueError):
        specialize_integer(germ, (1,))


def test_germ_twist_absorption():
    # f^(s+1) and f * f^s are the same germ
    ctx = ctx1()
    shifted = GermElement.power(ctx, (1,))
    plain = GermElement.power(ctx, (0,)).scale(MPoly.variable(2, 0))
    assert shifted == plain
    assert (shifted + plain) == plain.scale(2)
