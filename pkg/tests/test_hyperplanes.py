import random
from fractions import Fraction

import pytest

from bsideal.hyperplanes import (
    Hyperplane,
    check_translation_union,
    extract_hyperplanes,
    linear_form,
    primitive_slopes,
    structure_report,
)
from bsideal.polynomials import MPoly, parse_poly, s_names


def sp(text, r):
    return parse_poly(text, s_names(r))


def test_linear_form():
    assert linear_form((1, 2), Fraction(1, 2)) == sp("s1 + 2*s2 + 1/2", 2)
    assert linear_form((0, 1)) == sp("s2", 2)


def test_canonical_scales_to_primitive():
    h = Hyperplane.canonical((2, 4), 1)
    assert h.normal == (1, 2)
    assert h.intercept == Fraction(1, 2)
    h = Hyperplane.canonical((-1, -2), -3)
    assert h.normal == (1, 2)
    assert h.intercept == 3


def test_constructor_rejects_bad_normals():
    with pytest.raises(ValueError):
        Hyperplane((2, 4), Fraction(1))
    with pytest.raises(ValueError):
        Hyperplane((0, 0), Fraction(1))
    with pytest.raises(ValueError):
        Hyperplane((-1, 2), Fraction(1))


def test_canonical_idempotent_under_scaling():
    rng = random.Random(413)
    for _ in range(30):
        normal = tuple(rng.randint(-3, 3) for _ in range(3))
        if all(v == 0 for v in normal):
            normal = (1, 0, 0)
        intercept = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        h = Hyperplane.canonical(normal, intercept)
        c = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        scaled = Hyperplane.canonical(tuple(v * c for v in h.normal), h.intercept * c)
        assert scaled == h


def test_extract_univariate_with_multiplicity():
    # (s+1)^2 (2s+1): content 2 lands in the remainder
    p = sp("(s + 1)^2 * (2*s + 1)", 1)
    factors, rem = extract_hyperplanes(p)
    assert factors == [
        (Hyperplane((1,), Fraction(1, 2)), 1),
        (Hyperplane((1,), Fraction(1)), 2),
    ]
    assert rem == MPoly.const(1, 2)


def test_extract_bivariate_with_nonlinear_remainder():
    p = sp("(s1 + s2 + 1)*(s1 + 2)*(s1^2 + s2^2 + 1)", 2)
    factors, rem = extract_hyperplanes(p)
    assert factors == [
        (Hyperplane((1, 0), Fraction(2)), 1),
        (Hyperplane((1, 1), Fraction(1)), 1),
    ]
    assert rem == sp("s1^2 + s2^2 + 1", 2)


def test_extract_no_linear_factors():
    p = sp("s1^2 + s2^2 + 1", 2)
    factors, rem = extract_hyperplanes(p)
    assert factors == []
    assert rem == p


def test_extract_searches_nonnegative_slopes_only():
    # mixed-sign normals are outside the searched shape; they stay in the
    # remainder instead of being silently mis-assigned
    p = sp("(s1 - s2 + 1)*(s1 + s2 + 2)", 2)
    factors, rem = extract_hyperplanes(p)
    assert factors == [(Hyperplane((1, 1), Fraction(2)), 1)]
    assert rem == sp("s1 - s2 + 1", 2)


def test_extract_constant_and_linear_input():
    assert extract_hyperplanes(MPoly.const(2, 7)) == ([], MPoly.const(2, 7))
    factors, rem = extract_hyperplanes(sp("3*s1 + 3", 2))
    assert factors == [(Hyperplane((1, 0), Fraction(1)), 1)]
    assert rem == MPoly.const(2, 3)


def test_extract_refactors_exactly_random():
    rng = random.Random(414)
    for _ in range(25):
        r = rng.randint(1, 3)
        p = MPoly.const(r, Fraction(rng.randint(1, 3)))
        for _ in range(rng.randint(1, 3)):
            normal = tuple(rng.randint(0, 2) for _ in range(r))
            if all(v == 0 for v in normal):
                normal = (1,) + (0,) * (r - 1)
            p = p * linear_form(normal, Fraction(rng.randint(1, 6), rng.randint(1, 2)))
        if rng.random() < 0.4:
            p = p * (MPoly.variable(r, 0) ** 2 + 1)
        factors, rem = extract_hyperplanes(p)
        rebuilt = rem
        for h, m in factors:
            rebuilt = rebuilt * h.poly() ** m
        assert rebuilt == p


def test_slope_bound_controls_search():
    p = sp("9*s1 + s2 + 1", 2)
    factors, rem = extract_hyperplanes(p, slope_bound=8)
    assert factors == []
    assert rem == p
    factors, rem = extract_hyperplanes(p, slope_bound=9)
    assert factors == [(Hyperplane((9, 1), Fraction(1)), 1)]
    assert rem == MPoly.const(2, 1)


def test_primitive_slopes_small():
    assert primitive_slopes(1, 3) == [(1,)]
    got = primitive_slopes(2, 2)
    assert (1, 1) in got and (1, 2) in got and (2, 1) in got and (2, 2) not in got


def test_translate_moves_zero_set():
    h = Hyperplane((1, 2), Fraction(1))
    t = h.translate((3, -1))
    # alpha in Z(h) implies alpha + k in Z(t)
    alpha = (Fraction(-1), Fraction(0))
    assert sum(Fraction(v) * x for v, x in zip(h.normal, alpha)) + h.intercept == 0
    moved = (alpha[0] + 3, alpha[1] - 1)
    assert sum(Fraction(v) * x for v, x in zip(t.normal, moved)) + t.intercept == 0
    assert t.intercept == Fraction(0)


def test_structure_report_flags():
    ok = Hyperplane((1, 1), Fraction(1, 2))
    neg_slope = Hyperplane((1, -1), Fraction(1))
    bad_intercept = Hyperplane((1, 0), Fraction(0))
    rep = structure_report([ok, neg_slope, bad_intercept], (1, 1))
    by_h = {v.hyperplane: v for v in rep.verdicts}
    assert by_h[ok].passes
    assert not by_h[neg_slope].slopes_nonnegative
    assert not by_h[bad_intercept].intercept_positive
    assert not rep.all_pass
    # active index: normal supported only where the twist vanishes
    rep = structure_report([Hyperplane((0, 1), Fraction(1))], (1, 0))
    assert not rep.verdicts[0].has_active_index
    assert structure_report([ok], (1, 1)).all_pass


def test_structure_report_records_residual():
    rep = structure_report([], (1,), remainder=sp("s^2 + 1", 1))
    assert rep.residual_factors == (sp("s^2 + 1", 1),)
    rep = structure_report([], (1,), remainder=MPoly.const(1, 3))
    assert rep.residual_factors == ()


def test_check_translation_union():
    single = [Hyperplane((0, 1), Fraction(1)), Hyperplane((1, 1), Fraction(1))]
    multi = [
        Hyperplane((0, 1), Fraction(1)),
        Hyperplane((0, 1), Fraction(2)),
        Hyperplane((1, 1), Fraction(1)),
        Hyperplane((1, 1), Fraction(2)),
    ]
    assert check_translation_union(multi, single, axis=1, l=2)
    assert not check_translation_union(multi[:3], single, axis=1, l=2)
    # axis with zero slope contributes coincident copies
    single_x = [Hyperplane((0, 1), Fraction(1))]
    assert check_translation_union(single_x, single_x, axis=0, l=3)
    with pytest.raises(ValueError):
        check_translation_union(multi, single, axis=1, l=0)


def test_sort_key_orders_by_normal_then_intercept():
    hs = [
        Hyperplane((1, 1), Fraction(2)),
        Hyperplane((0, 1), Fraction(1)),
        Hyperplane((1, 1), Fraction(1)),
    ]
    got = sorted(hs, key=Hyperplane.sort_key)
    assert got == [hs[1], hs[2], hs[0]]


def test_text():
    assert Hyperplane((1, 2), Fraction(1, 2)).text() == "s1 + 2*s2 + 1/2"
