"""Exact polynomial and rational-function arithmetic."""

import random
from fractions import Fraction

import pytest

from susyxyz.exactcore import (
    DivisionByZeroPoly,
    IdenticallySingular,
    NonzeroRemainder,
    Poly,
    RatFunc,
    poly_exact_div,
    poly_from_json,
    poly_gcd,
    poly_to_json,
    ratfunc_compose,
    ratfunc_from_json,
    ratfunc_simplify,
    ratfunc_to_json,
    variable,
)

Z = variable("z")


def P(*coeffs, var="z"):
    return Poly(tuple(Fraction(c) for c in coeffs), var)


def rand_poly(rng, max_deg=6, var="z"):
    deg = rng.randrange(0, max_deg + 1)
    coeffs = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 7)) for _ in range(deg + 1)]
    return Poly(tuple(coeffs), var)


def test_normalization_strips_trailing_zeros():
    p = P(1, 2, 0, 0)
    assert p.degree == 1
    assert P(0).is_zero() and P().is_zero()


def test_exact_div_factorization():
    # (z^2 - 1)/(z - 1) = z + 1
    assert poly_exact_div(P(-1, 0, 1), P(-1, 1)) == P(1, 1)


def test_exact_div_identity_case():
    rng = random.Random(7)
    for _ in range(20):
        a = rand_poly(rng)
        if a.is_zero():
            continue
        assert poly_exact_div(a, a) == P(1)


def test_exact_div_scalar_recursion_step():
    # hand-evaluated first forward step of the tau recursion: (72z+72)/72 = z+1
    assert poly_exact_div(P(72, 72), P(72)) == P(1, 1)


def test_exact_div_errors():
    with pytest.raises(NonzeroRemainder):
        poly_exact_div(P(1, 0, 1), P(-1, 1))
    with pytest.raises(DivisionByZeroPoly):
        poly_exact_div(P(1, 1), P())


def test_exact_div_round_trip():
    rng = random.Random(11)
    for _ in range(40):
        a, b = rand_poly(rng), rand_poly(rng)
        if a.is_zero() or b.is_zero():
            continue
        assert poly_exact_div(a * b, b) == a


def test_gcd_basic():
    a = P(-1, 0, 1)          # (z-1)(z+1)
    b = P(-1, 1) * P(3, 1)   # (z-1)(z+3)
    assert poly_gcd(a, b) == P(-1, 1)
    assert poly_gcd(P(), b) == b.monic()


def test_simplify_cancels_and_normalizes():
    f = ratfunc_simplify(P(-1, 0, 1), P(-2, 2))  # (z^2-1)/(2z-2) = (z+1)/2
    assert f.num == P(Fraction(1, 2), Fraction(1, 2))
    assert f.den == P(1)


def test_simplify_zero_case():
    f = ratfunc_simplify(P(), P(0, 1))
    assert f.num == P() and f.den == P(1)


def test_simplify_already_coprime():
    # f_2 in the Z variable stays untouched
    f = ratfunc_simplify(P(27, 1, var="Z"), P(25, 1, var="Z"))
    assert f.num == P(27, 1, var="Z") and f.den == P(25, 1, var="Z")


def test_field_laws_randomized():
    rng = random.Random(5)
    for _ in range(25):
        fn, fd = rand_poly(rng, 4), rand_poly(rng, 4)
        gn, gd = rand_poly(rng, 4), rand_poly(rng, 4)
        if fd.is_zero() or gd.is_zero() or gn.is_zero():
            continue
        f = ratfunc_simplify(fn, fd)
        g = ratfunc_simplify(gn, gd)
        assert (f + g) - g == f
        assert (f * g) / g == f


def test_compose_square_of_inverse():
    x, y = variable("x"), variable("y")
    f = RatFunc.from_poly(x * x)
    g = ratfunc_simplify(Poly.constant(1, "y"), y)
    h = ratfunc_compose(f, g)
    assert h == ratfunc_simplify(Poly.constant(1, "y"), y * y)


def test_compose_identity():
    rng = random.Random(3)
    x = variable("x")
    ident = RatFunc.from_poly(x)
    for _ in range(10):
        gn, gd = rand_poly(rng, 4, "y"), rand_poly(rng, 4, "y")
        if gd.is_zero():
            continue
        g = ratfunc_simplify(gn, gd)
        assert ratfunc_compose(ident, g) == g


def test_compose_f2_against_pointwise_evaluation():
    # f = (x+27)/(x+25) composed with Z(zeta) = zeta^2(zeta^2-9)^2/(zeta^2-1)^2,
    # checked against direct evaluation at 5 rational points
    f = ratfunc_simplify(P(27, 1, var="x"), P(25, 1, var="x"))
    zeta = variable("zeta")
    g = ratfunc_simplify(
        (zeta ** 2) * (zeta ** 2 - 9) ** 2, (zeta ** 2 - 1) ** 2
    )
    h = ratfunc_compose(f, g)
    for v in [Fraction(2, 7), Fraction(1, 3), Fraction(2, 5), Fraction(5, 2), Fraction(7, 3)]:
        assert h.evaluate(v) == f.evaluate(g.evaluate(v))


def test_compose_evaluation_homomorphism():
    rng = random.Random(17)
    for _ in range(15):
        fn, fd = rand_poly(rng, 3, "x"), rand_poly(rng, 3, "x")
        gn, gd = rand_poly(rng, 3, "y"), rand_poly(rng, 3, "y")
        if fd.is_zero() or gd.is_zero():
            continue
        f = ratfunc_simplify(fn, fd)
        g = ratfunc_simplify(gn, gd)
        try:
            h = ratfunc_compose(f, g)
        except IdenticallySingular:
            continue
        for v in [Fraction(1, 2), Fraction(5, 3), Fraction(-7, 4)]:
            try:
                expected = f.evaluate(g.evaluate(v))
            except ZeroDivisionError:
                continue
            assert h.evaluate(v) == expected


def test_compose_identically_singular():
    # f has denominator x - 1; g is the constant 1
    f = ratfunc_simplify(P(1, var="x"), P(-1, 1, var="x"))
    g = RatFunc.constant(1, "y")
    with pytest.raises(IdenticallySingular):
        ratfunc_compose(f, g)


def test_derivative_quotient_rule():
    rng = random.Random(23)
    for _ in range(10):
        fn, fd = rand_poly(rng, 4), rand_poly(rng, 4)
        if fd.is_zero():
            continue
        f = ratfunc_simplify(fn, fd)
        g = f * f
        # (f^2)' = 2 f f'
        assert g.derivative() == 2 * f * f.derivative()


def test_pow_and_scalar_ops():
    f = ratfunc_simplify(P(0, 1), P(1, 1))
    assert f ** 0 == RatFunc.constant(1, "z")
    assert f ** 3 == f * f * f
    assert f ** -2 == 1 / (f * f)
    assert 2 * f - f == f


def test_json_round_trip():
    rng = random.Random(31)
    for _ in range(10):
        p = rand_poly(rng)
        assert poly_from_json(poly_to_json(p)) == p
        d = rand_poly(rng)
        if d.is_zero():
            continue
        f = ratfunc_simplify(p, d)
        assert ratfunc_from_json(ratfunc_to_json(f)) == f


def test_json_coefficient_strings():
    f = ratfunc_simplify(P(-1, 0, 1), P(-2, 2))
    obj = ratfunc_to_json(f)
    assert obj == {"variable": "z", "num": ["1/2", "1/2"], "den": ["1"]}
