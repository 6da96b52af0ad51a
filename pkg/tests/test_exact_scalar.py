import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qdisc.exact_scalar import (
    ExactComplex,
    InvalidFloat,
    MixedRadicalError,
    QuadExt,
    float_to_rational,
    parse_rational,
    rational_floor_bound,
    scalar_from_json,
    scalar_to_json,
    sign,
    sign_of_sum,
)

getcontext().prec = 80

small = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
radicands = st.sampled_from([2, 3, 5, 7, 13, 33])


def dec(x):
    """High-precision decimal oracle for rationals and quadratic elements."""
    if isinstance(x, QuadExt):
        return dec(x.a) + dec(x.b) * Decimal(x.d).sqrt()
    x = Fraction(x)
    return Decimal(x.numerator) / Decimal(x.denominator)


def test_parse_decimals_exactly():
    assert parse_rational("0.67") == Fraction(67, 100)
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational(5) == 5
    with pytest.raises(TypeError):
        parse_rational(0.67)


def test_float_to_rational_is_bit_exact():
    assert float_to_rational(0.1) == Fraction(0.1)
    assert float_to_rational(0.1) != Fraction(1, 10)
    with pytest.raises(InvalidFloat):
        float_to_rational(float("nan"))


def test_sqrt_normalizes_radicand():
    r = QuadExt.sqrt(Fraction(33, 100))
    assert isinstance(r, QuadExt) and r.d == 33 and r.a == 0 and r.b == Fraction(1, 10)
    assert QuadExt.sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert QuadExt.sqrt(Fraction(63, 100)) == QuadExt(0, Fraction(3, 10), 7)
    assert r * r == Fraction(33, 100)


@given(small, small, small, small, radicands)
def test_field_arithmetic(a, b, c, e, d):
    x, y = QuadExt(a, b, d), QuadExt(c, e, d)
    assert x + y - y == x
    assert x * y == QuadExt(a * c + b * e * d, a * e + b * c, d)
    if x != 0:
        assert x * x.inverse() == 1
        assert x / x == 1
    assert x * x.conjugate_radical() == x.norm()


@given(small, small, radicands)
def test_sign_matches_oracle(a, b, d):
    x = QuadExt(a, b, d)
    ref = dec(x)
    assert sign(x) == (ref > 0) - (ref < 0)


def test_mixed_radicals_rejected():
    with pytest.raises(MixedRadicalError):
        QuadExt(0, 1, 2) + QuadExt(0, 1, 3)


@given(small, small, small, st.sampled_from([(2, 3), (7, 13), (5, 33)]))
def test_sign_of_sum_two_radicals(r, b1, b2, ds):
    terms = [r, QuadExt(0, b1, ds[0]) if b1 else Fraction(0), QuadExt(0, b2, ds[1]) if b2 else Fraction(0)]
    ref = sum(dec(t) for t in terms)
    assert sign_of_sum(terms) == (ref > 0) - (ref < 0)


def test_sign_of_sum_near_cancellation():
    # 7/10 sqrt 7 - 3/5 sqrt 13 + rational tuned within 1e-12
    u, v = QuadExt(0, Fraction(7, 10), 7), QuadExt(0, Fraction(-3, 5), 13)
    approx = Fraction(round(-(dec(u) + dec(v)) * 10 ** 12), 10 ** 12)
    ref = dec(u) + dec(v) + dec(approx)
    assert sign_of_sum([u, v, approx]) == (ref > 0) - (ref < 0)


@given(small, small, radicands)
def test_rational_floor_bound(a, b, d):
    x = QuadExt(a, b, d)
    f = rational_floor_bound(x, 10 ** 9)
    assert sign(x - f) >= 0 and sign(x - f - Fraction(1, 10 ** 9)) < 0


@given(small, small, radicands)
def test_json_round_trip(a, b, d):
    for x in (a, QuadExt(a, b, d)):
        assert scalar_from_json(scalar_to_json(x)) == x
    assert isinstance(scalar_to_json(a), str) and "/" in scalar_to_json(a)


def test_complex_pairs():
    z = ExactComplex(Fraction(1, 2), QuadExt(0, 1, 2))
    assert (z * z.conjugate()).im == 0
    assert complex(z) == pytest.approx(complex(0.5, math.sqrt(2)))
