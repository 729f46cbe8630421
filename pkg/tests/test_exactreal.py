from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from monofact.errors import DomainError, IndependenceViolation
from monofact.exactreal import (
    DecimalScalar,
    RadicalScalar,
    combine,
    compare,
    floor_quotient,
    is_squarefree,
    radical,
    sign,
    squarefree_split,
)

from conftest import rs

mpmath.mp.dps = 200

SQUAREFREE = [d for d in range(1, 60) if is_squarefree(d)]


def mp_value(x: RadicalScalar):
    return sum((mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(d) for d, c in x.terms), mpmath.mpf(0))


def mp_sign(value) -> int:
    return (value > 0) - (value < 0)


coefficients = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.dictionaries(st.sampled_from(SQUAREFREE), coefficients, max_size=5).map(
    lambda t: RadicalScalar.from_terms(t))


# --- combine -------------------------------------------------------------

def test_combine_unions_terms():
    assert combine([1, 1], [radical(1, 2), radical(1, 3)]).as_dict() == {2: 1, 3: 1}


def test_combine_cancels_to_zero():
    z = combine([1, -1], [radical(1, 2), radical(1, 2)])
    assert z.terms == () and z.is_zero()


def test_combine_like_terms():
    assert combine([2, -1], [radical(1, 2), radical(3, 2)]).as_dict() == {2: -1}


def test_combine_length_mismatch():
    with pytest.raises(ValueError):
        combine([1], [radical(1, 2), radical(1, 3)])


def test_from_terms_reduces_square_factors():
    assert radical(1, 8) == radical(2, 2)
    assert radical(1, 9) == RadicalScalar.rational(3)
    assert squarefree_split(72) == (6, 2)


@given(scalars)
def test_self_difference_is_zero(x):
    assert sign(combine([1, -1], [x, x])) == 0


# --- sign and compare ----------------------------------------------------

def test_sign_examples():
    assert sign(radical(1, 2) - radical(1, 3)) == -1
    assert sign(RadicalScalar.zero()) == 0


def test_sign_of_five_root_two_minus_seven():
    x = radical(5, 2) - RadicalScalar.rational(7)
    # independent rational oracle: 5*sqrt2 > 7 iff 50 > 49, both sides positive
    assert (5 ** 2 * 2 > 7 ** 2) and sign(x) == 1


def test_compare_examples():
    assert compare(radical(1, 3), radical(1, 2)) == 1
    assert compare(radical(1, 2), radical(1, 2)) == 0
    x = radical(1, 2) + radical(1, 3)
    assert compare(x, RadicalScalar.rational(3)) == 1
    mpmath.mp.dps = 50
    try:
        assert mpmath.sqrt(2) + mpmath.sqrt(3) > 3
    finally:
        mpmath.mp.dps = 200


def test_sign_near_cancellation():
    # 665857^2 - 2*470832^2 = 1, so the difference is about +7.5e-7
    assert 665857 ** 2 - 2 * 470832 ** 2 == 1
    x = RadicalScalar.rational(665857) - radical(470832, 2)
    assert sign(x) == mp_sign(mp_value(x)) == 1
    # much closer: a convergent of sqrt(2) with 40-digit terms
    p, q = 1, 1
    for _ in range(120):
        p, q = p + 2 * q, p + q
    y = RadicalScalar.rational(p) - radical(q, 2)
    assert abs(mp_value(y)) < mpmath.mpf(10) ** -40
    assert sign(y) == mp_sign(mp_value(y))


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=6), st.data())
def test_sign_agrees_with_high_precision(coeffs, data):
    xs = data.draw(st.lists(scalars, min_size=len(coeffs), max_size=len(coeffs)))
    z = combine(coeffs, xs)
    value = mp_value(z)
    if z.is_zero():
        assert value == 0
    elif abs(value) > mpmath.mpf(10) ** -50:
        assert sign(z) == mp_sign(value)


@given(st.lists(scalars, min_size=3, max_size=3, unique=True))
def test_compare_is_a_total_order(xs):
    a, b, c = xs
    assert compare(a, b) == -compare(b, a)
    assert compare(a, a) == 0
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0


def test_ordering_operators():
    assert radical(1, 2) < radical(1, 3) <= radical(1, 3) and radical(1, 5) > radical(2, 1)


# --- floor_quotient ------------------------------------------------------

def test_floor_quotient_examples():
    assert floor_quotient(radical(1, 2), radical(1, 3)) == 0
    assert floor_quotient(radical(1, 2), radical(1, 2)) == 1
    assert floor_quotient(radical(1, 3), radical(1, 3) - radical(1, 2)) == 5
    mpmath.mp.dps = 50
    try:
        assert int(mpmath.floor(mpmath.sqrt(3) / (mpmath.sqrt(3) - mpmath.sqrt(2)))) == 5
    finally:
        mpmath.mp.dps = 200


def test_floor_quotient_exact_multiple():
    assert floor_quotient(radical(7, 2), radical(1, 2)) == 7
    assert floor_quotient(RadicalScalar.zero(), radical(1, 2)) == 0


def test_floor_quotient_domain():
    with pytest.raises(DomainError):
        floor_quotient(radical(1, 2), RadicalScalar.zero())
    with pytest.raises(DomainError):
        floor_quotient(radical(1, 2), -radical(1, 3))
    with pytest.raises(DomainError):
        floor_quotient(-radical(1, 2), radical(1, 3))


positive = scalars.filter(lambda x: x.sign() > 0)


@given(st.one_of(positive, st.just(RadicalScalar.zero())), positive)
def test_floor_quotient_brackets(a, b):
    m = floor_quotient(a, b)
    assert m >= 0
    assert (a - b * m).sign() >= 0
    assert (a - b * (m + 1)).sign() < 0


# --- decimal mode --------------------------------------------------------

def test_decimal_sign_outside_tolerance():
    x = DecimalScalar.measured("1.5", "0.01") - DecimalScalar.measured("1.2", "0.01")
    assert x.sign() == 1
    assert x.radius() == Fraction(2, 100)


def test_decimal_tie_raises():
    x = DecimalScalar.measured("1.5", "0.1") - DecimalScalar.measured("1.45", "0.1")
    with pytest.raises(IndependenceViolation):
        x.sign()


def test_decimal_exact_zero():
    a = DecimalScalar.measured("2.5", "0.1")
    assert (a - a).sign() == 0


def test_kinds_do_not_mix():
    with pytest.raises(TypeError):
        radical(1, 2) + DecimalScalar.measured("1", "0")


def test_str_round_trip_is_readable():
    assert str(rs({1: -7, 2: 5})) == "-7 + 5*sqrt(2)"
    assert str(RadicalScalar.zero()) == "0"
