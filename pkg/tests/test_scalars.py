from fractions import Fraction
import math

from hypothesis import given, strategies as st

from qspectral.scalars import Surd, as_scalar, is_rational, sqrt, to_float

rationals = st.fractions(min_value=0, max_value=50, max_denominator=20)


def test_perfect_squares_stay_rational():
    assert sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert is_rational(sqrt(Fraction(49)))


def test_irrational_root():
    r = sqrt(Fraction(2))
    assert isinstance(r, Surd)
    assert r * r == 2
    assert abs(to_float(r) - math.sqrt(2)) < 1e-15


def test_root_of_sum_of_distinct_radicals():
    x = sqrt(Fraction(2)) + sqrt(Fraction(3))
    assert abs(to_float(x * x) - (5 + 2 * math.sqrt(6))) < 1e-12
    assert x - sqrt(Fraction(3)) == sqrt(Fraction(2))


def test_division_only_by_rationals():
    r = sqrt(Fraction(5))
    assert (r / 5) * 5 == r
    try:
        Fraction(1) / r
    except TypeError:
        pass
    else:
        raise AssertionError("division by an irrational scalar should be unsupported")


@given(rationals)
def test_sqrt_squares_back(x):
    r = sqrt(x)
    assert r * r == x
    assert abs(to_float(r) - math.sqrt(float(x))) < 1e-12


@given(rationals, rationals, st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_ring_laws_against_floats(x, y, c):
    a, b = sqrt(x) + c, sqrt(y) - c
    assert abs(to_float(a * b) - to_float(a) * to_float(b)) < 1e-9
    assert abs(to_float(a + b) - (to_float(a) + to_float(b))) < 1e-12
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a


def test_nested_radicand():
    inner = Fraction(1, 2) + sqrt(Fraction(7, 20))
    r = sqrt(inner)
    assert r * r == inner
    assert abs(to_float(r) - math.sqrt(0.5 + math.sqrt(0.35))) < 1e-14


def test_as_scalar_accepts_ints():
    assert as_scalar(3) == Fraction(3)
