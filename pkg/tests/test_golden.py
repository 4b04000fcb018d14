import math
import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracmatch.golden import (
    GUARANTEE,
    ONE,
    SQRT5,
    ZERO,
    GoldenNumber,
    Rat,
    decimal_str,
    fibonacci,
    golden_floor,
    guarantee,
    ideal_path_value,
)

HALF = Rat(1, 2)


def gn(a, b=0):
    return GoldenNumber(Rat(a), Rat(b))


rationals = st.fractions(max_denominator=97)
goldens = st.builds(GoldenNumber, rationals, rationals)


# -- basic arithmetic ------------------------------------------------------


def test_addition_examples():
    assert gn(1) + gn(0, 1) == gn(1, 1)
    assert gn(0) + GoldenNumber("3/2", "-1/4") == GoldenNumber("3/2", "-1/4")
    assert GUARANTEE + GUARANTEE == GoldenNumber(Rat(18, 19), Rat(2, 19))


def test_multiplication_examples():
    assert SQRT5 * SQRT5 == gn(5)
    x = GoldenNumber("7/3", "-2/5")
    assert ONE * x == x
    assert gn(9, 1) * gn(9, -1) == gn(76)


def test_sign_examples():
    assert ZERO.sign() == 0
    assert GoldenNumber("-2/19", "4/19").sign() == 1
    assert gn(3, -1).sign() == 1
    assert gn(-3, 1).sign() == -1


def test_sign_squaring_edge():
    # 7^2 = 49 > 45 = 5*3^2, so the rational part dominates
    assert gn(7, -3).sign() == 1
    assert gn(-7, 3).sign() == -1
    assert gn(2, -1).sign() == -1  # 4 < 5


def test_guarantee_value():
    g = guarantee()
    assert g == GoldenNumber(Rat(9, 19), Rat(1, 19))
    # rationalization check: (9 + sqrt 5)/19 * (9 - sqrt 5) == 4
    assert g * gn(9, -1) == gn(4)
    assert decimal_str(g, 4) == "0.5914"
    assert (ONE - g).sign() == 1


# -- field laws (property-based) ------------------------------------------


@given(goldens, goldens)
def test_add_commutes(x, y):
    assert x + y == y + x


@given(goldens, goldens)
def test_mul_commutes(x, y):
    assert x * y == y * x


@given(goldens, goldens, goldens)
def test_add_associates(x, y, z):
    assert (x + y) + z == x + (y + z)


@given(goldens, goldens, goldens)
def test_mul_associates(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(goldens, goldens, goldens)
def test_mul_distributes(x, y, z):
    assert x * (y + z) == x * y + x * z


@given(goldens)
def test_inverse(x):
    if x.is_zero():
        with pytest.raises(ZeroDivisionError):
            x.inverse()
    else:
        assert x * x.inverse() == ONE


@given(goldens)
def test_sub_neg_roundtrip(x):
    assert x - x == ZERO
    assert -(-x) == x


def test_pow():
    phi = GoldenNumber(HALF, HALF)
    assert phi**2 == phi * phi
    assert phi**0 == ONE
    assert phi**-3 == (phi**3).inverse()
    # golden ratio identity phi^2 = phi + 1
    assert phi * phi == phi + ONE


# -- sign totality against high-precision floats ---------------------------


def test_sign_matches_100_digit_decimal():
    rng = random.Random(20240611)
    with mpmath.workdps(110):
        root5 = mpmath.sqrt(5)
        for _ in range(10_000):
            p = rng.randint(-10**6, 10**6)
            q = rng.randint(1, 10**4)
            r = rng.randint(-10**6, 10**6)
            s = rng.randint(1, 10**4)
            x = GoldenNumber(Rat(p, q), Rat(r, s))
            approx = mpmath.mpf(p) / q + mpmath.mpf(r) / s * root5
            expected = 0 if approx == 0 else (1 if approx > 0 else -1)
            assert x.sign() == expected


# -- floor and decimal rendering -------------------------------------------


@given(rationals, rationals)
def test_floor_matches_definition(a, b):
    x = GoldenNumber(a, b)
    f = golden_floor(x)
    assert (x - gn(f)).sign() >= 0
    assert (x - gn(f + 1)).sign() < 0


def test_decimal_examples():
    assert decimal_str(ZERO, 2) == "0.00"
    assert decimal_str(ONE, 3) == "1.000"
    assert decimal_str(GUARANTEE, 4) == "0.5914"
    assert decimal_str(gn(Rat(1, 2)), 0) == "1"  # half away from zero
    assert decimal_str(gn(Rat(-1, 2)), 0) == "-1"
    assert decimal_str(gn(Rat(-3, 8)), 2) == "-0.38"
    assert decimal_str(SQRT5, 10) == "2.2360679775"


def test_decimal_rejects_bad_places():
    with pytest.raises(ValueError):
        decimal_str(ONE, 51)
    with pytest.raises(ValueError):
        decimal_str(ONE, -1)


# -- Fibonacci and ideal path values ---------------------------------------


def test_fibonacci():
    assert fibonacci(1) == 1
    assert fibonacci(2) == 1
    assert fibonacci(6) == 8
    assert fibonacci(30) == 832040
    with pytest.raises(ValueError):
        fibonacci(0)


def test_first_ideal_values():
    g = GUARANTEE
    assert ideal_path_value(1) == g
    assert ideal_path_value(2) == g * HALF
    assert ideal_path_value(3) == (g * 5 - gn(2)) * HALF
    assert ideal_path_value(4) == g * 4 - gn(2)
    assert ideal_path_value(5) == (g * 15 - gn(8)) * HALF
    assert ideal_path_value(6) == g * Rat(25, 2) - gn(7)


def test_ideal_value_decimals():
    assert decimal_str(ideal_path_value(4), 4) == "0.3655"
    assert decimal_str(ideal_path_value(5), 4) == "0.4353"
    assert decimal_str(ideal_path_value(6), 4) == "0.3921"


def test_ideal_value_rejects_zero():
    with pytest.raises(ValueError):
        ideal_path_value(0)


def test_closed_form_matches_recurrence_up_to_200():
    g = GUARANTEE
    for n in range(1, 201):
        lhs = ideal_path_value(n + 2)
        rhs = ideal_path_value(n) + ideal_path_value(n + 1) - (ONE - g)
        assert lhs == rhs, n


def test_increment_identity_for_n_at_least_4():
    # 2 y~_{n+1} - 2 y~_n == (4g - 2) F_{n-1} - g F_{n-2}
    g = GUARANTEE
    for n in range(4, 201):
        lhs = (ideal_path_value(n + 1) - ideal_path_value(n)) * 2
        rhs = (g * 4 - gn(2)) * fibonacci(n - 1) - g * fibonacci(n - 2)
        assert lhs == rhs, n


def test_increment_identity_via_golden_ratio_power():
    # 2 y~_{n+1} == 2 y~_n + g * (-1)^n * phi^(1-n), phi the golden ratio
    g = GUARANTEE
    phi = GoldenNumber(HALF, HALF)
    for n in range(4, 201):
        lhs = ideal_path_value(n + 1) * 2
        sign = 1 if n % 2 == 0 else -1
        rhs = ideal_path_value(n) * 2 + g * (phi ** (1 - n)) * sign
        assert lhs == rhs, n


def test_even_subsequence_increases_odd_decreases():
    for k in range(1, 100):
        assert ideal_path_value(2 * k + 2) > ideal_path_value(2 * k)
        assert ideal_path_value(2 * k + 3) < ideal_path_value(2 * k + 1)


def test_odd_values_exceed_even_values():
    for n in range(1, 51):
        for k in range(1, 51):
            assert ideal_path_value(2 * n + 1) > ideal_path_value(2 * k)


def test_window_sum_bound():
    bound = ONE + GUARANTEE * HALF
    for n in range(1, 201):
        assert ideal_path_value(n) + ideal_path_value(n + 1) * 2 < bound


def test_value_ranges():
    g = GUARANTEE
    lo = g * HALF
    hi = (g * 5 - gn(2)) * HALF
    for n in range(1, 201):
        assert ideal_path_value(n) <= g
        nxt = ideal_path_value(n + 1)
        assert lo <= nxt <= hi
        assert ONE - g * Rat(3, 2) <= g - nxt <= g * HALF
        assert ideal_path_value(n) + nxt <= g * Rat(3, 2)


def test_float_conversion_close():
    assert math.isclose(float(GUARANTEE), 0.59135, abs_tol=5e-5)
