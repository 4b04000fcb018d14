"""Exact arithmetic over Q(sqrt(5)) and the ideal path-value sequence.

Every quantity the online matcher manipulates lives in the quadratic field
Q(sqrt(5)): the guarantee 4/(9 - sqrt(5)), the Fibonacci-weighted ideal path
values, and all matching / cover values derived from them.  Keeping the
arithmetic exact lets every invariant be checked with zero tolerance.
"""

from __future__ import annotations

import math
import threading

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rat

RatLike = object  # int, Fraction, mpq, or "p/q" string

_ZERO = Rat(0)
_HALF = Rat(1, 2)


def _to_rat(value) -> Rat:
    if isinstance(value, str):
        return Rat(value)
    return Rat(value)


class GoldenNumber:
    """An element a + b*sqrt(5) with exact rational coordinates a, b."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _to_rat(a))
        object.__setattr__(self, "b", _to_rat(b))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenNumber is immutable")

    # -- ring structure -------------------------------------------------

    def __add__(self, other: GoldenNumber) -> GoldenNumber:
        return GoldenNumber(self.a + other.a, self.b + other.b)

    def __sub__(self, other: GoldenNumber) -> GoldenNumber:
        return GoldenNumber(self.a - other.a, self.b - other.b)

    def __neg__(self) -> GoldenNumber:
        return GoldenNumber(-self.a, -self.b)

    def __mul__(self, other) -> GoldenNumber:
        if isinstance(other, GoldenNumber):
            return GoldenNumber(
                self.a * other.a + 5 * self.b * other.b,
                self.a * other.b + self.b * other.a,
            )
        return GoldenNumber(self.a * _to_rat(other), self.b * _to_rat(other))

    def __rmul__(self, other) -> GoldenNumber:
        return self * other

    def inverse(self) -> GoldenNumber:
        """Exact multiplicative inverse; the norm a^2 - 5b^2 vanishes only at 0."""
        norm = self.a * self.a - 5 * self.b * self.b
        if norm == 0:
            raise ZeroDivisionError("zero has no inverse in Q(sqrt(5))")
        return GoldenNumber(self.a / norm, -self.b / norm)

    def __truediv__(self, other) -> GoldenNumber:
        if isinstance(other, GoldenNumber):
            return self * other.inverse()
        return GoldenNumber(self.a / _to_rat(other), self.b / _to_rat(other))

    def __pow__(self, n: int) -> GoldenNumber:
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order structure -------------------------------------------------

    def sign(self) -> int:
        """Sign of the real number a + b*sqrt(5), computed exactly.

        When a and b agree in sign the answer is immediate; otherwise the
        dominant term is found by comparing a^2 against 5*b^2 (sqrt(5) is
        irrational, so ties only occur at zero).
        """
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        diff = a * a - 5 * b * b
        if diff == 0:  # impossible for nonzero a, b; guards corrupted state
            raise ArithmeticError("a^2 == 5 b^2 with a, b nonzero")
        if a > 0:  # b < 0: a dominates iff a^2 > 5 b^2
            return 1 if diff > 0 else -1
        return -1 if diff > 0 else 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GoldenNumber)
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __lt__(self, other: GoldenNumber) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: GoldenNumber) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: GoldenNumber) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: GoldenNumber) -> bool:
        return (self - other).sign() >= 0

    # -- presentation ---------------------------------------------------

    def __repr__(self) -> str:
        return f"GoldenNumber({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt(5)"

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(5.0)

    def decimal(self, places: int = 6) -> str:
        return decimal_str(self, places)


ZERO = GoldenNumber(0, 0)
ONE = GoldenNumber(1, 0)
SQRT5 = GoldenNumber(0, 1)

#: Best achievable competitive ratio for fractional matchings under
#: adversarial edge arrivals in graphs of maximum degree three:
#: 4/(9 - sqrt(5)) = (9 + sqrt(5))/19, roughly 0.5914.
GUARANTEE = GoldenNumber(Rat(9, 19), Rat(1, 19))


def guarantee() -> GoldenNumber:
    """The ratio 4/(9 - sqrt(5)) in canonical rationalized form."""
    return GUARANTEE


def golden_floor(x: GoldenNumber) -> int:
    """Exact floor of a + b*sqrt(5) via integer square roots."""
    da = x.a.denominator
    db = x.b.denominator
    d = da * db // math.gcd(da, db)
    n1 = int(x.a.numerator) * (d // da)
    n2 = int(x.b.numerator) * (d // db)
    if n2 >= 0:
        s = math.isqrt(5 * n2 * n2)
    else:
        # 5*n2^2 is never a perfect square for n2 != 0
        s = -(math.isqrt(5 * n2 * n2) + 1)
    return (n1 + s) // d


def decimal_str(x: GoldenNumber, places: int) -> str:
    """Correctly rounded decimal expansion, rounding half away from zero."""
    if places < 0 or places > 50:
        raise ValueError("places must be between 0 and 50")
    negative = x.sign() < 0
    magnitude = -x if negative else x
    scaled = magnitude * (10**places)
    digits = golden_floor(GoldenNumber(scaled.a + _HALF, scaled.b))
    text = str(digits).rjust(places + 1, "0")
    if places:
        text = f"{text[:-places]}.{text[-places:]}"
    return f"-{text}" if negative else text


_fib_cache = [0, 1, 1]  # F_0, F_1, F_2
_fib_lock = threading.Lock()


def fibonacci(n: int) -> int:
    """F_1 = F_2 = 1, F_n = F_{n-1} + F_{n-2}; defined here for n >= 1."""
    if n < 1:
        raise ValueError("fibonacci is defined for n >= 1")
    if n >= len(_fib_cache):
        with _fib_lock:
            while n >= len(_fib_cache):
                _fib_cache.append(_fib_cache[-1] + _fib_cache[-2])
    return _fib_cache[n]


_ideal_cache: dict[int, GoldenNumber] = {}
_ideal_lock = threading.Lock()


def ideal_path_value(n: int) -> GoldenNumber:
    """Ideal fractional value of the n-th edge along a growing path.

    The first three values are GUARANTEE, GUARANTEE/2 and
    (5*GUARANTEE - 2)/2; from n = 4 on the sequence follows the
    Fibonacci-weighted closed form ((3F_n + F_{n-2} - 2)*g - 2F_n + 2)/2
    where g is the guarantee.  Values are memoized because the Fibonacci
    coefficients grow exponentially and every replay reuses each prefix.
    """
    if n < 1:
        raise ValueError("ideal_path_value is defined for n >= 1")
    cached = _ideal_cache.get(n)
    if cached is not None:
        return cached
    g = GUARANTEE
    if n == 1:
        value = g
    elif n == 2:
        value = g * _HALF
    elif n == 3:
        value = (g * 5 - GoldenNumber(2)) * _HALF
    else:
        fn = fibonacci(n)
        fn2 = fibonacci(n - 2)
        value = (g * (3 * fn + fn2 - 2) - GoldenNumber(2 * fn - 2)) * _HALF
    with _ideal_lock:
        _ideal_cache.setdefault(n, value)
    return value


def rat_str(q) -> str:
    """Serialize an exact rational as 'p/q' (or 'p' when integral)."""
    return str(q)
