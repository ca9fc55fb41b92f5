"""The quadratic extension a + b*sqrt(2) over any exact base scalar.

Spin-sector formulas carry explicit sqrt(2) factors.  To keep every
identity decidable we adjoin a formal square root of 2 instead of
approximating: components may be Fractions, ints or RatFuncs, and since 2
is not a square in Q(x1, ..., xk), a + b*sqrt(2) = 0 iff a = b = 0.
"""

from __future__ import annotations

from fractions import Fraction


def _zero(x):
    if isinstance(x, (int, Fraction)):
        return x == 0
    return x.is_zero()


class Sqrt2:
    """a + b*sqrt(2) with exact components."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a
        self.b = b

    @staticmethod
    def of(x):
        if isinstance(x, Sqrt2):
            return x
        return Sqrt2(x, 0)

    def is_zero(self):
        return _zero(self.a) and _zero(self.b)

    def is_rational(self):
        return _zero(self.b)

    def __add__(self, other):
        o = Sqrt2.of(other)
        return Sqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = Sqrt2.of(other)
        return Sqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = Sqrt2.of(other)
        return Sqrt2(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = Sqrt2.of(other)
        return Sqrt2(self.a * o.a + 2 * (self.b * o.b),
                     self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return Sqrt2(-self.a, -self.b)

    def __truediv__(self, other):
        o = Sqrt2.of(other)
        if o.is_zero():
            raise ZeroDivisionError
        # (a - b rt2) / (a^2 - 2 b^2); the norm vanishes only at 0
        norm = o.a * o.a - 2 * (o.b * o.b)
        return Sqrt2((self.a * o.a - 2 * (self.b * o.b)) / norm,
                     (self.b * o.a - self.a * o.b) / norm)

    def __rtruediv__(self, other):
        return Sqrt2.of(other) / self

    def __eq__(self, other):
        return (self - other).is_zero()

    def __hash__(self):
        return hash((repr(self.a), repr(self.b)))

    def __str__(self):
        return f"({self.a}) + ({self.b})*rt2"

    __repr__ = __str__


SQRT2 = Sqrt2(Fraction(0), Fraction(1))


def rt2_times(x):
    """sqrt(2) * x for a plain scalar x."""
    return Sqrt2(0 * x, x)
