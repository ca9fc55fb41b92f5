"""Scalar layer: parser, differentiation, canonical-form zero testing."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from projconf.symfield import (DegreeCapExceeded, ExprError, RatFunc, Scalars,
                               parse_expr)


@pytest.fixture(scope="module")
def ctx():
    return Scalars(("x1", "x2"))


def test_parse_polynomial(ctx):
    f = ctx.parse("x1*x2 + 1/2")
    g = ctx.var("x1") * ctx.var("x2") + Fraction(1, 2)
    assert f == g


def test_parse_zero(ctx):
    assert ctx.parse("0").is_zero()


def test_parse_cancellation_oracle(ctx):
    # oracle: evaluate both sides at random rational points
    f = ctx.parse("(x1^2 - 1)/(x1 - 1)")
    g = ctx.parse("x1 + 1")
    rng = random.Random(1)
    for _ in range(5):
        pt = {"x1": Fraction(rng.randint(2, 50), rng.randint(1, 7)),
              "x2": Fraction(rng.randint(-9, 9))}
        assert f.subs(pt) == g.subs(pt)
    assert f == g


def test_parse_error_position(ctx):
    with pytest.raises(ExprError) as err:
        ctx.parse("x1 + y7*2")
    assert err.value.pos == 5


def test_parse_trailing_and_division_by_zero(ctx):
    with pytest.raises(ExprError):
        ctx.parse("x1 x2")
    with pytest.raises(ExprError):
        ctx.parse("x1/(x2 - x2)")


def test_parse_with_variable_sequence():
    f = parse_expr("p1^2 - u1", ("p1", "u1"))
    assert not f.is_zero()


def test_roundtrip_print_parse(ctx):
    for text in ("x1*x2 + 1/2", "(x1^2 - 1)/(x1 - 1)", "1/(x1+x2)",
                 "x1^3 - 2*x2 + 7/3"):
        f = ctx.parse(text)
        assert ctx.parse(str(f)) == f


def test_differentiate_power_rule(ctx):
    f = ctx.parse("x1^2*x2")
    assert f.diff("x1") == ctx.parse("2*x1*x2")
    assert ctx.parse("x1").diff("x2").is_zero()


def _difference_quotient_limit(f, var):
    """Independent oracle: (f(x + t) - f(x))/t at t = 0, done exactly.

    The quotient is a rational function of the auxiliary variable t with a
    removable singularity at t = 0; after cancellation it can be evaluated
    there exactly.
    """
    big = Scalars(f.ctx.variables + ("t",))
    shifted_vars = {v: big.var(v) for v in f.ctx.variables}
    shifted_vars[var] = big.var(var) + big.var("t")
    fs = str(f)
    # f is a quotient of polynomials; rebuild both with var shifted by t
    num, den = f.raw.numer, f.raw.denom

    def lift(poly):
        total = big.zero
        for monom, coeff in poly.terms():
            term = big.const(Fraction(int(coeff.numerator),
                                      int(coeff.denominator)))
            for v, e in zip(f.ctx.variables, monom):
                for _ in range(e):
                    term = term * shifted_vars[v]
            total = total + term
        return total

    shifted = lift(num) / lift(den)
    quot = (shifted - big.parse(fs)) / big.var("t")
    # evaluate at t = 0 along generic rational base points
    rng = random.Random(3)
    out = []
    for _ in range(3):
        pt = {v: Fraction(rng.randint(1, 9), rng.randint(1, 4))
              for v in f.ctx.variables}
        pt["t"] = Fraction(0)
        out.append((pt, quot.subs(pt)))
    return out


def test_differentiate_quotient_oracle(ctx):
    f = ctx.parse("1/(x1+x2)")
    g = f.diff("x1")
    for pt, value in _difference_quotient_limit(f, "x1"):
        base = {k: v for k, v in pt.items() if k != "t"}
        assert g.subs(base) == value
    assert g == ctx.parse("0 - 1/(x1+x2)^2")


def test_unknown_variable(ctx):
    with pytest.raises(KeyError):
        ctx.parse("x1").diff("x9")


def test_is_zero_examples(ctx):
    assert (ctx.parse("x1") - ctx.parse("x1")).is_zero()
    assert not ctx.parse("x1*x2").is_zero()
    assert ctx.parse("(x1+1)^2 - x1^2 - 2*x1 - 1").is_zero()


def test_degree_cap():
    small = Scalars(("x1",), degree_cap=5)
    x = small.var("x1")
    f = x * x * x  # fine
    with pytest.raises(DegreeCapExceeded):
        g = f * f  # degree 6


small_coeff = st.integers(min_value=-4, max_value=4)


def _poly(ctx, coeffs):
    x1, x2 = ctx.var("x1"), ctx.var("x2")
    a, b, c, d = coeffs
    return a + b * x1 + c * x2 + d * x1 * x2


@settings(max_examples=25, deadline=None)
@given(st.tuples(small_coeff, small_coeff, small_coeff, small_coeff),
       st.tuples(small_coeff, small_coeff, small_coeff, small_coeff))
def test_leibniz_rule(cf, cg):
    ctx = Scalars(("x1", "x2"))
    f, g = _poly(ctx, cf), _poly(ctx, cg)
    lhs = (f * g).diff("x1")
    rhs = f.diff("x1") * g + f * g.diff("x1")
    assert (lhs - rhs).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.tuples(small_coeff, small_coeff, small_coeff, small_coeff))
def test_mixed_partials_commute(cf):
    ctx = Scalars(("x1", "x2"))
    f = _poly(ctx, cf) * _poly(ctx, (1, 2, 0, 1))
    assert (f.diff("x1").diff("x2") - f.diff("x2").diff("x1")).is_zero()
