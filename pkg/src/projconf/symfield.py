"""Exact scalar layer: multivariate rational functions over Q.

Every geometric quantity in this package (Christoffel symbols, curvature
components, tractor slots, ...) is a `RatFunc`: a rational function in the
chart coordinates with exact rational coefficients.  Zero testing is
therefore decidable, which is what makes identities like "the normality
defect vanishes identically" checkable rather than merely plausible.

The heavy lifting (sparse multivariate polynomial arithmetic with gcd
canonicalisation) is delegated to sympy's `FracField` over QQ; this module
wraps it behind a small fixed surface and adds the expression grammar,
positions in parse errors and a total-degree guardrail.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field as _frac_field

# Exact rationals: python's Fraction is already gcd-reduced with positive
# denominator, which is exactly the canonical form we need.
Rational = Fraction

DEFAULT_DEGREE_CAP = 40


class DegreeCapExceeded(Exception):
    """An intermediate polynomial exceeded the configured total-degree cap."""


class ExprError(ValueError):
    """Parse-time error carrying a character position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


def _total_degree(poly):
    if not poly:
        return 0
    return max(sum(monom) for monom in poly.monoms())


class Scalars:
    """A chart's scalar field Q(v1, ..., vk): shared context for RatFuncs.

    All RatFuncs carry a reference to their Scalars; mixing contexts is an
    error.  `degree_cap` bounds the total degree of any numerator or
    denominator produced by arithmetic.
    """

    def __init__(self, variables, degree_cap=DEFAULT_DEGREE_CAP):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.degree_cap = degree_cap
        if self.variables:
            self.field, *gens = _frac_field(",".join(self.variables), QQ)
        else:
            # Degenerate constants-only context; keep a 1-var field around
            # but never expose the variable.
            self.field, _ = _frac_field("_c", QQ)
            gens = []
        self._gens = {name: RatFunc(self, g) for name, g in zip(self.variables, gens)}
        self.zero = RatFunc(self, self.field.zero)
        self.one = RatFunc(self, self.field.one)

    def var(self, name):
        try:
            return self._gens[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def const(self, q):
        q = Fraction(q)
        return RatFunc(self, self.field.ground_new(QQ(q.numerator, q.denominator)))

    def coerce(self, value):
        if isinstance(value, RatFunc):
            if value.ctx is not self:
                raise ValueError("mixing RatFuncs from different charts")
            return value
        if isinstance(value, (int, Fraction)):
            return self.const(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to RatFunc")

    def parse(self, text):
        return parse_expr(text, self)

    def __repr__(self):
        return f"Scalars({', '.join(self.variables)})"


class RatFunc:
    """A multivariate rational function in canonical form.

    Canonical form is inherited from sympy's field elements: numerator and
    denominator are coprime with a fixed sign convention, so syntactic
    equality of the representation decides mathematical equality.
    """

    __slots__ = ("ctx", "raw")

    def __init__(self, ctx, raw):
        self.ctx = ctx
        self.raw = raw

    # -- predicates ------------------------------------------------------

    def is_zero(self):
        return not self.raw.numer

    def is_constant(self):
        return _total_degree(self.raw.numer) == 0 and _total_degree(self.raw.denom) == 0

    def as_fraction(self):
        """Return the value as a Fraction if constant, else raise."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        num = self.raw.numer.coeff(1) if self.raw.numer else QQ(0)
        den = self.raw.denom.coeff(1)
        q = QQ(num) / QQ(den)
        return Fraction(int(q.numerator), int(q.denominator))

    # -- arithmetic ------------------------------------------------------

    def _wrap(self, raw):
        cap = self.ctx.degree_cap
        if cap is not None and raw.numer:
            if _total_degree(raw.numer) > cap or _total_degree(raw.denom) > cap:
                raise DegreeCapExceeded(
                    f"total degree exceeds cap {cap}; "
                    "raise degree_cap if this computation is intended")
        return RatFunc(self.ctx, raw)

    def _other(self, other):
        if not isinstance(other, (RatFunc, int, Fraction)):
            return None
        return self.ctx.coerce(other).raw

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(self.raw + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(self.raw - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(o - self.raw)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._wrap(self.raw * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if not o.numer:
            raise ZeroDivisionError("division by the zero rational function")
        return self._wrap(self.raw / o)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self._wrap(o / self.raw)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        return self._wrap(self.raw ** k)

    def __neg__(self):
        return RatFunc(self.ctx, -self.raw)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.ctx is other.ctx and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.ctx.coerce(other).raw
        return NotImplemented

    def __hash__(self):
        return hash(self.raw)

    def __bool__(self):
        return not self.is_zero()

    # -- calculus & evaluation -------------------------------------------

    def diff(self, var):
        if var not in self.ctx.variables:
            raise KeyError(f"unknown variable {var!r}")
        return self._wrap(self.raw.diff(self.ctx.field.gens[self.ctx.variables.index(var)]))

    def subs(self, assignment):
        """Evaluate at a rational point; assignment maps every variable."""
        vals = []
        for name in self.ctx.variables:
            if name not in assignment:
                raise KeyError(f"assignment missing variable {name!r}")
            q = Fraction(assignment[name])
            vals.append(QQ(q.numerator, q.denominator))

        def ev(poly):
            total = QQ(0)
            for monom, coeff in poly.terms():
                term = QQ(coeff)
                for v, e in zip(vals, monom):
                    term *= v ** e
                total += term
            return total

        den = ev(self.raw.denom)
        if not den:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        q = ev(self.raw.numer) / den
        return Fraction(int(q.numerator), int(q.denominator))

    # -- printing ---------------------------------------------------------

    def __str__(self):
        return str(self.raw).replace("**", "^")

    def __repr__(self):
        return f"RatFunc({self})"


# ---------------------------------------------------------------------------
# Expression parser
#
# expr   := ('+'|'-')? term (('+'|'-') term)*
# term   := factor (('*'|'/') factor)*
# factor := base ('^' nonneg-int)?
# base   := integer-literal | identifier | '(' expr ')'
#
# The leading sign extends the published grammar so printed canonical forms
# (which may start with '-') round-trip through the parser.
# ---------------------------------------------------------------------------

def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
            continue
        raise ExprError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, ctx):
        self.tokens = tokens
        self.ctx = ctx
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            if self.take()[0] == "-":
                sign = -1
        value = self.term()
        if sign < 0:
            value = -value
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] in "*/":
            op, _, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ExprError("division by the zero polynomial", pos)
                value = value / rhs
        return value

    def factor(self):
        value = self.base()
        if self.peek()[0] == "^":
            self.take()
            kind, text, pos = self.take()
            if kind != "int":
                raise ExprError("exponent must be a non-negative integer", pos)
            value = value ** int(text)
        return value

    def base(self):
        kind, text, pos = self.take()
        if kind == "int":
            return self.ctx.const(int(text))
        if kind == "ident":
            try:
                return self.ctx.var(text)
            except KeyError:
                raise ExprError(f"unknown identifier {text!r}", pos) from None
        if kind == "(":
            value = self.expr()
            kind2, _, pos2 = self.take()
            if kind2 != ")":
                raise ExprError("expected ')'", pos2)
            return value
        raise ExprError(f"unexpected token {text or kind!r}", pos)


def parse_expr(text, ctx):
    """Parse `text` in the chart grammar against the variables of `ctx`.

    Accepts either a Scalars context or a sequence of variable names.
    """
    if not isinstance(ctx, Scalars):
        ctx = Scalars(ctx)
    parser = _Parser(_tokenize(text), ctx)
    value = parser.expr()
    kind, text_, pos = parser.peek()
    if kind != "end":
        raise ExprError(f"trailing input {text_!r}", pos)
    return value


def differentiate(f, var):
    """Exact partial derivative of a RatFunc."""
    return f.diff(var)


def is_zero(f):
    """True iff f is identically zero (decidable thanks to canonical form)."""
    return f.is_zero()
