"""Exact scalars.

Rationals are :class:`flint.fmpq`.  When a law carries symbolic parameters the
coefficients live in a field of rational functions over Q; those are
:class:`RationalFunction` instances sharing one :class:`ScalarField`.  Constant
results are always demoted back to ``fmpq`` so that the common rational case
stays fast and so that equality is structural.
"""

from fractions import Fraction

from flint import fmpq, fmpq_mpoly_ctx, fmpz

from .errors import ParseError

ZERO = fmpq(0)
ONE = fmpq(1)


def Q(value, den=None):
    """Coerce ``value`` (int, Fraction, str like ``"2/3"``, fmpq) to fmpq."""
    if den is not None:
        return fmpq(int(value), int(den))
    if isinstance(value, fmpq):
        return value
    if isinstance(value, (int, fmpz)):
        return fmpq(int(value))
    if isinstance(value, Fraction):
        return fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            fr = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
        return fmpq(fr.numerator, fr.denominator)
    raise TypeError(f"cannot make a rational from {type(value).__name__}")


class ScalarField:
    """Q(symbols): the coefficient field shared by one computation.

    With no symbols this is just Q and every scalar is an fmpq.
    """

    def __init__(self, symbols=()):
        symbols = tuple(dict.fromkeys(str(s) for s in symbols))
        for s in symbols:
            if not s.isidentifier():
                raise ParseError(f"bad symbol name {s!r}")
        self.symbols = symbols
        self.ctx = fmpq_mpoly_ctx.get(symbols, "lex") if symbols else None
        self._one_poly = self.ctx.from_dict({(0,) * len(symbols): 1}) if symbols else None

    def __repr__(self):
        return f"ScalarField({self.symbols!r})"

    def gen(self, name):
        if name not in self.symbols:
            raise KeyError(f"symbol {name!r} not in {self.symbols}")
        g = self.ctx.gens()[self.symbols.index(name)]
        return RationalFunction(self, g, self._one_poly)

    def with_symbols(self, extra):
        """A field with ``extra`` symbols appended (new context)."""
        return ScalarField(self.symbols + tuple(s for s in extra if s not in self.symbols))

    def coerce(self, value):
        if isinstance(value, RationalFunction):
            if value.field is not self and value.field.symbols != self.symbols:
                raise TypeError("scalar from a different field")
            return value
        return Q(value)

    def parse(self, text):
        """Parse a rational number or a bare symbol name."""
        text = text.strip()
        if text in self.symbols:
            return self.gen(text)
        return Q(text)


def _make(field, num, den):
    """Normalize num/den (reduced, monic denominator), demoting constants."""
    if num.is_zero():
        return ZERO
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    if den.is_constant():
        c = den.leading_coefficient()
        if num.is_constant():
            return num.leading_coefficient() / c
        if c != 1:
            num = num / c
        return RationalFunction(field, num, field._one_poly)
    c = den.leading_coefficient()
    if c != 1:
        num = num / c
        den = den / c
    return RationalFunction(field, num, den)


class RationalFunction:
    """A reduced quotient of polynomials in the symbols of a ScalarField.

    Instances are never constant (constants become fmpq), so ``bool`` is True.
    """

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (fmpq, int, fmpz)):
            if not other:
                return self
            return _make(self.field, self.num + self.den * other, self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        if self.den == other.den:
            return _make(self.field, self.num + other.num, self.den)
        return _make(self.field, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (fmpq, int, fmpz, RationalFunction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (fmpq, int, fmpz)):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (fmpq, int, fmpz)):
            if not other:
                return ZERO
            return RationalFunction(self.field, self.num * other, self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_constant():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 / g, d2 / g
        if not d1.is_constant():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 / g, d1 / g
        num, den = n1 * n2, d1 * d2
        if num.is_constant() or den.is_constant():
            return _make(self.field, num, den)
        return RationalFunction(self.field, num, den)

    __rmul__ = __mul__

    def inverse(self):
        return _make(self.field, self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (fmpq, int, fmpz)):
            if not other:
                raise ZeroDivisionError("division by zero scalar")
            return RationalFunction(self.field, self.num * (ONE / Q(other)), self.den)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (fmpq, int, fmpz)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        return _make(self.field, self.num ** k, self.den ** k)

    # comparison -------------------------------------------------------------
    def __bool__(self):
        return True

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (fmpq, int, fmpz)):
            return False
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__

    # evaluation -------------------------------------------------------------
    def subs(self, values):
        """Substitute rationals for some symbols; returns a scalar."""
        vals = {k: Q(v) for k, v in values.items()}
        d = self.den.subs(vals)
        if d.is_zero():
            raise ZeroDivisionError(f"pole of {self} at {values}")
        return _make(self.field, self.num.subs(vals), d)

    def denominator_vanishes_at(self, symbol, value):
        return self.den.subs({symbol: Q(value)}).is_zero()


def is_scalar(x):
    return isinstance(x, (fmpq, RationalFunction, int, fmpz))


def scalar_str(c):
    return str(c)


def pole_free_at(c, symbol, value):
    """True when the scalar has no pole at ``symbol = value``."""
    if isinstance(c, RationalFunction):
        if symbol not in c.field.symbols:
            return True
        return not c.denominator_vanishes_at(symbol, value)
    return True


def evaluate(c, values):
    if isinstance(c, RationalFunction):
        return c.subs(values)
    return c


def scalar_pow(c, k):
    if isinstance(c, RationalFunction):
        return c ** k
    return Q(c) ** k if k >= 0 else ONE / (Q(c) ** (-k))
