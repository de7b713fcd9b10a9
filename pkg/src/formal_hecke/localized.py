"""Localized elements u / prod x_beta^e over positive roots beta.

The numerator of an element with denominator degree d is kept in the series
ring of cap ``alg.cap + d``, so that ``prec = num.valid - d`` (the Laurent
precision) starts at the algebra's cap.  Elements are reduced eagerly: no
x_beta with a positive exponent divides the numerator.
"""

from .errors import DivisibilityError, PoleError, UnitError
from .scalars import ONE
from .series import TruncSeries, div_exact, invert_unit


class Localized:
    __slots__ = ("alg", "num", "den", "_acts")

    def __init__(self, alg, num, den=None):
        self.alg = alg
        self.num = num
        self.den = tuple(den) if den is not None else (0,) * alg.datum.npos
        self._acts = None

    # constructors ----------------------------------------------------------------
    @classmethod
    def series(cls, alg, u):
        return cls(alg, u.with_cap(alg.cap))

    @classmethod
    def scalar(cls, alg, c):
        return cls(alg, TruncSeries.constant(c, alg.n, alg.cap))

    @classmethod
    def over_root(cls, alg, r, num_master=None):
        """num / x_r for any root r (negative roots use the unit rewrite).

        ``num_master`` is a series (any cap >= alg.cap + 1); default 1.
        """
        R = alg.datum
        cap = alg.cap + 1
        num = TruncSeries.one(alg.n, cap) if num_master is None else num_master.with_cap(cap)
        den = [0] * R.npos
        if R.is_positive(r):
            den[r] = 1
        else:
            p = R.negate(r)
            den[p] = 1
            num = num * alg.neg_unit_inv(p, 1, cap)
        return cls(alg, num, den).reduced()

    # basic properties --------------------------------------------------------------
    @property
    def degree(self):
        return sum(self.den)

    @property
    def prec(self):
        return self.num.valid - self.degree

    @property
    def valuation(self):
        return self.num.order() - self.degree

    def is_zero(self):
        return self.num.is_zero()

    def is_pole_free(self):
        return not any(self.den)

    def zero_like(self, prec=None):
        alg = self.alg
        p = self.prec if prec is None else prec
        return Localized(alg, TruncSeries.zero(alg.n, alg.cap, valid=min(alg.cap, p)))

    # arithmetic ------------------------------------------------------------------------
    def _lift(self, D):
        alg = self.alg
        cap = alg.cap + sum(D)
        num = self.num.with_cap(cap)
        for b, (e, f) in enumerate(zip(D, self.den)):
            if e > f:
                num = num * alg.xpow(b, e - f, cap)
        return num

    def _common(self, other):
        D = tuple(max(a, b) for a, b in zip(self.den, other.den))
        return D, self._lift(D), other._lift(D)

    def __add__(self, other):
        if not isinstance(other, Localized):
            other = _coerce(self.alg, other)
        if self.is_zero() and self.prec >= other.prec:
            return other
        if other.is_zero() and other.prec >= self.prec:
            return self
        D, a, b = self._common(other)
        return Localized(self.alg, a + b, D).reduced()

    __radd__ = __add__

    def __neg__(self):
        return Localized(self.alg, -self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, Localized):
            other = _coerce(self.alg, other)
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(self.alg, other) + (-self)

    def __mul__(self, other):
        if isinstance(other, Localized):
            D = tuple(a + b for a, b in zip(self.den, other.den))
            cap = self.alg.cap + sum(D)
            num = self.num.with_cap(cap) * other.num.with_cap(cap)
            out = Localized(self.alg, num, D)
            return out.reduced() if any(D) else out
        if isinstance(other, TruncSeries):
            return self * Localized.series(self.alg, other)
        return Localized(self.alg, self.num.scale(other), self.den)

    def __rmul__(self, other):
        if isinstance(other, TruncSeries):
            return Localized.series(self.alg, other) * self
        return Localized(self.alg, self.num.scale(other), self.den)

    def inverse(self):
        """1/self, possible when the numerator is a unit series."""
        c0 = self.num.constant_term()
        if not c0:
            raise UnitError("numerator is not a unit; inverse leaves the localized ring")
        alg = self.alg
        inv = invert_unit(self.num.with_cap(alg.cap))
        out = Localized(alg, inv)
        for b, e in enumerate(self.den):
            if e:
                out = out * Localized(alg, alg.xpow(b, e, alg.cap))
        # the numerator inverse is certified to num.valid; keep that bound
        return out

    def __truediv__(self, other):
        if isinstance(other, Localized):
            return self * other.inverse()
        return Localized(self.alg, self.num.scale(ONE / other), self.den)

    def reduced(self):
        den = list(self.den)
        num = self.num
        alg = self.alg
        if num.is_zero():
            return self.zero_like()
        for b in range(len(den)):
            while den[b]:
                try:
                    q = div_exact(num, alg.x_root(b, num.cap))
                except DivisibilityError:
                    break
                den[b] -= 1
                num = q.with_cap(num.cap - 1)
        if tuple(den) == self.den:
            return self
        return Localized(alg, num, den)

    # W-action -----------------------------------------------------------------------------
    def act(self, w):
        if w == 0:
            return self
        if self._acts is None:
            self._acts = {}
        got = self._acts.get(w)
        if got is not None:
            return got
        alg = self.alg
        R = alg.datum
        num = alg.weyl_act(w, self.num)
        cap = num.cap
        den = [0] * R.npos
        for b, e in enumerate(self.den):
            if not e:
                continue
            g = R.act_root(w, b)
            if R.is_positive(g):
                den[g] += e
            else:
                p = R.negate(g)
                den[p] += e
                num = num * alg.neg_unit_inv(p, e, cap)
        out = Localized(alg, num, den)
        self._acts[w] = out
        return out

    # comparison -----------------------------------------------------------------------------
    def difference(self, other):
        """None when equal to the common precision, else (monomial, lhs, rhs, den)."""
        if not isinstance(other, Localized):
            other = _coerce(self.alg, other)
        D, a, b = self._common(other)
        d = a.first_difference(b)
        if d is None:
            return None
        return d[0], d[1], d[2], D

    def agrees(self, other):
        return self.difference(other) is None

    def common_prec(self, other):
        return min(self.prec, other.prec)

    def to_series(self):
        if any(self.den):
            raise PoleError(f"element has poles along roots {[b for b, e in enumerate(self.den) if e]}")
        return self.num.truncated(self.prec) if self.prec < self.num.valid else self.num

    def scalars(self):
        return self.num.coefficients()

    def text(self):
        R = self.alg.datum
        num = self.alg.text(self.num)
        if not any(self.den):
            return num
        parts = []
        for b, e in enumerate(self.den):
            if e:
                lab = f"x[{R.root_label(b)}]"
                parts.append(lab if e == 1 else f"{lab}^{e}")
        return f"({num}) / ({'*'.join(parts)})"

    def __repr__(self):
        return f"Localized({self.text()})"


def _coerce(alg, value):
    if isinstance(value, Localized):
        return value
    if isinstance(value, TruncSeries):
        return Localized.series(alg, value)
    return Localized.scalar(alg, value)


def poles(el):
    return [b for b, e in enumerate(el.den) if e]
