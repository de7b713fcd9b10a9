"""Truncated multivariate power series with precision tracking.

A :class:`TruncSeries` stores the terms of total degree at most ``valid`` of a
power series in ``nvars`` variables.  ``cap`` is the largest degree the ring
is allowed to hold; ``valid <= cap`` is the degree through which the stored
coefficients are certified exact.  Coefficients are ``fmpq`` or
``RationalFunction`` scalars.

Exponent vectors are packed into one integer: the total degree sits in the
top field and the exponents follow, first variable most significant.  Adding
keys multiplies monomials, and the degree of a key is a shift.
"""

from .errors import CompositionError, DimensionError, DivisibilityError, NoInverseError, UnitError
from .scalars import ONE, ZERO, Q, is_scalar

BITS = 12
MASK = (1 << BITS) - 1


def _shift(nvars):
    return BITS * nvars


def pack(exps):
    key = sum(exps)
    for e in exps:
        key = (key << BITS) | e
    return key


def unpack(key, nvars):
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & MASK
        key >>= BITS
    return tuple(out)


def var_key(k, nvars):
    return (1 << _shift(nvars)) | (1 << (BITS * (nvars - 1 - k)))


def exponent_of(key, k, nvars):
    return (key >> (BITS * (nvars - 1 - k))) & MASK


class TruncSeries:
    """Element of R[[x_1..x_n]] known through total degree ``valid``."""

    __slots__ = ("nvars", "cap", "valid", "_t", "_groups_cache")

    def __init__(self, nvars, cap, terms=None, valid=None, _packed=None):
        if cap < 0:
            raise DimensionError("cap must be non-negative")
        self.nvars = nvars
        self.cap = cap
        self.valid = cap if valid is None else min(valid, cap)
        self._groups_cache = None
        if _packed is not None:
            self._t = _packed
            return
        t = {}
        sh = _shift(nvars)
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise DimensionError("exponent length does not match nvars")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            key = pack(exps)
            if (key >> sh) > self.valid or not c:
                continue
            t[key] = Q(c) if isinstance(c, int) else c
        self._t = t

    @classmethod
    def _raw(cls, nvars, cap, valid, t):
        return cls(nvars, cap, valid=valid, _packed=t)

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nvars, cap, valid=None):
        return cls._raw(nvars, cap, cap if valid is None else min(valid, cap), {})

    @classmethod
    def constant(cls, c, nvars, cap):
        c = Q(c) if isinstance(c, int) else c
        return cls._raw(nvars, cap, cap, {pack((0,) * nvars): c} if c else {})

    @classmethod
    def one(cls, nvars, cap):
        return cls.constant(ONE, nvars, cap)

    @classmethod
    def var(cls, k, nvars, cap, coeff=ONE):
        if not 0 <= k < nvars:
            raise DimensionError("variable index out of range")
        if cap < 1:
            return cls.zero(nvars, cap)
        return cls._raw(nvars, cap, cap, {var_key(k, nvars): coeff})

    @classmethod
    def monomial(cls, exps, coeff, cap):
        return cls(len(exps), cap, {tuple(exps): coeff})

    @classmethod
    def univariate(cls, coeffs, cap, valid=None):
        """From a list ``[c0, c1, ...]``."""
        return cls(1, cap, {(i,): c for i, c in enumerate(coeffs) if c}, valid=valid)

    # inspection -------------------------------------------------------------
    @property
    def terms(self):
        """Dict exponent-tuple -> coefficient, graded-lex order."""
        n = self.nvars
        return {unpack(k, n): self._t[k] for k in self._sorted_keys()}

    def items_packed(self):
        return self._t.items()

    def _sorted_keys(self):
        sh = _shift(self.nvars)
        low = (1 << sh) - 1
        return sorted(self._t, key=lambda k: (k >> sh, -(k & low)))

    def degree_of(self, key):
        return key >> _shift(self.nvars)

    def coeff(self, exps):
        return self._t.get(pack(tuple(exps)), ZERO)

    def constant_term(self):
        return self._t.get(0, ZERO)

    def order(self):
        """Lowest degree with a nonzero coefficient, or ``valid + 1``."""
        if not self._t:
            return self.valid + 1
        sh = _shift(self.nvars)
        return min(k >> sh for k in self._t)

    def is_zero(self):
        return not self._t

    def nterms(self):
        return len(self._t)

    def groups(self):
        """List of (degree, [(key, coeff), ...]) sorted by degree."""
        if self._groups_cache is None:
            sh = _shift(self.nvars)
            g = {}
            for k, c in self._t.items():
                g.setdefault(k >> sh, []).append((k, c))
            self._groups_cache = sorted(g.items())
        return self._groups_cache

    def homogeneous(self, d):
        sh = _shift(self.nvars)
        return TruncSeries._raw(self.nvars, self.cap, self.valid, {k: c for k, c in self._t.items() if k >> sh == d})

    def has_variable(self, k):
        return any(exponent_of(key, k, self.nvars) for key in self._t)

    def coefficients(self):
        return list(self._t.values())

    def map_coefficients(self, fn):
        t = {}
        for k, c in self._t.items():
            v = fn(c)
            if v:
                t[k] = v
        return TruncSeries._raw(self.nvars, self.cap, self.valid, t)

    # precision management ---------------------------------------------------
    def with_cap(self, cap):
        """Same series viewed in the ring with a different cap."""
        if cap == self.cap:
            return self
        valid = min(self.valid, cap)
        if valid >= self.valid:
            return TruncSeries._raw(self.nvars, cap, valid, self._t)
        sh = _shift(self.nvars)
        return TruncSeries._raw(self.nvars, cap, valid, {k: c for k, c in self._t.items() if k >> sh <= valid})

    def truncated(self, valid):
        """Forget everything above degree ``valid``."""
        if valid >= self.valid:
            return self
        sh = _shift(self.nvars)
        return TruncSeries._raw(self.nvars, self.cap, valid, {k: c for k, c in self._t.items() if k >> sh <= valid})

    # ring operations --------------------------------------------------------
    def _check(self, other):
        if other.nvars != self.nvars or other.cap != self.cap:
            raise DimensionError(
                f"series rings differ: ({self.nvars} vars, cap {self.cap}) vs ({other.nvars} vars, cap {other.cap})"
            )

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return other
        if is_scalar(other):
            return TruncSeries.constant(other, self.nvars, self.cap)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        valid = min(self.valid, other.valid)
        a, b = self.truncated(valid), other.truncated(valid)
        if len(a._t) < len(b._t):
            a, b = b, a
        t = dict(a._t)
        for k, v in b._t.items():
            s = t.get(k)
            if s is None:
                t[k] = v
            else:
                s = s + v
                if s:
                    t[k] = s
                else:
                    del t[k]
        return TruncSeries._raw(self.nvars, self.cap, valid, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(self.nvars, self.cap, self.valid, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c):
        if not c:
            return TruncSeries._raw(self.nvars, self.cap, self.valid, {})
        if c == 1:
            return self
        t = {}
        for k, v in self._t.items():
            p = v * c
            if p:
                t[k] = p
        return TruncSeries._raw(self.nvars, self.cap, self.valid, t)

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            self._check(other)
            return _mul(self, other)
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_scalar(other):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            return invert_unit(self) ** (-k)
        out = TruncSeries.one(self.nvars, self.cap)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # comparison -------------------------------------------------------------
    def first_difference(self, other, upto=None):
        """First (graded-lex) monomial where the two disagree.

        Only degrees through ``min(valid, other.valid, upto)`` are compared.
        Returns None or ``(exps, self_coeff, other_coeff)``.
        """
        if self.nvars != other.nvars:
            raise DimensionError("variable counts differ")
        lim = min(self.valid, other.valid)
        if upto is not None:
            lim = min(lim, upto)
        sh = _shift(self.nvars)
        low = (1 << sh) - 1
        bad = []
        for k in set(self._t) | set(other._t):
            if k >> sh > lim:
                continue
            a = self._t.get(k, ZERO)
            b = other._t.get(k, ZERO)
            if a != b:
                bad.append(k)
        if not bad:
            return None
        k = min(bad, key=lambda k: (k >> sh, -(k & low)))
        return unpack(k, self.nvars), self._t.get(k, ZERO), other._t.get(k, ZERO)

    def agrees(self, other, upto=None):
        return self.first_difference(other, upto) is None

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.nvars == other.nvars and self.agrees(other)
        if is_scalar(other):
            return self.agrees(TruncSeries.constant(other, self.nvars, self.cap))
        return NotImplemented

    __hash__ = None

    # output -----------------------------------------------------------------
    def to_text(self, names=None, big_o=True):
        n = self.nvars
        if names is None:
            names = ["x"] if n == 1 else [f"x{i + 1}" for i in range(n)]
        parts = []
        for key in self._sorted_keys():
            c = self._t[key]
            parts.append(_term_text(c, monomial_text(unpack(key, n), names)))
        if not parts:
            text = "0"
        else:
            text = parts[0]
            for p in parts[1:]:
                text += " - " + p[1:] if p.startswith("-") else " + " + p
        if big_o:
            text += f" + O({self.valid + 1})"
        return text

    def __repr__(self):
        return f"TruncSeries({self.to_text()}, cap={self.cap})"


def monomial_text(exps, names):
    """``x^2*y`` style text for an exponent vector (empty for the constant monomial)."""
    mono = "*".join((names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(exps) if e)
    return mono


def _term_text(c, mono):
    s = str(c)
    atomic = " " not in s and "(" not in s
    if not mono:
        return s if atomic else f"({s})"
    if s == "1":
        return mono
    if s == "-1":
        return "-" + mono
    if not atomic:
        s = f"({s})"
    return f"{s}*{mono}"


def _mul(a, b):
    if not a._t or not b._t:
        valid = min(a.valid + b.order(), b.valid + a.order(), a.cap)
        return TruncSeries._raw(a.nvars, a.cap, valid, {})
    valid = min(a.valid + b.order(), b.valid + a.order(), a.cap)
    out = {}
    get = out.get
    gb = b.groups()
    for da, la in a.groups():
        lim = valid - da
        if lim < 0:
            break
        for db, lb in gb:
            if db > lim:
                break
            for ka, ca in la:
                for kb, cb in lb:
                    k = ka + kb
                    q = get(k)
                    out[k] = ca * cb if q is None else q + ca * cb
    return TruncSeries._raw(a.nvars, a.cap, valid, {k: v for k, v in out.items() if v})


def _hmul(la, lb):
    out = {}
    for ka, ca in la:
        for kb, cb in lb:
            k = ka + kb
            q = out.get(k)
            out[k] = ca * cb if q is None else q + ca * cb
    return out


def invert_unit(a):
    """Multiplicative inverse of a series with invertible constant term."""
    c0 = a.constant_term()
    if not c0:
        raise UnitError("constant term is zero; series is not a unit")
    b0 = ONE / c0
    ga = dict(a.groups())
    hb = {0: [(0, b0)]}
    for d in range(1, a.valid + 1):
        acc = {}
        for k in range(1, d + 1):
            la = ga.get(k)
            lb = hb.get(d - k)
            if not la or not lb:
                continue
            for key, c in _hmul(la, lb).items():
                q = acc.get(key)
                acc[key] = c if q is None else q + c
        hb[d] = [(key, -b0 * c) for key, c in acc.items() if c]
    t = {}
    for lst in hb.values():
        for key, c in lst:
            t[key] = c
    return TruncSeries._raw(a.nvars, a.cap, a.valid, t)


class Substitution:
    """The map u(x_1..x_n) -> u(args_1..args_n), with cached monomial images.

    The args share one target ring.  Reusing a Substitution for many inputs is
    much cheaper than calling :func:`substitute` repeatedly.
    """

    def __init__(self, args):
        args = list(args)
        if not args:
            raise DimensionError("need at least one argument")
        m, cap = args[0].nvars, args[0].cap
        for g in args:
            if g.nvars != m or g.cap != cap:
                raise DimensionError("substituted series must share a ring")
        self.args = args
        self.nvars = m
        self.cap = cap
        self._ords = [g.order() for g in args]
        self._vals = [g.valid for g in args]
        self._pows = [[TruncSeries.one(m, cap), g] for g in args]
        self._images = {}

    def _power(self, k, e):
        pw = self._pows[k]
        while len(pw) <= e:
            pw.append(pw[-1] * self.args[k])
        return pw[e]

    def image(self, key, n):
        img = self._images.get(key)
        if img is None:
            exps = unpack(key, n)
            img = None
            for k, e in enumerate(exps):
                if e:
                    p = self._power(k, e)
                    img = p if img is None else img * p
            if img is None:
                img = self._pows[0][0]
            self._images[key] = img
        return img

    def __call__(self, a):
        n = a.nvars
        if n != len(self.args):
            raise DimensionError("argument count does not match variable count")
        for k in range(n):
            if self._ords[k] == 0 and self.args[k].valid >= 0 and a.has_variable(k):
                raise CompositionError("substituting a series with nonzero constant term")
        pos = [o for o in self._ords if o >= 1]
        m = min(pos) if pos else 1
        valid = min(self.cap, (a.valid + 1) * m - 1)
        for key in a._t:
            exps = unpack(key, n)
            tot = sum(e * self._ords[j] for j, e in enumerate(exps))
            for k, e in enumerate(exps):
                if e:
                    valid = min(valid, self._vals[k] + tot - self._ords[k])
        valid = min(valid, self.cap)
        sh = _shift(self.nvars)
        out = {}
        get = out.get
        for key, c in a._t.items():
            img = self.image(key, n)
            for kk, v in img._t.items():
                if kk >> sh > valid:
                    continue
                q = get(kk)
                out[kk] = c * v if q is None else q + c * v
        return TruncSeries._raw(self.nvars, self.cap, valid, {k: v for k, v in out.items() if v})


def substitute(a, args):
    """Compose: ``a(args[0], ..., args[n-1])``."""
    return Substitution(args)(a)


def div_exact(num, den):
    """Exact quotient ``num / den``.

    ``den`` must have zero constant term and a nonzero linear part (or be a
    unit, in which case this is multiplication by its inverse).  Raises
    :class:`DivisibilityError` when a remainder appears at some degree.
    The result is certified through degree ``min(num.valid, den.valid) - 1``.
    """
    num._check(den)
    if den.constant_term():
        return num * invert_unit(den)
    n = num.nvars
    sh = _shift(n)
    groups = dict(den.groups())
    lin = groups.get(1)
    if not lin:
        raise DivisibilityError("divisor has no linear part", degree=1)
    valid = min(num.valid, den.valid) - 1
    if num.constant_term():
        raise DivisibilityError("dividend has nonzero constant term", degree=0, monomial=(0,) * n,
                                coefficient=num.constant_term())
    # pivot: first variable with a nonzero linear coefficient
    lin_sorted = sorted(lin, key=lambda kc: -kc[0])
    pkey, pc = lin_sorted[0]
    p = next(i for i in range(n) if exponent_of(pkey, i, n))
    inv_pc = ONE / pc
    others = [(k - pkey, c) for k, c in lin if k != pkey]  # offsets relative to the pivot
    monomial_den = len(lin) == 1 and len(den._t) == 1 and den.valid >= num.valid
    ngroups = dict(num.groups())
    q_by_deg = {}
    t = {}
    for d in range(0, valid + 1):
        # R = N[d+1] - sum_{k>=2} D[k] * Q[d+1-k]
        work = {}
        for key, c in ngroups.get(d + 1, ()):
            work[key] = c
        if not monomial_den:
            for k in range(2, d + 2):
                dk = groups.get(k)
                qk = q_by_deg.get(d + 1 - k)
                if not dk or not qk:
                    continue
                for key, c in _hmul(dk, qk).items():
                    s = work.get(key, ZERO) - c
                    if s:
                        work[key] = s
                    else:
                        work.pop(key, None)
        qd = _divide_linear(work, pkey, inv_pc, others, p, n, d + 1)
        q_by_deg[d] = qd
        for key, c in qd:
            t[key] = c
    del sh
    return TruncSeries._raw(n, num.cap, valid, t)


def _divide_linear(work, pkey, inv_pc, others, p, n, degree):
    """Divide a homogeneous dict by the linear form; raise on remainder."""
    qd = {}
    pos = BITS * (n - 1 - p)
    levels = {}
    for key in work:
        levels.setdefault((key >> pos) & MASK, []).append(key)
    if not levels:
        return []
    top = max(levels)
    for e in range(top, 0, -1):
        for key in levels.get(e, ()):
            c = work.pop(key, None)
            if not c:
                continue
            qkey = key - pkey
            qc = c * inv_pc
            old = qd.get(qkey)
            qd[qkey] = qc if old is None else old + qc
            for off, lc in others:
                nk = qkey + pkey + off
                s = work.get(nk, ZERO) - qc * lc
                if s:
                    if nk not in work:
                        levels.setdefault(e - 1, []).append(nk)
                    work[nk] = s
                else:
                    work.pop(nk, None)
    rem = [(k, c) for k, c in work.items() if c]
    if rem:
        k, c = min(rem)
        raise DivisibilityError(
            f"nonzero remainder in degree {degree}", degree=degree, monomial=unpack(k, n), coefficient=c
        )
    return [(k, c) for k, c in qd.items() if c]


def comp_inverse(a):
    """Compositional inverse of a univariate series ``a1 x + a2 x^2 + ...``."""
    if a.nvars != 1:
        raise DimensionError("compositional inverse needs a univariate series")
    if a.constant_term():
        raise NoInverseError("series has nonzero constant term")
    a1 = a.coeff((1,))
    if not a1:
        raise NoInverseError("linear coefficient is zero")
    inv_a1 = ONE / a1
    f = TruncSeries._raw(1, a.cap, a.valid, {var_key(0, 1): inv_a1} if a.valid >= 1 else {})
    for d in range(2, a.valid + 1):
        comp = substitute(a.truncated(d), [f.truncated(d)])
        c = comp.coeff((d,))
        if c:
            t = dict(f._t)
            t[pack((d,))] = -inv_a1 * c
            f = TruncSeries._raw(1, a.cap, a.valid, t)
    return f


def coefficient_list(a):
    """Univariate coefficients [c0..c_valid]."""
    if a.nvars != 1:
        raise DimensionError("not univariate")
    return [a.coeff((i,)) for i in range(a.valid + 1)]
