"""The twisted formal group algebra and its Demazure and Hecke elements.

A :class:`Twisted` element is a finite sum ``sum_w q_w delta_w`` with left
coefficients ``q_w`` in the localized ring.  Products follow
``q delta_w * q' delta_v = q w(q') delta_{wv}``.

Absent coefficients are zero; when a coefficient cancels only to some finite
precision, that precision is remembered in ``zero_prec`` so comparisons never
claim more than was computed.
"""

from dataclasses import dataclass, field

from .errors import PoleError, UnitError
from .localized import Localized
from .scalars import ONE
from .series import TruncSeries, invert_unit

EXACT = 10**9


class Twisted:
    __slots__ = ("alg", "coeffs", "zero_prec")

    def __init__(self, alg, coeffs=None, zero_prec=EXACT):
        self.alg = alg
        self.zero_prec = zero_prec
        self.coeffs = {}
        kept = {}
        for w, c in (coeffs or {}).items():
            if c.is_zero():
                self.zero_prec = min(self.zero_prec, c.prec)
            else:
                kept[w] = c
        # a dropped coefficient limits what the others may claim
        for w, c in kept.items():
            c = _cap_prec(c, self.zero_prec)
            if c.is_zero():
                self.zero_prec = min(self.zero_prec, c.prec)
            else:
                self.coeffs[w] = c

    # constructors ------------------------------------------------------------------
    @classmethod
    def delta(cls, alg, w, coeff=None):
        c = Localized.scalar(alg, ONE) if coeff is None else coeff
        return cls(alg, {w: c})

    @classmethod
    def scalar(cls, alg, q):
        if not isinstance(q, Localized):
            q = Localized.series(alg, q) if isinstance(q, TruncSeries) else Localized.scalar(alg, q)
        return cls(alg, {0: q})

    @classmethod
    def zero(cls, alg):
        return cls(alg, {})

    # arithmetic ------------------------------------------------------------------------
    @property
    def prec(self):
        p = self.zero_prec
        for c in self.coeffs.values():
            p = min(p, c.prec)
        return p

    def coeff(self, w):
        c = self.coeffs.get(w)
        if c is None:
            return Localized(self.alg, TruncSeries.zero(self.alg.n, self.alg.cap,
                                                        valid=min(self.alg.cap, self.zero_prec)))
        return c

    def __add__(self, other):
        out = dict(self.coeffs)
        zp = min(self.zero_prec, other.zero_prec)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return Twisted(self.alg, out, zp)

    def __neg__(self):
        return Twisted(self.alg, {w: -c for w, c in self.coeffs.items()}, self.zero_prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Twisted):
            R = self.alg.datum
            out = {}
            zp = min(_shift(self.zero_prec, other._min_valuation()), _shift(other.zero_prec, self._min_valuation()))
            for w, a in self.coeffs.items():
                for v, b in other.coeffs.items():
                    t = a * b.act(w)
                    k = R.mult(w, v)
                    out[k] = out[k] + t if k in out else t
            return Twisted(self.alg, out, zp)
        return self.rmul(other)

    def lmul(self, q):
        """q * self for a localized element, series or scalar q."""
        q = _as_loc(self.alg, q)
        zp = _shift(self.zero_prec, q.valuation)
        return Twisted(self.alg, {w: q * c for w, c in self.coeffs.items()}, zp)

    def rmul(self, q):
        """self * q: each coefficient picks up w(q)."""
        q = _as_loc(self.alg, q)
        zp = _shift(self.zero_prec, q.valuation)
        return Twisted(self.alg, {w: c * q.act(w) for w, c in self.coeffs.items()}, zp)

    def scale(self, c):
        return Twisted(self.alg, {w: q * c for w, q in self.coeffs.items()}, self.zero_prec)

    def _min_valuation(self):
        if not self.coeffs:
            return EXACT
        return min(c.valuation for c in self.coeffs.values())

    # comparison -------------------------------------------------------------------------------
    def difference(self, other):
        """None, or (w, monomial, lhs, rhs) for the first disagreeing coefficient."""
        R = self.alg.datum
        for w in R.by_length():
            a, b = self.coeffs.get(w), other.coeffs.get(w)
            if a is None and b is None:
                continue
            a = self.coeff(w) if a is None else a
            b = other.coeff(w) if b is None else b
            d = a.difference(b)
            if d is not None:
                return (w,) + d[:3]
        return None

    def agrees(self, other):
        return self.difference(other) is None

    def common_prec(self, other):
        return min(self.prec, other.prec)

    def support(self):
        return sorted(self.coeffs, key=lambda w: (self.alg.datum.length(w), self.alg.datum.word(w)))

    def act_on(self, u):
        """sum_w q_w w(u), as a localized element."""
        u = _as_loc(self.alg, u)
        out = None
        for w, c in self.coeffs.items():
            t = c * u.act(w)
            out = t if out is None else out + t
        if out is None:
            out = Localized(self.alg, TruncSeries.zero(self.alg.n, self.alg.cap,
                                                       valid=min(self.alg.cap, self.zero_prec)))
        return out

    def text(self):
        R = self.alg.datum
        if not self.coeffs:
            return "0"
        parts = []
        for w in self.support():
            word = "".join(str(i + 1) for i in R.word(w)) or "e"
            parts.append(f"[{self.coeffs[w].text()}] d_{word}")
        return " + ".join(parts)


def _shift(prec, val):
    """Precision of (0 + O(prec)) times something of valuation ``val``."""
    if prec >= EXACT or val >= EXACT:
        return EXACT
    return prec + val


def _cap_prec(c, p):
    """c with its Laurent precision lowered to at most p."""
    if c.prec <= p:
        return c
    return Localized(c.alg, c.num.truncated(p + c.degree), c.den)


def _as_loc(alg, q):
    if isinstance(q, Localized):
        return q
    if isinstance(q, TruncSeries):
        return Localized.series(alg, q)
    return Localized.scalar(alg, q)


@dataclass
class BasisExpansion:
    coeffs: dict  # w -> Localized
    residual_prec: int
    violations: list = field(default_factory=list)


class HeckeAlgebra:
    """Demazure elements X_alpha, Hecke elements T_alpha and the word bases."""

    def __init__(self, alg):
        self.alg = alg
        self.R = alg.datum
        self._words = {}
        self._gens = {}

    @property
    def coeffs(self):
        return self.alg.hecke_coeffs()

    # generators -----------------------------------------------------------------------------
    def delta(self, w):
        return Twisted.delta(self.alg, w)

    def scalar(self, q):
        return Twisted.scalar(self.alg, q)

    def X(self, r):
        """X_alpha = (1/x_alpha)(1 - delta_alpha) for root index r."""
        key = ("X", r)
        if key not in self._gens:
            inv = Localized.over_root(self.alg, r)
            s = self.R.reflection(r)
            self._gens[key] = Twisted(self.alg, {0: inv, s: -inv})
        return self._gens[key]

    def T(self, r):
        """T_alpha = vartheta_alpha X_alpha + varpi delta_alpha."""
        key = ("T", r)
        if key not in self._gens:
            alg = self.alg
            c = self.coeffs
            vt = c.vartheta[r]
            xr = alg._x_master(self.R.root_vector(r))
            e_part = Localized.over_root(alg, r, vt)
            s_part = Localized.over_root(alg, r, xr.scale(c.varpi) - vt)
            s = self.R.reflection(r)
            self._gens[key] = Twisted(alg, {0: e_part, s: s_part})
        return self._gens[key]

    def Xi(self, i):
        return self.X(self.R.simple_index(i))

    def Ti(self, i):
        return self.T(self.R.simple_index(i))

    def word(self, letters, kind="T"):
        """X_I or T_I for a sequence of simple indices, built by right multiplication."""
        letters = tuple(letters)
        key = (kind, letters)
        got = self._words.get(key)
        if got is not None:
            return got
        if not letters:
            got = self.delta(0)
        else:
            head = self.word(letters[:-1], kind)
            gen = self.Ti(letters[-1]) if kind == "T" else self.Xi(letters[-1])
            got = head * gen if letters[:-1] else gen
        self._words[key] = got
        return got

    def basis(self, w, kind="T"):
        return self.word(self.R.word(w), kind)

    # basis expansion ---------------------------------------------------------------------------
    def expand(self, e, kind="T"):
        """Coefficients c_w with e = sum_w c_w B_w, B_w = X_{I_w} or T_{I_w}.

        Peels from the longest element down using the triangular shape of the
        basis in delta coordinates.
        """
        R = self.R
        rest = e
        out = {}
        violations = []
        for w in R.by_length(descending=True):
            a = rest.coeffs.get(w)
            if a is None:
                continue
            B = self.basis(w, kind)
            diag = B.coeff(w)
            try:
                c = a * diag.inverse()
            except UnitError:
                violations.append(w)
                continue
            out[w] = c
            rest = rest - B.lmul(c)
        return BasisExpansion(out, rest.prec, violations + [w for w in rest.coeffs])

    def reassemble(self, coeffs, kind="T"):
        out = Twisted.zero(self.alg)
        for w, c in coeffs.items():
            out = out + self.basis(w, kind).lmul(c)
        return out

    def transition(self, kind="T"):
        """Rows w: delta expansion of B_w, with triangularity violations."""
        R = self.R
        rows = {}
        bad = []
        for w in R.by_length():
            B = self.basis(w, kind)
            rows[w] = B
            for v in B.coeffs:
                if not R.bruhat_leq(v, w):
                    bad.append((w, v))
        return rows, bad

    def diagonal_closed_form(self, w, use_kappa=False):
        """prod over inversions of (varpi - vartheta_beta / x_beta) (or / kappa_beta)."""
        alg = self.alg
        c = self.coeffs
        out = Localized.scalar(alg, ONE)
        for b in self.R.inversions(w):
            vt = c.vartheta[b]
            if use_kappa:
                k = alg._memo(("kappa_master", b), lambda b=b: alg.law.kappa_of(alg._x_master(self.R.root_vector(b))))
                term = Localized(alg, (TruncSeries.constant(c.varpi, alg.n, alg.master) - vt * invert_unit(k)).with_cap(alg.cap))
            else:
                xr = alg._x_master(self.R.root_vector(b))
                term = Localized.over_root(alg, b, xr.scale(c.varpi) - vt)
            out = out * term
        return out

    # braid relations ---------------------------------------------------------------------------
    def alternating(self, first, second, m):
        return tuple(first if k % 2 == 0 else second for k in range(m))

    def braid_defect(self, i, j, kind="T"):
        """B_{jij...} - B_{iji...} (m_ij letters each) and its word-basis expansion."""
        m = self.R.m[i][j]
        lhs = self.word(self.alternating(j, i, m), kind)
        rhs = self.word(self.alternating(i, j, m), kind)
        d = lhs - rhs
        return d, self.expand(d, kind)

    # commuting past a series ---------------------------------------------------------------------
    def commute_past(self, letters, u):
        """phi_{I,E}(u) with T_I u = sum_E phi_{I,E}(u) T_E.

        Keys are tuples of positions in ``letters``.  Built by the recursion
        T_i v = s_i(v) T_i + vartheta_i Delta_i(v).
        """
        alg = self.alg
        letters = tuple(letters)
        if not letters:
            return {(): u}
        i = letters[0]
        r = self.R.simple_index(i)
        s = self.R.simple_reflection(i)
        inner = self.commute_past(letters[1:], u)
        out = {}
        for E, phi in inner.items():
            shifted = tuple(p + 1 for p in E)
            out[(0,) + shifted] = alg.weyl_act(s, phi)
            d = alg.demazure(r, phi)
            t = alg.vartheta(r, d.cap) * d
            if shifted in out:
                prev = out[shifted]
                cap = min(prev.cap, t.cap)
                out[shifted] = prev.with_cap(cap) + t.with_cap(cap)
            else:
                out[shifted] = t
        return out

    def reassemble_commute(self, letters, phis):
        out = Twisted.zero(self.alg)
        for E, phi in phis.items():
            sub = tuple(letters[p] for p in E)
            out = out + self.word(sub, "T").lmul(phi)
        return out

    # kappa coefficients --------------------------------------------------------------------------
    def inv_x(self, r, kappa=False):
        """1/x_r, or 1/(kappa_r x_r)."""
        alg = self.alg
        if not kappa:
            return Localized.over_root(alg, r)
        k = alg._memo(("kappa_master", r), lambda: alg.law.kappa_of(alg._x_master(self.R.root_vector(r))))
        return Localized.over_root(alg, r, invert_unit(k))

    def kappa_pair(self, b, g, primed=False):
        """kappa_{b,g} (or its primed variant) for roots b, g with b+g a root."""
        R = self.R
        s = R.root_add(b, g)
        if s is None:
            raise ValueError(f"{R.root_label(b)} + {R.root_label(g)} is not a root")
        ix = lambda r: self.inv_x(r, primed)  # noqa: E731
        return ix(s) * ix(g) - ix(s) * ix(R.negate(b)) - ix(b) * ix(g)


def pole_report(loc, coeffs):
    """(pole roots, gamma-irregular coefficient) for a localized element."""
    roots = [b for b, e in enumerate(loc.den) if e]
    bad = None
    for c in loc.num.coefficients():
        if not coeffs.regular(c):
            bad = c
            break
    return roots, bad


def require_series(loc, coeffs=None):
    roots, bad = pole_report(loc, coeffs) if coeffs is not None else ([b for b, e in enumerate(loc.den) if e], None)
    if roots or bad is not None:
        raise PoleError(f"not a power series: poles along {roots}, irregular scalar {bad}")
    return loc.to_series()
