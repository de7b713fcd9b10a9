"""The formal group algebra R[[Lambda]]_F of a root datum.

Elements are :class:`TruncSeries` in one variable per lattice basis vector.
``x_of(lam)`` folds a lattice vector into F-sums and formal inverses of the
basis variables, so relations like ``x_{a+b} = F(x_a, x_b)`` hold by
construction.

The auxiliary rank-one group Gamma only enters through ``mu = mu_F(x_gamma)``
(or through ``x_gamma`` itself when kappa vanishes).  Because
``mu_F(x) mu_F(inv x) = 1``, every quantity needed here is a rational function
of that single scalar, so it is carried as a transcendental symbol of the
coefficient field.  An element of Q(params)(mu) lies in the power series ring
over Gamma exactly when its denominator does not vanish at ``mu = 1`` (at
``x_gamma = 0`` in the kappa = 0 case).
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import InsufficientExpansionError, UnsupportedDatumError, UnsupportedRingError
from .scalars import ONE, ZERO, ScalarField, pole_free_at
from .series import Substitution, TruncSeries, div_exact, invert_unit, substitute

MU = "mu"
XG = "xg"
HECKE_SYMBOLS = (MU, XG)


def hecke_field(symbols=()):
    """Scalar field with the given parameters and the two Gamma symbols."""
    return ScalarField(tuple(symbols) + HECKE_SYMBOLS)


@dataclass
class HeckeCoeffs:
    kappa_class: str
    symbol: str  # MU or XG
    theta: object  # Theta = mu - 1/mu (0 when kappa = 0)
    varpi: object
    eps_vartheta: object  # augmentation of vartheta_alpha
    vartheta: dict = field(default_factory=dict)  # root index -> series at the master cap

    def regular(self, c):
        """True when the scalar lies in the power series ring over Gamma."""
        value = 1 if self.symbol == MU else 0
        return pole_free_at(c, self.symbol, value)


class FormalGroupAlgebra:
    """R[[Lambda]]_F for a root datum, truncated at ``cap``.

    Ingredient series (x_alpha, kappa_alpha, units) are built once at a
    higher master cap so that localized computations do not lose precision
    to the truncation of their ingredients.
    """

    def __init__(self, datum, law, cap, slack=None):
        self.datum = datum
        self.n = datum.rank
        self.cap = cap
        if slack is None:
            slack = datum.npos + 2
        want = cap + slack
        if law.extendable:
            law = law.at_cap(want)
        elif law.cap < cap:
            raise InsufficientExpansionError(f"law known through degree {law.cap}, cap {cap} requested")
        self.law = law
        self.master = min(want, law.cap)
        self.field = law.field
        self._x = {}
        self._cache = {}
        self._subs = {}
        self._coeffs = None

    # basic elements -------------------------------------------------------------
    def var(self, k, cap=None):
        return TruncSeries.var(k, self.n, self.cap if cap is None else cap)

    def one(self, cap=None):
        return TruncSeries.one(self.n, self.cap if cap is None else cap)

    def zero(self, cap=None):
        return TruncSeries.zero(self.n, self.cap if cap is None else cap)

    def const(self, c, cap=None):
        return TruncSeries.constant(c, self.n, self.cap if cap is None else cap)

    def names(self):
        return [f"x_w{k + 1}" if self.datum.lattice == "sc" else f"x_a{k + 1}" for k in range(self.n)]

    def text(self, u, big_o=True):
        return u.to_text(self.names(), big_o)

    def _law_at(self, cap):
        return self.law.series.with_cap(cap)

    def _x_master(self, lam):
        lam = tuple(lam)
        got = self._x.get(lam)
        if got is not None:
            return got
        M = self.master
        if not any(lam):
            r = TruncSeries.zero(self.n, M)
        elif sum(1 for c in lam if c) == 1:
            k = next(i for i, c in enumerate(lam) if c)
            c = lam[k]
            if c == 1:
                r = TruncSeries.var(k, self.n, M)
            elif c < 0:
                pos = list(lam)
                pos[k] = -c
                r = substitute(self.law.inverse.with_cap(M), [self._x_master(pos)])
            else:
                prev = list(lam)
                prev[k] = c - 1
                r = self._add(self._x_master(prev), TruncSeries.var(k, self.n, M))
        else:
            k = max(i for i, c in enumerate(lam) if c)
            head = list(lam)
            head[k] = 0
            tail = [0] * self.n
            tail[k] = lam[k]
            r = self._add(self._x_master(head), self._x_master(tail))
        self._x[lam] = r
        return r

    def _add(self, u, v):
        return substitute(self._law_at(u.cap), [u, v])

    def x_of(self, lam, cap=None):
        """x_lambda as a series (lattice vector in the lattice basis)."""
        cap = self.cap if cap is None else cap
        return self._memo(("x", tuple(lam), cap), lambda: self._x_master(lam).with_cap(cap))

    def x_root(self, r, cap=None):
        return self.x_of(self.datum.root_vector(r), cap)

    def _memo(self, key, fn):
        got = self._cache.get(key)
        if got is None:
            got = fn()
            self._cache[key] = got
        return got

    def xpow(self, r, k, cap):
        if k == 1:
            return self.x_root(r, cap)
        return self._memo(("xpow", r, k, cap), lambda: self.xpow(r, k - 1, cap) * self.x_root(r, cap))

    def mu_root(self, r, cap=None):
        """mu_F(x_r) = x_{-r} / (-x_r), a unit."""
        cap = self.cap if cap is None else cap

        def build():
            m = self._memo(("mu_master", r), lambda: self.law.mu_of(self._x_master(self.datum.root_vector(r))))
            return m.with_cap(cap)
        return self._memo(("mu", r, cap), build)

    def neg_unit_inv(self, r, e, cap):
        """(-mu(x_r))^{-e}: rewrites 1/x_{-r}^e as that unit over x_r^e."""
        def build():
            if e == 1:
                return invert_unit(-self.mu_root(r, cap))
            return self.neg_unit_inv(r, e - 1, cap) * self.neg_unit_inv(r, 1, cap)
        return self._memo(("nui", r, e, cap), build)

    def kappa_root(self, r, cap=None):
        """kappa_alpha = kappa^F(x_alpha) as a series."""
        cap = self.cap if cap is None else cap

        def build():
            m = self._memo(("kappa_master", r), lambda: self.law.kappa_of(self._x_master(self.datum.root_vector(r))))
            return m.with_cap(cap)
        return self._memo(("kappa", r, cap), build)

    # W-action and Demazure operators -------------------------------------------
    def substitution(self, w, cap):
        key = (w, cap)
        s = self._subs.get(key)
        if s is None:
            R = self.datum
            images = []
            for k in range(self.n):
                e = tuple(int(i == k) for i in range(self.n))
                images.append(self.x_of(R.act_lattice(w, e), cap))
            s = Substitution(images)
            self._subs[key] = s
        return s

    def weyl_act(self, w, u):
        if w == 0:
            return u
        return self.substitution(w, u.cap)(u)

    def reflect(self, r, u):
        return self.weyl_act(self.datum.reflection(r), u)

    def demazure(self, r, u):
        """Delta_alpha(u) = (u - s_alpha u)/x_alpha for the root with index r."""
        return div_exact(u - self.reflect(r, u), self.x_root(r, u.cap))

    def demazure_simple(self, i, u):
        return self.demazure(self.datum.simple_index(i), u)

    def demazure_seq(self, word, u):
        """Delta_{i1} o ... o Delta_{ik} (u); the last letter acts first."""
        for i in reversed(word):
            u = self.demazure_simple(i, u)
        return u

    def augmentation(self, u):
        return u.constant_term()

    def filtration_degree(self, u):
        """Lowest degree of a nonzero term, or None when u vanishes to its precision."""
        if u.is_zero():
            return None
        return u.order()

    def is_invariant(self, u):
        for i in range(self.n):
            if not self.weyl_act(self.datum.simple_reflection(i), u).agrees(u):
                return False
        return True

    def orbit_sum(self, lam, cap=None):
        cap = self.cap if cap is None else cap
        out = self.zero(cap)
        for v in self.datum.orbit(tuple(lam)):
            out = out + self.x_of(v, cap)
        return out

    # Hecke coefficients ----------------------------------------------------------
    def hecke_coeffs(self):
        if self._coeffs is not None:
            return self._coeffs
        law = self.law
        fld = self.field
        if law.kappa_zero:
            if XG not in fld.symbols:
                raise UnsupportedRingError(f"coefficient field lacks the symbol {XG!r}; build it with hecke_field()")
            xg = fld.gen(XG)
            c = HeckeCoeffs("kappa_zero", XG, ZERO, ONE, 2 * xg)
            for r in range(len(self.datum.roots)):
                c.vartheta[r] = TruncSeries.constant(2 * xg, self.n, self.master)
        else:
            if not law.a_invertible:
                raise UnsupportedRingError("kappa is nonzero but a11 is not invertible")
            if MU not in fld.symbols:
                raise UnsupportedRingError(f"coefficient field lacks the symbol {MU!r}; build it with hecke_field()")
            mu = fld.gen(MU)
            theta = mu - ONE / mu
            # kappa(0) = -a11, so eps(vartheta) = Theta / kappa(0) = -Theta / a11
            c = HeckeCoeffs("kappa_nonzero", MU, theta, mu, theta / law.kappa.constant_term())
            for r in range(len(self.datum.roots)):
                k = self._memo(("kappa_master", r), lambda r=r: law.kappa_of(self._x_master(self.datum.root_vector(r))))
                c.vartheta[r] = invert_unit(k) * theta
        self._coeffs = c
        return c

    def vartheta(self, r, cap=None):
        cap = self.cap if cap is None else cap
        return self._memo(("vt", r, cap), lambda: self.hecke_coeffs().vartheta[r].with_cap(cap))

    def tau(self, r, u):
        """tau_alpha(u) = vartheta_alpha Delta_alpha(u) + varpi s_alpha(u)."""
        c = self.hecke_coeffs()
        d = self.demazure(r, u)
        return self.vartheta(r, d.cap) * d + self.reflect(r, u).scale(c.varpi)

    def tau_seq(self, word, u):
        for i in reversed(word):
            u = self.tau(self.datum.simple_index(i), u)
        return u

    def gamma_series(self, cap):
        """mu(x_gamma), mu(x_{-gamma}) and Theta as series in x_gamma (for display and checks)."""
        law = self.law.at_cap(cap + 1) if self.law.extendable else self.law
        X = TruncSeries.var(0, 1, cap)
        mu = law.mu.with_cap(cap)
        mu_neg = substitute(mu, [substitute(law.inverse.with_cap(cap), [X])])
        return mu, mu_neg, mu - mu_neg

    # u0 ---------------------------------------------------------------------------
    def find_u0(self):
        """A homogeneous degree-N u0 with eps Delta_{I0}(u0) = 1.

        The conditions on shorter and non-reduced sequences hold for every
        homogeneous degree-N element, so only the top one constrains it and a
        single monomial with nonzero eps Delta_{I0} can be rescaled.
        """
        R = self.datum
        if R.kind != "A" or R.lattice != "sc":
            raise UnsupportedDatumError("u0 is only certified for simply connected type A (torsion index 1)")
        N = R.N
        if self.cap < N + 1:
            raise InsufficientExpansionError(f"u0 needs cap >= {N + 1}")
        I0 = R.word(R.longest)
        monos = [m for m in combinations_with_replacement(range(self.n), N)]
        exps = []
        for m in monos:
            e = [0] * self.n
            for k in m:
                e[k] += 1
            exps.append(tuple(e))
        cap = self.cap
        values = []
        for e in exps:
            u = TruncSeries.monomial(e, ONE, cap) if self.n > 0 else None
            values.append(self.augmentation(self.demazure_seq(I0, u)))
        u0 = None
        for e, v in zip(exps, values):
            if v:
                u0 = TruncSeries.monomial(e, ONE / v, cap)
                break
        if u0 is None:
            raise UnsupportedDatumError("no degree-N monomial combination has eps Delta_{I0} = 1")
        return u0

    def tau_gram(self, u0=None):
        """eps(tau_{I_v} tau_{I_w}(u0)) with v by increasing length and w = v^{-1} w0.

        Returns (rows, cols, matrix); in this order the matrix is lower
        triangular with eps(vartheta)^N on the diagonal.
        """
        R = self.datum
        u0 = self.find_u0() if u0 is None else u0
        memo = {(): u0}

        def apply(seq):
            if seq not in memo:
                memo[seq] = self.tau(R.simple_index(seq[0]), apply(seq[1:]))
            return memo[seq]
        rows = R.by_length()
        cols = [R.mult(R.inverse(v), R.longest) for v in rows]
        M = [[self.augmentation(apply(R.word(v) + R.word(w))) for w in cols] for v in rows]
        return rows, cols, M
