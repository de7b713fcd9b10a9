"""Statement-level checks with structured verdicts.

Each statement has a stable id, a one-line title, the hypotheses it needs and
the smallest cap at which it means anything.  ``run_suite`` returns one
:class:`Verdict` per requested statement, in registry order.

A pass certifies agreement of every coefficient through the reported degree
and nothing beyond it.  Hypotheses that do not hold (or objects that cannot
be built, such as a normalization of a kappa = 0 law) give ``skipped`` with
the reason.  Mathematical errors raised while checking (a failed exact
division, a non-unit where a unit is required) count as failures.
"""

import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Optional

from .errors import (
    DivisibilityError,
    FormalHeckeError,
    InsufficientExpansionError,
    NormalizationUnavailableError,
    PoleError,
    UnitError,
    UnsupportedDatumError,
    UnsupportedRingError,
)
from .fga import FormalGroupAlgebra
from .fgl import ELLIPTIC_CAP, WORD_INDEPENDENT, FormalGroupLaw, _check_axioms, normalize, parse_fgl
from .hecke import HeckeAlgebra, Twisted
from .localized import Localized
from .rootdata import RootDatum, parse_datum
from .scalars import ONE, ZERO, Q
from .series import Substitution, TruncSeries, div_exact, invert_unit, monomial_text, substitute

DEFAULT_CAP = 6
EXACT = 10**9


class Skip(Exception):
    """Raised by a checker whose hypotheses are not met."""


# data types --------------------------------------------------------------------------

@dataclass
class CheckSpec:
    datum: object  # "A2:sc" or a RootDatum
    fgl: object  # law string or a FormalGroupLaw
    cap: Optional[int] = None  # None: each statement's default
    statements: Optional[list] = None  # None: all
    seed: int = 0


@dataclass
class Verdict:
    id: str
    status: str  # pass | fail | skipped
    title: str
    reason: str = ""
    witness: dict = field(default_factory=dict)
    precision: Optional[int] = None
    cap: Optional[int] = None
    seconds: float = 0.0

    @property
    def passed(self):
        return self.status == "pass"

    def line(self):
        if self.status == "pass":
            extra = "exact" if self.precision is None else f"through degree {self.precision}"
            extra += "" if self.cap is None else f", cap {self.cap}"
        elif self.status == "fail":
            w = self.witness.get("failure", {})
            extra = "; ".join(f"{k}={w[k]}" for k in ("check", "monomial", "lhs", "rhs") if k in w)
        else:
            extra = self.reason
        return f"{self.status.upper():7} {self.id:22} {extra}"

    def to_dict(self, timings=True):
        out = {
            "id": self.id,
            "status": self.status,
            "title": self.title,
            "reason": self.reason,
            "precision": self.precision,
            "cap": self.cap,
            "witness": self.witness,
        }
        if timings:
            out["seconds"] = f"{self.seconds:.3f}"
        return out

    @classmethod
    def from_dict(cls, d):
        return cls(d["id"], d["status"], d["title"], d.get("reason", ""), d.get("witness", {}),
                   d.get("precision"), d.get("cap"), float(d.get("seconds", 0.0)))


@dataclass
class Statement:
    id: str
    title: str
    fn: Callable
    needs: tuple = ()
    min_cap: Callable = None  # ctx-free: (datum) -> int
    default_cap: Callable = None  # (datum) -> int
    min_prec: int = 1


STATEMENTS = {}

# hypothesis gates --------------------------------------------------------------------


def _gate_algebra(ctx):
    ctx.alg


def _gate_hecke(ctx):
    ctx.alg.hecke_coeffs()


def _gate_kappa_nonzero(ctx):
    if ctx.law.kappa_zero:
        raise Skip("requires kappa != 0")


def _gate_normalizable(ctx):
    if ctx.law.kappa_zero or not ctx.law.a_invertible:
        raise Skip("requires kappa != 0 and an invertible a11 (normalization)")
    ctx.norm


def _gate_type_a_sc(ctx):
    R = ctx.R
    if R.kind != "A" or R.lattice != "sc":
        raise Skip("torsion index value not derivable beyond simply connected type A; needs A_n:sc")


GATES = {
    "algebra": _gate_algebra,
    "hecke": _gate_hecke,
    "kappa_nonzero": _gate_kappa_nonzero,
    "normalizable": _gate_normalizable,
    "type_a_sc": _gate_type_a_sc,
}


def statement(sid, title, needs=(), min_cap=None, default_cap=None, min_prec=1):
    def deco(fn):
        STATEMENTS[sid] = Statement(sid, title, fn, tuple(needs), min_cap, default_cap, min_prec)
        return fn
    return deco


# context -------------------------------------------------------------------------------


def law_at(fgl, cap, seed=0):
    """Parse (or truncate) a law for use at ``cap``; elliptic data stops at degree 4."""
    if isinstance(fgl, FormalGroupLaw):
        # a fixed law keeps its full expansion; the algebra takes what it needs
        return fgl.at_cap(cap) if fgl.extendable else fgl
    try:
        return parse_fgl(fgl, cap, seed=seed)
    except InsufficientExpansionError:
        if fgl.strip().startswith("elliptic_tate_deg4") or fgl.strip().startswith("normalized:elliptic"):
            return parse_fgl(fgl, ELLIPTIC_CAP, seed=seed)
        raise


class Context:
    """Lazily built objects shared by the statements at one cap."""

    def __init__(self, datum, fgl, cap, seed=0):
        self.R = datum if isinstance(datum, RootDatum) else parse_datum(datum)
        self.fgl = fgl
        self.cap = cap
        self.seed = seed
        self.law = law_at(fgl, cap, seed)
        self._cache = {}

    def _lazy(self, key, fn):
        if key not in self._cache:
            try:
                self._cache[key] = (True, fn())
            except (FormalHeckeError, ValueError) as exc:
                self._cache[key] = (False, exc)
        ok, val = self._cache[key]
        if not ok:
            raise val
        return val

    @property
    def alg(self):
        return self._lazy("alg", lambda: FormalGroupAlgebra(self.R, self.law, self.cap))

    @property
    def H(self):
        return self._lazy("H", lambda: HeckeAlgebra(self.alg))

    @property
    def coeffs(self):
        return self.alg.hecke_coeffs()

    @property
    def norm(self):
        """Normalization of the law, computed at the algebra's master cap."""
        def build():
            law = self.law
            cap = self.alg.master if law.extendable else law.cap
            return normalize(law, cap)
        return self._lazy("norm", build)

    @property
    def alg_t(self):
        return self._lazy("alg_t", lambda: FormalGroupAlgebra(self.R, self.norm.law, self.cap))

    @property
    def H_t(self):
        return self._lazy("H_t", lambda: HeckeAlgebra(self.alg_t))

    def normal_target(self):
        """(alg, H, note): the law itself when normal, else its normalization."""
        if self.law.kappa_zero:
            raise Skip("requires a normal law (kappa != 0)")
        if self.law.is_normal():
            return self.alg, self.H, "law is normal"
        if not self.law.a_invertible:
            raise Skip("requires a normal law or an invertible a11")
        try:
            return self.alg_t, self.H_t, "checked on the normalization of the law"
        except NormalizationUnavailableError as exc:
            raise Skip(str(exc)) from None

    def rng(self, sid):
        return random.Random(f"{self.seed}:{sid}")


# comparison bookkeeping ----------------------------------------------------------------


def _names(n):
    return ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]


class Tally:
    """Collects comparisons, their certified precision and the first failure."""

    def __init__(self, names=None):
        self.names = names
        self.prec = None
        self.failure = None
        self.checks = 0
        self.witness = {}

    def seen(self, p):
        if p is None:
            return
        self.prec = p if self.prec is None else min(self.prec, p)

    @property
    def failed(self):
        return self.failure is not None

    def fail(self, check, monomial, lhs, rhs, **extra):
        if self.failure is None:
            self.failure = {"check": check, "monomial": monomial or "1", "lhs": str(lhs), "rhs": str(rhs)}
            self.failure.update({k: str(v) for k, v in extra.items()})

    def _mono(self, exps, names=None):
        names = names or self.names or _names(len(exps))
        return monomial_text(exps, names) or "1"

    def series(self, check, a, b, names=None):
        self.checks += 1
        a, b = _same_cap(a, b)
        d = a.first_difference(b)
        self.seen(min(a.valid, b.valid))
        if d is not None:
            self.fail(check, self._mono(d[0], names), d[1], d[2], degree=sum(d[0]))
            return False
        return True

    def zero(self, check, a, names=None):
        return self.series(check, a, TruncSeries.zero(a.nvars, a.cap), names)

    def loc(self, check, a, b):
        self.checks += 1
        d = a.difference(b)
        self.seen(min(a.prec, b.prec))
        if d is not None:
            self.fail(check, self._mono(d[0]), d[1], d[2], denominator=_den_text(a.alg, d[3]))
            return False
        return True

    def twisted(self, check, a, b):
        self.checks += 1
        d = a.difference(b)
        self.seen(min(a.prec, b.prec))
        if d is not None:
            R = a.alg.datum
            self.fail(check, self._mono(d[1]), d[2], d[3], delta=_word_text(R.word(d[0])))
            return False
        return True

    def scalar(self, check, a, b):
        self.checks += 1
        if a != b:
            self.fail(check, "1", a, b)
            return False
        return True

    def truth(self, check, ok, monomial="-", lhs="", rhs="", **extra):
        self.checks += 1
        if not ok:
            self.fail(check, monomial, lhs, rhs, **extra)
        return ok


def _same_cap(a, b):
    if a.cap == b.cap:
        return a, b
    c = min(a.cap, b.cap)
    return a.with_cap(c), b.with_cap(c)


def _den_text(alg, D):
    R = alg.datum
    parts = [f"x[{R.root_label(b)}]" + (f"^{e}" if e > 1 else "") for b, e in enumerate(D) if e]
    return "*".join(parts) or "1"


def _word_text(word):
    return "".join(str(i + 1) for i in word) or "e"


def _first_term(u, names):
    """(monomial text, coefficient) of the lowest nonzero term."""
    for key in u._sorted_keys():
        from .series import unpack
        return monomial_text(unpack(key, u.nvars), names) or "1", u._t[key]
    return "1", ZERO


# random inputs ----------------------------------------------------------------------------


def random_poly(n, cap, rng, max_deg=3, nterms=4, degree=None, constant=True):
    """A small polynomial with rational coefficients, exact at ``cap``."""
    terms = {}
    for _ in range(nterms):
        d = degree if degree is not None else rng.randint(0 if constant else 1, max_deg)
        e = [0] * n
        for _ in range(d):
            e[rng.randrange(n)] += 1
        c = Q(rng.randint(-3, 3) or 1, rng.randint(1, 3))
        terms[tuple(e)] = terms.get(tuple(e), ZERO) + c
    return TruncSeries(n, cap, {k: v for k, v in terms.items() if v and sum(k) <= cap})


def _seqs(n, max_len):
    for k in range(max_len + 1):
        yield from product(range(n), repeat=k)


def _alt(first, second, m):
    return tuple(first if k % 2 == 0 else second for k in range(m))


def _pairs(R, m):
    """Ordered simple pairs (i, j) with m_ij = m (for m = 4: i long, j short)."""
    out = []
    for i, j, mm in R.simple_pairs():
        if mm != m:
            continue
        if m == 4 and not (R.cartan[i][j] == -1 and R.cartan[j][i] == -2):
            continue
        out.append((i, j))
    if not out:
        raise Skip(f"datum has no pair with m_ij = {m}" + (" (i long, j short)" if m == 4 else ""))
    return out


def _in_ring(t, check, loc, coeffs, R):
    """loc has no poles and its scalars lie in the power series ring over Gamma."""
    poles = [R.root_label(b) for b, e in enumerate(loc.den) if e]
    if not t.truth(check + ": pole-free", not poles, "-", "poles along " + ",".join(poles), "no poles"):
        return False
    for c in loc.num.coefficients():
        if coeffs is not None and not coeffs.regular(c):
            t.truth(check + ": regular at the Gamma point", False, "-", c, f"no pole at {coeffs.symbol}")
            return False
    return True


# FGL statements -----------------------------------------------------------------------------


@statement("fgl-axioms", "F(x,0) = x, F(x,y) = F(y,x), F(x,F(y,z)) = F(F(x,y),z)")
def _fgl_axioms(ctx, t):
    law = ctx.law
    t.seen(law.valid)
    t.checks += 1
    for f in law.failures:
        t.fail(f.axiom, monomial_text(f.monomial, _names(len(f.monomial))) or "1", f.lhs, f.rhs,
               degree=f.degree)
    t.witness["law"] = law.label()
    t.witness["law_cap"] = law.cap


@statement("fgl-inverse", "F(x, i(x)) = 0 and i(x) = -x + a x^2 + ...")
def _fgl_inverse(ctx, t):
    law = ctx.law
    c = law.cap
    X = TruncSeries.var(0, 1, c)
    inv = law.inverse
    t.zero("F(x, i(x))", substitute(law.series, [X, inv]), ["x"])
    t.zero("F(i(x), x)", substitute(law.series, [inv, X]), ["x"])
    t.scalar("linear coefficient of i", inv.coeff((1,)), -ONE)
    if c >= 2:
        t.scalar("quadratic coefficient of i", inv.coeff((2,)), law.a11)
    t.witness["inverse"] = inv.to_text(["x"])


@statement("fgl-kappa-mu", "kappa x i(x) = x + i(x), mu (-x) = i(x), kappa = 0 iff mu = 1")
def _fgl_kappa_mu(ctx, t):
    law = ctx.law
    c = law.cap
    X = TruncSeries.var(0, 1, c)
    inv = law.inverse
    t.series("kappa x i(x) = x + i(x)", law.kappa.with_cap(c) * X * inv, X + inv, ["x"])
    t.series("mu (-x) = i(x)", law.mu.with_cap(c) * (-X), inv, ["x"])
    mu_one = law.mu.agrees(TruncSeries.one(1, law.mu.cap))
    t.truth("kappa = 0 iff mu = 1", mu_one == law.kappa_zero, "-",
            f"kappa_zero={law.kappa_zero}", f"mu_is_one={mu_one}")
    if not law.kappa_zero:
        t.truth("kappa != 0 needs invertible a11", law.a_invertible, "x*y", law.a11, "invertible")
    t.witness["kappa_class"] = law.kappa_class + (" (up to cap)" if law.kappa_zero else "")
    t.witness["kappa"] = law.kappa.to_text(["x"])
    t.witness["mu"] = law.mu.to_text(["x"])


@statement("lemma-fglkey", "normalization: i(x) = x/(x-1), kappa = 1, mu = 1/(1-x)", needs=("normalizable",))
def _lemma_fglkey(ctx, t):
    law = ctx.law
    cap = law.cap
    n = normalize(law, cap)
    L = n.law
    c = L.cap
    X = TruncSeries.var(0, 1, c)
    geo = TruncSeries.univariate([ONE] * (c + 1), c)
    t.series("inverse of the normalization", L.inverse, -(X * geo), ["x"])
    t.series("kappa of the normalization", L.kappa, TruncSeries.one(1, L.kappa.cap).truncated(L.kappa.valid), ["x"])
    t.series("mu of the normalization", L.mu, geo.with_cap(L.mu.cap).truncated(L.mu.valid), ["x"])
    for f in _check_axioms(L.series):
        t.fail("normalized law: " + f.axiom, monomial_text(f.monomial, _names(len(f.monomial))), f.lhs, f.rhs,
               degree=f.degree)
    h, f = n.h, n.f
    t.series("f(h(x)) = x", substitute(f, [h]), X, ["x"])
    t.series("h(f(x)) = x", substitute(h, [f]), X, ["x"])
    F2 = law.series.with_cap(c)
    x2, y2 = TruncSeries.var(0, 2, c), TruncSeries.var(1, 2, c)
    lhs = substitute(h, [F2])
    rhs = substitute(L.series, [substitute(h, [x2]), substitute(h, [y2])])
    t.series("h(x +F y) = h(x) +F~ h(y)", lhs, rhs, ["x", "y"])
    if law.name == "multiplicative":
        t.series("normalized multiplicative law", L.series, TruncSeries(2, c, {(1, 0): 1, (0, 1): 1, (1, 1): -1}),
                 ["x", "y"])
    t.witness["normalized"] = L.series.to_text(["x", "y"])
    t.witness["h"] = h.to_text(["x"])


@statement("lemma-normal-h", "for a normal law h(x) = i(x)", needs=("normalizable",))
def _lemma_normal_h(ctx, t):
    law = ctx.law
    if law.is_normal():
        target, note = law, "law is normal"
    else:
        target, note = normalize(law, law.cap).law, "checked on the normalization of the law"
    X = TruncSeries.var(0, 1, target.cap)
    h = div_exact(target.inverse + X, X)
    t.series("h = i", h, target.inverse, ["x"])
    t.witness["note"] = note


# root datum ------------------------------------------------------------------------------


@statement("rootdata", "roots, reflections, lengths, reduced words, Bruhat order and m_ij")
def _rootdata(ctx, t):
    R = ctx.R
    roots = set(range(len(R.roots)))
    for r in roots:
        coords = R.roots[r]
        t.truth(f"sign pattern of {R.root_label(r)}", all(c >= 0 for c in coords) or all(c <= 0 for c in coords))
        s = R.reflection(r)
        t.truth(f"s_{R.root_label(r)}^2 = e", R.mult(s, s) == 0)
    for w in range(R.order):
        t.truth(f"w(Sigma) = Sigma for {_word_text(R.word(w))}", {R.act_root(w, r) for r in roots} == roots)
        t.truth("length = #inversions", R.length(w) == len(R.inversions(w)), "-", R.length(w), len(R.inversions(w)))
        t.truth("recorded word evaluates to w", R.element(R.word(w)) == w)
        t.truth("w <= w0", R.bruhat_leq(w, R.longest))
    for v in range(R.order):
        for w in R.bruhat_ideal(v):
            if w != v:
                t.truth("Bruhat antisymmetry", not R.bruhat_leq(v, w))
    expect = {0: 2, 1: 3, 2: 4, 3: 6}
    for i, j, m in R.simple_pairs():
        t.truth(f"m_{i + 1}{j + 1}", expect.get(R.cartan[i][j] * R.cartan[j][i]) == m, "-", m,
                expect.get(R.cartan[i][j] * R.cartan[j][i]))
    try:
        tor = R.torsion()
        t.truth("det(Cartan) = |weights/roots|", R.cartan_det() == tor.order, "-", R.cartan_det(), tor.order)
        t.witness["torsion_primes"] = ",".join(map(str, tor.torsion_primes)) or "none"
    except UnsupportedDatumError:
        pass
    t.witness["order"] = R.order
    t.witness["N"] = R.N
    t.witness["words"] = " ".join(_word_text(R.word(w)) for w in R.by_length())


# Demazure operators ------------------------------------------------------------------------


def _alg_names(alg):
    return alg.names()


@statement("dla-1", "Delta(1) = 0 and x_a Delta_a(u) = u - s_a(u)", needs=("algebra",))
def _dla1(ctx, t):
    A = ctx.alg
    t.names = A.names()
    u = random_poly(A.n, A.cap, ctx.rng("dla-1"))
    for r in range(len(A.datum.roots)):
        t.zero(f"Delta_{A.datum.root_label(r)}(1)", A.demazure(r, A.one()))
        d = A.demazure(r, u)
        t.series("x Delta(u) = u - s(u)", A.x_root(r, d.cap) * d, (u - A.reflect(r, u)).with_cap(d.cap))


@statement("dla-2", "Delta_a^2 = kappa_a Delta_a, s_a Delta_a = -Delta_{-a}, Delta_a s_a = -Delta_a",
           needs=("algebra",))
def _dla2(ctx, t):
    A = ctx.alg
    R = A.datum
    t.names = A.names()
    u = random_poly(A.n, A.cap, ctx.rng("dla-2"))
    for r in range(len(R.roots)):
        d = A.demazure(r, u)
        dd = A.demazure(r, d)
        t.series(f"Delta^2 at {R.root_label(r)}", dd, A.kappa_root(r, dd.cap) * d.with_cap(dd.cap))
        t.series("s Delta = -Delta_{-a}", A.reflect(r, d), -A.demazure(R.negate(r), u))
        t.series("Delta s = -Delta", A.demazure(r, A.reflect(r, u)), -d)


@statement("dla-3", "Leibniz rule for Delta_a (both forms)", needs=("algebra",))
def _dla3(ctx, t):
    A = ctx.alg
    R = A.datum
    t.names = A.names()
    rng = ctx.rng("dla-3")
    u = random_poly(A.n, A.cap, rng)
    v = random_poly(A.n, A.cap, rng)
    for r in range(R.npos):
        du, dv = A.demazure(r, u), A.demazure(r, v)
        lhs = A.demazure(r, u * v)
        t.series("Delta(uv) = Delta(u) v + s(u) Delta(v)", lhs, du * v.with_cap(du.cap) + A.reflect(r, u).with_cap(du.cap) * dv)
        t.series("Delta(uv) = Delta(u) v + Delta(v) u - x Delta(u) Delta(v)", lhs,
                 du * v.with_cap(du.cap) + dv * u.with_cap(du.cap) - A.x_root(r, du.cap) * du * dv)


@statement("dla-4", "w Delta_a w^{-1} = Delta_{w(a)}", needs=("algebra",))
def _dla4(ctx, t):
    A = ctx.alg
    R = A.datum
    t.names = A.names()
    u = random_poly(A.n, A.cap, ctx.rng("dla-4"))
    for w in range(R.order):
        wi = R.inverse(w)
        for i in range(R.rank):
            r = R.simple_index(i)
            lhs = A.weyl_act(w, A.demazure(r, A.weyl_act(wi, u)))
            t.series(f"w={_word_text(R.word(w))}, a{i + 1}", lhs, A.demazure(R.act_root(w, r), u))


@statement("dla-5", "Delta_I is linear over W-invariants", needs=("algebra",))
def _dla5(ctx, t):
    A = ctx.alg
    R = A.datum
    t.names = A.names()
    u = random_poly(A.n, A.cap, ctx.rng("dla-5"))
    e1 = tuple(int(k == 0) for k in range(A.n))
    c = A.orbit_sum(e1)
    t.truth("orbit sum is W-invariant", A.is_invariant(c), "-", "not invariant", "invariant")
    for r in range(len(R.roots)):
        d = A.demazure(r, u)
        t.series(f"Delta_{R.root_label(r)}(c u) = c Delta(u)", A.demazure(r, c * u), c.with_cap(d.cap) * d)
    I0 = R.word(R.longest)
    d = A.demazure_seq(I0, u)
    t.series("Delta_{I0}(c u) = c Delta_{I0}(u)", A.demazure_seq(I0, c * u), c.with_cap(d.cap) * d)


def _check_filtration(t, label, v, bound, names):
    """All terms of v below degree ``bound`` vanish (needs v certified there)."""
    if bound <= 0:
        return
    if v.valid < bound - 1:
        return
    t.seen(v.valid)
    low = v.truncated(bound - 1)
    if not low.is_zero():
        mono, coeff = _first_term(low, names)
        t.fail(label, mono, coeff, 0, degree_bound=bound)


@statement("dla-6", "Delta_I lowers the filtration by l(I), by l(I)-1 when I is not reduced", needs=("algebra",))
def _dla6(ctx, t):
    A = ctx.alg
    R = A.datum
    names = A.names()
    t.names = names
    rng = ctx.rng("dla-6")
    for deg in range(1, min(4, A.cap)):
        u = random_poly(A.n, A.cap, rng, degree=deg)
        for I in _seqs(R.rank, min(3, A.cap - 1)):
            v = A.demazure_seq(I, u)
            red = R.is_reduced(I)
            bound = deg - len(I) + (0 if red else 1)
            _check_filtration(t, f"Delta_{_word_text(I)} on degree {deg}", v, bound, names)


# tau operators -----------------------------------------------------------------------------


@statement("lem-tau", "tau_a(1) = mu, product rule, quadratic relation, tau_a s_a, conjugation, linearity",
           needs=("hecke",))
def _lem_tau(ctx, t):
    A = ctx.alg
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    rng = ctx.rng("lem-tau")
    u = random_poly(A.n, A.cap, rng)
    v = random_poly(A.n, A.cap, rng)
    cinv = A.orbit_sum(tuple(int(k == 0) for k in range(A.n)))
    for r in range(len(R.roots)):
        lab = R.root_label(r)
        one = A.tau(r, A.one())
        t.series(f"tau_{lab}(1) = mu", one, A.const(c.varpi, one.cap))
        tu, tv = A.tau(r, u), A.tau(r, v)
        cap = tu.cap
        x = A.x_root(r, cap)
        vt = A.vartheta(r, cap)
        lhs = A.tau(r, u * v) * (x.scale(c.varpi) - vt)
        uv = (u * v).with_cap(cap)
        rhs = x * tu * tv - vt * (tu * v.with_cap(cap) + tv * u.with_cap(cap)) + vt.scale(c.varpi) * uv
        t.series(f"tau_{lab}(uv) product rule", lhs, rhs)
        tt = A.tau(r, tu)
        t.series(f"tau_{lab}^2", tt, tu.with_cap(tt.cap).scale(c.theta) + u.with_cap(tt.cap))
        su = A.reflect(r, u)
        t.series(f"tau_{lab}(s u)", A.tau(r, su), -tu + (u + su).with_cap(cap).scale(c.varpi))
        d = A.tau(r, cinv * u)
        t.series(f"tau_{lab}(c u) = c tau(u)", d, cinv.with_cap(d.cap) * tu)
    for w in range(R.order):
        wi = R.inverse(w)
        for i in range(R.rank):
            r = R.simple_index(i)
            lhs = A.weyl_act(w, A.tau(r, A.weyl_act(wi, u)))
            t.series(f"w tau w^-1 at w={_word_text(R.word(w))}", lhs, A.tau(R.act_root(w, r), u))
    t.witness["branch"] = "tau^2 = Theta tau + 1" if c.kappa_class == "kappa_nonzero" else "tau^2 = 1"


@statement("lem-grtau", "Gr tau_I = eps(vartheta)^l Gr Delta_I; tau_I lowers the filtration", needs=("hecke",))
def _lem_grtau(ctx, t):
    A = ctx.alg
    R = A.datum
    c = ctx.coeffs
    names = A.names()
    t.names = names
    rng = ctx.rng("lem-grtau")
    eps = c.eps_vartheta
    for I in _seqs(R.rank, min(3, A.cap - 1)):
        if not I:
            continue
        deg = len(I) + 1
        if deg > A.cap - len(I):
            continue
        u = random_poly(A.n, A.cap, rng, degree=deg)
        tu = A.tau_seq(I, u)
        du = A.demazure_seq(I, u)
        low = deg - len(I)
        if R.is_reduced(I):
            _check_filtration(t, f"tau_{_word_text(I)} filtration", tu, low, names)
            if tu.valid >= low and du.valid >= low:
                t.series(f"Gr tau_{_word_text(I)}", tu.homogeneous(low), du.homogeneous(low).scale(eps ** len(I)))
        else:
            _check_filtration(t, f"tau_{_word_text(I)} (not reduced) filtration", tu, low + 1, names)


@statement("lem-invertelem", "kappa_a and varpi - vartheta_a / x_a are invertible", needs=("hecke",))
def _lem_invertelem(ctx, t):
    A = ctx.alg
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    law = ctx.law
    for r in range(len(R.roots)):
        lab = R.root_label(r)
        vt = A.vartheta(r, A.cap)
        t.scalar(f"eps(vartheta_{lab})", vt.constant_term(), c.eps_vartheta)
        num = A.x_root(r).scale(c.varpi) - vt
        t.truth(f"constant term of varpi x - vartheta at {lab}", bool(num.constant_term()), "1", num.constant_term(),
                "a unit")
        t.series(f"(varpi x - vartheta) inverse at {lab}", num * invert_unit(num), A.one())
        if not law.kappa_zero:
            k = A.kappa_root(r)
            t.truth(f"kappa_{lab}(0) invertible", bool(k.constant_term()), "1", k.constant_term(), "a unit")
            t.series(f"kappa_{lab} inverse", k * invert_unit(k), A.one(k.cap).truncated(k.valid))
    t.witness["eps_vartheta"] = str(c.eps_vartheta)
    if not law.kappa_zero:
        t.witness["note"] = f"kappa(0) = {law.kappa.constant_term()} = -a11, so eps(vartheta) = -Theta/a11"


# u0 and Gram matrices -------------------------------------------------------------------------


def _two_n(R):
    return 2 * R.N + 1


def _basis_cap(R):
    # expansions over the basis lose about 2N degrees of Laurent precision
    return 2 * R.N + 2


def _det(M):
    """Determinant of a square matrix of scalars by elimination."""
    M = [list(row) for row in M]
    n = len(M)
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        p = M[col][col]
        det = det * p
        for r in range(col + 1, n):
            if M[r][col]:
                f = M[r][col] / p
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def _seq_values(ctx, op, u0, max_len):
    """eps of op_I(u0) for every sequence of length <= max_len (suffix-memoized)."""
    memo = {(): u0}

    def get(seq):
        if seq not in memo:
            memo[seq] = op(seq[0], get(seq[1:]))
        return memo[seq]
    return {I: get(I).constant_term() for I in _seqs(ctx.R.rank, max_len)}, get


@statement("u0", "eps Delta_I(u0) = 1 for reduced I of length N, else 0; Delta Gram matrix invertible",
           needs=("algebra", "type_a_sc"), min_cap=lambda R: R.N + 1, default_cap=_two_n)
def _u0(ctx, t):
    A = ctx.alg
    R = A.datum
    N = R.N
    u0 = A.find_u0()
    t.names = A.names()
    op = lambda i, u: A.demazure_simple(i, u)  # noqa: E731
    vals, get = _seq_values(ctx, op, u0, N)
    for I, v in vals.items():
        expect = ONE if (len(I) == N and R.is_reduced(I)) else ZERO
        t.scalar(f"eps Delta_{_word_text(I)}(u0)", v, expect)
    t.seen(A.cap - N)
    if A.cap >= 2 * N + 1:
        W = R.by_length()
        M = [[get(R.word(v) + R.word(w)).constant_term() for w in W] for v in W]
        d = _det(M)
        t.truth("det eps(Delta_{I_v} Delta_{I_w}(u0)) != 0", bool(d), "-", d, "nonzero")
        t.witness["delta_gram_det"] = str(d)
    t.witness["u0"] = A.text(u0, big_o=False)
    t.witness["t"] = "1"


@statement("gram", "eps tau_I(u0) pattern and unit determinant of the tau Gram matrix",
           needs=("hecke", "type_a_sc"), min_cap=_two_n, default_cap=_two_n)
def _gram(ctx, t):
    A = ctx.alg
    R = A.datum
    c = ctx.coeffs
    N = R.N
    u0 = A.find_u0()
    op = lambda i, u: A.tau(R.simple_index(i), u)  # noqa: E731
    vals, _ = _seq_values(ctx, op, u0, N)
    top = c.eps_vartheta ** N
    for I, v in vals.items():
        expect = top if (len(I) == N and R.is_reduced(I)) else ZERO
        t.scalar(f"eps tau_{_word_text(I)}(u0)", v, expect)
    V, Wd, M = A.tau_gram(u0)
    t.seen(A.cap - 2 * N)
    for k, v in enumerate(V):
        for l, w in enumerate(Wd):
            lv, lw = R.length(v), R.length(w)
            if lv + lw < N:
                t.scalar(f"eps tau_(I_v I_w)(u0) with l(v)+l(w) < N ({_word_text(R.word(v))},{_word_text(R.word(w))})",
                         M[k][l], ZERO)
            if l > k:
                t.scalar("upper triangle vanishes", M[k][l], ZERO)
        t.scalar(f"diagonal at v={_word_text(R.word(v))}", M[k][k], top)
    d = _det(M)
    diag = ONE
    for k in range(len(V)):
        diag = diag * M[k][k]
    t.scalar("det = product of the diagonal", d, diag)
    t.scalar("det = eps(vartheta)^(N |W|)", d, c.eps_vartheta ** (N * R.order))
    t.truth("eps(vartheta) invertible", bool(c.eps_vartheta), "-", c.eps_vartheta, "nonzero")
    t.witness["order_rows"] = " ".join(_word_text(R.word(v)) for v in V)
    t.witness["order_cols"] = " ".join(_word_text(R.word(w)) for w in Wd)
    t.witness["eps_matrix"] = [[str(x) for x in row] for row in M]
    t.witness["det"] = str(d)
    t.witness["u0"] = A.text(u0, big_o=False)


# twisted algebra: Demazure elements ---------------------------------------------------------------


def _random_loc(ctx, A, rng):
    """A random element u/x_beta of the localization."""
    R = A.datum
    beta = rng.randrange(len(R.roots))
    num = random_poly(A.n, A.master, rng)
    return Localized.over_root(A, beta, num)


def _delta_loc(A, r, q):
    """Delta_r(q) = (q - s_r q) / x_r for a localized q."""
    return (q - q.act(A.datum.reflection(r))) * Localized.over_root(A, r)


@statement("prop-demazure-1", "q X_a = X_a s_a(q) + Delta_a(q)", needs=("algebra",))
def _pd1(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    rng = ctx.rng("prop-demazure-1")
    for r in range(R.npos):
        X = H.X(r)
        s = R.reflection(r)
        q = random_poly(A.n, A.cap, rng)
        rhs = X.rmul(A.weyl_act(s, q)) + H.scalar(A.demazure(r, q))
        t.twisted(f"series q at {R.root_label(r)}", X.lmul(q), rhs)
        ql = _random_loc(ctx, A, rng)
        rhs = X.rmul(ql.act(s)) + Twisted.scalar(A, _delta_loc(A, r, ql))
        t.twisted(f"localized q at {R.root_label(r)}", X.lmul(ql), rhs)


@statement("prop-demazure-2", "X_a^2 = kappa_a X_a", needs=("algebra",))
def _pd2(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    for r in range(len(R.roots)):
        X = H.X(r)
        t.twisted(f"X^2 at {R.root_label(r)}", X * X, X.lmul(A.kappa_root(r)))


@statement("prop-demazure-3", "X_ij = X_ji when m_ij = 2", needs=("algebra",), min_cap=lambda R: 2)
def _pd3(ctx, t):
    H = ctx.H
    t.names = ctx.alg.names()
    for i, j in _pairs(ctx.R, 2):
        t.twisted(f"X_{i + 1}{j + 1} = X_{j + 1}{i + 1}", H.word((i, j), "X"), H.word((j, i), "X"))


@statement("prop-demazure-4", "X_jij - X_iji = kappa_ij X_i - kappa_ji X_j when m_ij = 3", needs=("algebra",),
           min_cap=lambda R: 3)
def _pd4(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    for i, j in _pairs(R, 3):
        ai, aj = R.simple_index(i), R.simple_index(j)
        kij, kji = H.kappa_pair(ai, aj), H.kappa_pair(aj, ai)
        _in_ring(t, f"kappa_{i + 1}{j + 1}", kij, None, R)
        lhs = H.word((j, i, j), "X") - H.word((i, j, i), "X")
        rhs = H.Xi(i).lmul(kij) - H.Xi(j).lmul(kji)
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, rhs)


def _b2_kappas(ctx, H, R, i, j):
    ai, aj = R.simple_index(i), R.simple_index(j)
    ij = R.root_add(ai, aj)
    i2j = R.root_add(ij, aj)
    K1 = H.kappa_pair(i2j, R.negate(aj)) + H.kappa_pair(aj, ai)  # kappa_{i+2j,-j} + kappa_ji
    K2 = H.kappa_pair(ij, aj) + H.kappa_pair(ai, aj)  # kappa_{i+j,j} + kappa_ij
    return K1, K2


@statement("prop-demazure-5", "the m_ij = 4 relation for X_jiji - X_ijij", needs=("algebra",), min_cap=lambda R: 4)
def _pd5(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    for i, j in _pairs(R, 4):
        K1, K2 = _b2_kappas(ctx, H, R, i, j)
        for lab, k in (("kappa_{i+2j,-j} + kappa_ji", K1), ("kappa_{i+j,j} + kappa_ij", K2)):
            _in_ring(t, lab, k, None, R)
        K1s, K2s = K1.to_series(), K2.to_series()
        lhs = H.word((j, i, j, i), "X") - H.word((i, j, i, j), "X")
        rhs = (H.word((i, j), "X").rmul(K1s) - H.word((j, i), "X").rmul(K2s)
               + H.Xi(j).rmul(A.demazure_simple(i, K2s)) - H.Xi(i).rmul(A.demazure_simple(j, K1s)))
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, rhs)
    t.witness["reading"] = "the bold Delta_ji term is read as the element X_ji"


def _basis_closure(t, ctx, H, kind, coeffs, extra):
    """Right products of basis elements by generators (and ``extra`` series) expand in the ring."""
    A = H.alg
    R = A.datum
    gens = [H.Ti(i) if kind == "T" else H.Xi(i) for i in range(R.rank)]
    count = 0
    for v in R.by_length():
        B = H.basis(v, kind)
        products = [(f"{_word_text(R.word(v))}*{kind}{i + 1}", B * g) for i, g in enumerate(gens)]
        products += [(f"{_word_text(R.word(v))}*{lab}", B.rmul(u)) for lab, u in extra]
        for lab, e in products:
            ex = H.expand(e, kind)
            if ex.violations:
                w = ex.violations[0]
                t.truth(f"{lab}: expansion", False, "-", f"leftover at delta_{_word_text(R.word(w))}", "0")
                continue
            for w, c in ex.coeffs.items():
                _in_ring(t, f"{lab}: coefficient of {kind}_{_word_text(R.word(w))}", c, coeffs, R)
                t.seen(c.prec)
            t.twisted(f"{lab}: reassembly", H.reassemble(ex.coeffs, kind), e)
            count += 1
    return count


@statement("prop-demazure-7", "left basis {X_{I_w}} of D_F", needs=("algebra",), min_cap=_basis_cap,
           default_cap=_basis_cap)
def _pd7(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    rows, bad = H.transition("X")
    for w, v in bad:
        t.truth("triangularity", False, "-", f"a_({_word_text(R.word(w))},{_word_text(R.word(v))}) != 0", "0")
    for w in R.by_length():
        d = rows[w].coeff(w)
        t.truth(f"diagonal of X_{_word_text(R.word(w))} nonzero", not d.is_zero(), "-", "0", "nonzero")
    q = random_poly(A.n, A.cap, ctx.rng("prop-demazure-7"))
    n = _basis_closure(t, ctx, H, "X", None, [("q", q)])
    t.witness["expansions"] = n


@statement("prop-demazure-8", "X_a for every root lies in the span of {X_{I_w}}", needs=("algebra",))
def _pd8(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    for r in range(len(R.roots)):
        ex = H.expand(H.X(r), "X")
        t.truth(f"X_{R.root_label(r)} expansion", not ex.violations)
        for w, c in ex.coeffs.items():
            _in_ring(t, f"X_{R.root_label(r)}: coefficient of X_{_word_text(R.word(w))}", c, None, R)
        t.twisted(f"X_{R.root_label(r)} reassembly", H.reassemble(ex.coeffs, "X"), H.X(r))


# twisted algebra: Hecke elements -------------------------------------------------------------------


@statement("prop-hecke-1", "q T_i - T_i s_i(q) = vartheta_i Delta_i(q)", needs=("hecke",))
def _ph1(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    rng = ctx.rng("prop-hecke-1")
    for i in range(R.rank):
        r = R.simple_index(i)
        T = H.Ti(i)
        s = R.simple_reflection(i)
        q = random_poly(A.n, A.cap, rng)
        d = A.demazure(r, q)
        rhs = H.scalar(A.vartheta(r, d.cap) * d)
        t.twisted(f"series q, i={i + 1}", T.lmul(q) - T.rmul(A.weyl_act(s, q)), rhs)
        ql = _random_loc(ctx, A, rng)
        vt = Localized.series(A, A.vartheta(r))
        rhs = Twisted.scalar(A, vt * _delta_loc(A, r, ql))
        t.twisted(f"localized q, i={i + 1}", T.lmul(ql) - T.rmul(ql.act(s)), rhs)


@statement("prop-hecke-2", "T_i^2 = 1 (kappa = 0) or T_i^2 = Theta T_i + 1", needs=("hecke",))
def _ph2(ctx, t):
    H = ctx.H
    c = ctx.coeffs
    t.names = ctx.alg.names()
    for i in range(ctx.R.rank):
        T = H.Ti(i)
        if c.kappa_class == "kappa_zero":
            t.twisted(f"T_{i + 1}^2 = 1", T * T, H.delta(0))
        else:
            t.twisted(f"T_{i + 1}^2 = Theta T + 1", T * T, T.scale(c.theta) + H.delta(0))
    t.witness["branch"] = "T_i^2 = 1" if c.kappa_class == "kappa_zero" else "T_i^2 = Theta T_i + 1"
    t.witness["Theta"] = str(c.theta)


def _defects(ctx, H):
    R = H.R
    out = []
    for i, j, m in R.simple_pairs():
        if m > 4:
            continue
        out.append((i, j, m) + H.braid_defect(i, j, "T"))
    return out


@statement("prop-hecke-3", "braid defects are supported on T_{I_w} with l(w) <= m_ij - 2", needs=("hecke",),
           min_cap=lambda R: 4)
def _ph3(ctx, t):
    H = ctx.H
    R = ctx.R
    t.names = ctx.alg.names()
    support = {}
    for i, j, m, d, ex in _defects(ctx, H):
        key = f"{i + 1},{j + 1}"
        if ex.violations:
            w = ex.violations[0]
            t.truth(f"({key}) expansion", False, "-", f"leftover at delta_{_word_text(R.word(w))}", "0")
        for w, c in ex.coeffs.items():
            if R.length(w) > m - 2:
                mono, coeff = _first_term(c.num, t.names)
                t.fail(f"({key}) support", mono, coeff, 0, basis=f"T_{_word_text(R.word(w))}", m=m)
        t.twisted(f"({key}) reassembly", H.reassemble(ex.coeffs, "T"), d)
        support[key] = " ".join(_word_text(R.word(w)) for w in sorted(ex.coeffs, key=R.by_length().index)) or "0"
    if any(m > 4 for _, _, m in R.simple_pairs()):
        t.witness["note"] = "pairs with m_ij = 6 are not checked"
    t.witness["support"] = support


@statement("prop-hecke-4", "T_ij = T_ji when m_ij = 2", needs=("hecke",), min_cap=lambda R: 2)
def _ph4(ctx, t):
    H = ctx.H
    t.names = ctx.alg.names()
    for i, j in _pairs(ctx.R, 2):
        t.twisted(f"T_{i + 1}{j + 1} = T_{j + 1}{i + 1}", H.word((i, j)), H.word((j, i)))


@statement("prop-hecke-5", "T_jij - T_iji = Theta^2 (T_i - T_j) kappa'_ij and kappa'_ij = kappa'_ji",
           needs=("hecke", "kappa_nonzero"), min_cap=lambda R: 3)
def _ph5(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    th2 = c.theta * c.theta
    for i, j in _pairs(R, 3):
        ai, aj = R.simple_index(i), R.simple_index(j)
        kp, kq = H.kappa_pair(ai, aj, primed=True), H.kappa_pair(aj, ai, primed=True)
        t.loc(f"kappa'_{i + 1}{j + 1} = kappa'_{j + 1}{i + 1}", kp, kq)
        lhs = H.word((j, i, j)) - H.word((i, j, i))
        rhs = (H.Ti(i) - H.Ti(j)).rmul(kp * th2)
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, rhs)


def _thm_kappa(ctx, H, b, g):
    normal = ctx.law.is_normal()
    return H.kappa_pair(b, g, primed=not normal)


@statement("thm-hecke-1", "T_jij - T_iji = (T_i - T_j) Theta^2 kappa_ij for normal F (kappa' otherwise)",
           needs=("hecke", "normalizable"), min_cap=lambda R: 3)
def _th1(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    th2 = c.theta * c.theta
    for i, j in _pairs(R, 3):
        k = _thm_kappa(ctx, H, R.simple_index(i), R.simple_index(j))
        _in_ring(t, f"kappa_{i + 1}{j + 1}", k, c, R)
        lhs = H.word((j, i, j)) - H.word((i, j, i))
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, (H.Ti(i) - H.Ti(j)).rmul(k * th2))
    t.witness["variant"] = "kappa" if ctx.law.is_normal() else "kappa'"


@statement("thm-hecke-2", "T_jiji - T_ijij = (T_ij - T_ji) Theta^2 (kappa_ij + kappa_{j,i+j}) for normal F",
           needs=("hecke", "normalizable"), min_cap=lambda R: 4)
def _th2(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    th2 = c.theta * c.theta
    for i, j in _pairs(R, 4):
        ai, aj = R.simple_index(i), R.simple_index(j)
        k = _thm_kappa(ctx, H, ai, aj) + _thm_kappa(ctx, H, aj, R.root_add(ai, aj))
        _in_ring(t, "kappa_ij + kappa_{j,i+j}", k, c, R)
        lhs = H.word((j, i, j, i)) - H.word((i, j, i, j))
        rhs = (H.word((i, j)) - H.word((j, i))).rmul(k * th2)
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, rhs)
    t.witness["variant"] = "kappa" if ctx.law.is_normal() else "kappa'"


# normal laws -------------------------------------------------------------------------------------


@statement("thm-demazure-1", "X_a^2 = X_a for normal F", needs=("normalizable",))
def _td1(ctx, t):
    A, H, note = ctx.normal_target()
    R = A.datum
    t.names = A.names()
    for r in range(len(R.roots)):
        X = H.X(r)
        t.twisted(f"X^2 = X at {R.root_label(r)}", X * X, X)
    t.witness["note"] = note


@statement("thm-demazure-2", "X_jij - X_iji = (X_i - X_j) kappa_ij, kappa_ij s_i- and s_j-invariant (normal F)",
           needs=("normalizable",), min_cap=lambda R: 3)
def _td2(ctx, t):
    A, H, note = ctx.normal_target()
    R = A.datum
    t.names = A.names()
    for i, j in _pairs(R, 3):
        k = H.kappa_pair(R.simple_index(i), R.simple_index(j))
        ks = k.to_series()
        for s in (i, j):
            t.series(f"s_{s + 1}(kappa_{i + 1}{j + 1})", A.weyl_act(R.simple_reflection(s), ks), ks)
        lhs = H.word((j, i, j), "X") - H.word((i, j, i), "X")
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, (H.Xi(i) - H.Xi(j)).rmul(ks))
    t.witness["note"] = note


@statement("thm-demazure-3", "X_jiji - X_ijij = (X_ij - X_ji)(kappa_ij + kappa_{j,i+j}) for normal F",
           needs=("normalizable",), min_cap=lambda R: 4)
def _td3(ctx, t):
    A, H, note = ctx.normal_target()
    R = A.datum
    t.names = A.names()
    for i, j in _pairs(R, 4):
        ai, aj = R.simple_index(i), R.simple_index(j)
        k = (H.kappa_pair(ai, aj) + H.kappa_pair(aj, R.root_add(ai, aj))).to_series()
        for s in (i, j):
            t.series(f"s_{s + 1} invariance", A.weyl_act(R.simple_reflection(s), k), k)
        lhs = H.word((j, i, j, i), "X") - H.word((i, j, i, j), "X")
        t.twisted(f"(i,j)=({i + 1},{j + 1})", lhs, (H.word((i, j), "X") - H.word((j, i), "X")).rmul(k))
    t.witness["note"] = note
    t.witness["reading"] = "second kappa index taken as (j, i+j); (i, i+j) is not a pair of roots here"


# transport along the normalization ------------------------------------------------------------------


class Transport:
    """Ring maps R[[L]]_F -> R[[L]]_F~ sending x_k to f(x~_{+-k}) (and the reverse with h)."""

    def __init__(self, src, dst, g, negate=False):
        self.src, self.dst, self.g, self.negate = src, dst, g, negate
        self._subs = {}
        self._units = {}

    def image_of(self, lam, cap):
        D = self.dst
        lam = tuple(-c for c in lam) if self.negate else tuple(lam)
        return substitute(self.g.with_cap(cap), [D.x_of(lam, cap)])

    def sub(self, cap):
        if cap not in self._subs:
            n = self.src.n
            self._subs[cap] = Substitution([self.image_of(tuple(int(i == k) for i in range(n)), cap) for k in range(n)])
        return self._subs[cap]

    def series(self, u):
        return self.sub(u.cap)(u)

    def unit_inv(self, r, cap):
        """(image of x_r / x~_r)^{-1} for a positive root r."""
        key = (r, cap)
        if key not in self._units:
            D = self.dst
            img = self.image_of(self.src.datum.root_vector(r), cap + 1)
            self._units[key] = invert_unit(div_exact(img, D.x_root(r, cap + 1)).with_cap(cap))
        return self._units[key]

    def loc(self, q):
        num = self.series(q.num)
        for b, e in enumerate(q.den):
            for _ in range(e):
                num = num * self.unit_inv(b, num.cap)
        return Localized(self.dst, num, q.den).reduced()

    def twisted(self, e):
        return Twisted(self.dst, {w: self.loc(c) for w, c in e.coeffs.items()}, e.zero_prec)


@statement("lemma-1", "phi_f(x_lambda) = f(x~_lambda), with inverse phi_h", needs=("algebra", "normalizable"))
def _lemma1(ctx, t):
    A, At = ctx.alg, ctx.alg_t
    R = A.datum
    n = ctx.norm
    t.names = A.names()
    phi_f = Transport(A, At, n.f)
    phi_h = Transport(At, A, n.h)
    lams = [R.root_vector(r) for r in range(len(R.roots))]
    lams += [tuple(int(i == k) for i in range(A.n)) for k in range(A.n)]
    for lam in lams:
        t.series(f"phi_f(x_{lam})", phi_f.series(A.x_of(lam)), substitute(n.f.with_cap(A.cap), [At.x_of(lam)]))
    u = random_poly(A.n, A.cap, ctx.rng("lemma-1"))
    t.series("phi_h(phi_f(u)) = u", phi_h.series(phi_f.series(u)), u)
    for w in range(R.order):
        t.series(f"phi_f commutes with w={_word_text(R.word(w))}", phi_f.series(A.weyl_act(w, u)),
                 At.weyl_act(w, phi_f.series(u)))


@statement("lemma-2", "normal F: kappa_a = 1, kappa_ij formula and symmetries; kappa'_ij in the ring",
           needs=("algebra", "normalizable"), min_cap=lambda R: 3)
def _lemma2(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    pairs = [(i, j) for i, j, m in R.simple_pairs() if m in (3, 4)]
    if not pairs:
        raise Skip("datum has no pair of simple roots whose sum is a root")
    An, Hn, note = ctx.normal_target()
    t.names = A.names()
    for r in range(len(R.roots)):
        k = An.kappa_root(r)
        t.series(f"kappa_{R.root_label(r)} = 1", k, An.one(k.cap).truncated(k.valid))
    for i, j in pairs:
        ai, aj = R.simple_index(i), R.simple_index(j)
        s = R.root_add(ai, aj)
        ix = Hn.inv_x
        k = Hn.kappa_pair(ai, aj)
        form = ix(s) * ix(ai) + ix(s) * ix(aj) - ix(s) - ix(ai) * ix(aj)
        lab = f"{i + 1}{j + 1}"
        t.loc(f"kappa_{lab} closed form", k, form)
        t.loc(f"kappa_{lab} = kappa_ji", k, Hn.kappa_pair(aj, ai))
        t.loc(f"kappa_{lab} = kappa_(-i,-j)", k, Hn.kappa_pair(R.negate(ai), R.negate(aj)))
        t.loc(f"kappa_{lab} = kappa_(-i,i+j)", k, Hn.kappa_pair(R.negate(ai), s))
        kp = H.kappa_pair(ai, aj, primed=True)
        _in_ring(t, f"kappa'_{lab}", kp, None, R)
        if ctx.law.is_normal():
            t.loc(f"kappa'_{lab} = kappa_{lab} for normal F", kp, H.kappa_pair(ai, aj))
        else:
            At, Ht = ctx.alg_t, ctx.H_t
            kt = Ht.kappa_pair(R.negate(ai), R.negate(aj)).to_series()
            phi_h = Transport(At, A, ctx.norm.h)
            t.series(f"kappa'_{lab} = phi_h(kappa~_(-i,-j))", kp.to_series(), phi_h.series(kt))
    t.witness["note"] = note


@statement("normalize-transport", "phi_f(X_i) = (x_i/f(x_i)) X~_i and (i o phi_f)(T_i) = T~_i",
           needs=("hecke", "normalizable"))
def _transport(ctx, t):
    A, H = ctx.alg, ctx.H
    At, Ht = ctx.alg_t, ctx.H_t
    R = A.datum
    n = ctx.norm
    t.names = A.names()
    phi_f = Transport(A, At, n.f)
    iota_phi = Transport(A, At, n.f, negate=True)
    gx = div_exact(n.f, TruncSeries.var(0, 1, n.f.cap))  # f(x)/x
    for r in range(len(R.roots)):
        lab = R.root_label(r)
        ratio = invert_unit(substitute(gx.with_cap(At.cap), [At.x_root(r)]))  # x/f(x) at x~_r
        t.twisted(f"phi_f(X_{lab})", phi_f.twisted(H.X(r)), Ht.X(r).lmul(ratio))
    for i in range(R.rank):
        t.twisted(f"(i o phi_f)(T_{i + 1})", iota_phi.twisted(H.Ti(i)), Ht.Ti(i))
        r = R.simple_index(i)
        lhs = A.x_root(r) * A.kappa_root(r, A.cap)
        t.series(f"x_{i + 1} kappa_{i + 1} = h(x_-{i + 1})", lhs,
                 substitute(n.h.with_cap(A.cap), [A.x_root(R.negate(r))]))
    back = Transport(At, A, n.h, negate=True)
    for i, j, m in R.simple_pairs():
        if m not in (3, 4):
            continue
        ai, aj = R.simple_index(i), R.simple_index(j)
        kt = Ht.kappa_pair(ai, aj).to_series()
        kp = H.kappa_pair(ai, aj, primed=True)
        if not _in_ring(t, f"kappa'_{i + 1}{j + 1}", kp, None, R):
            continue
        t.series(f"(phi_h o i)(kappa~_{i + 1}{j + 1}) = kappa'_{i + 1}{j + 1}", back.series(kt), kp.to_series())


# main theorem surrogates ----------------------------------------------------------------------------


def _transition_checks(t, ctx, H):
    A = H.alg
    R = A.datum
    c = ctx.coeffs
    rows, bad = H.transition("T")
    for w, v in bad:
        mono, coeff = _first_term(rows[w].coeff(v).num, A.names())
        t.fail("Bruhat triangularity", mono, coeff, 0, row=_word_text(R.word(w)), column=_word_text(R.word(v)))
    diag = {}
    kappa_form = "not applicable (kappa = 0)" if ctx.law.kappa_zero else "agrees"
    for w in R.by_length():
        d = rows[w].coeff(w)
        diag[w] = d
        t.loc(f"a_(v,v) at v={_word_text(R.word(w))}", d, H.diagonal_closed_form(w))
        c0 = d.num.constant_term()
        expect = (-c.eps_vartheta) ** R.length(w)
        t.scalar(f"constant term of diagonal numerator at {_word_text(R.word(w))}", c0, expect)
        if not ctx.law.kappa_zero and kappa_form == "agrees" and R.length(w):
            dd = d.difference(H.diagonal_closed_form(w, use_kappa=True))
            if dd is not None:
                mono = monomial_text(dd[0], A.names()) or "1"
                kappa_form = f"differs at v={_word_text(R.word(w))}, monomial {mono}: {dd[1]} vs {dd[2]}"
    return rows, diag, kappa_form


@statement("lem-transition", "T_{I_v} = sum a_(v,w) delta_w, Bruhat triangular, a_(v,v) = prod (varpi - vartheta/x)",
           needs=("hecke",))
def _lem_transition(ctx, t):
    H = ctx.H
    R = ctx.R
    t.names = ctx.alg.names()
    rows, diag, kappa_form = _transition_checks(t, ctx, H)
    t.witness["printed_kappa_form"] = kappa_form
    if R.order <= 8:
        t.witness["diagonal"] = {_word_text(R.word(w)): d.text() for w, d in diag.items()}


@statement("main-basis", "{T_{I_w}} is a basis over R_F[[L]]^kappa: triangular, unit diagonal, closed products",
           needs=("hecke",), min_cap=_basis_cap, default_cap=_basis_cap)
def _main_basis(ctx, t):
    A, H = ctx.alg, ctx.H
    t.names = A.names()
    _transition_checks(t, ctx, H)
    e1 = A.x_of(tuple(int(k == 0) for k in range(A.n)))
    q = random_poly(A.n, A.cap, ctx.rng("main-basis"))
    n = _basis_closure(t, ctx, H, "T", ctx.coeffs, [("x_1", e1), ("q", q)])
    t.witness["expansions"] = n


@statement("braid-coeff-in-ring", "every braid-defect coefficient lies in R_F[[L]]^kappa", needs=("hecke",),
           min_cap=lambda R: 4)
def _braid_in_ring(ctx, t):
    H = ctx.H
    R = ctx.R
    c = ctx.coeffs
    t.names = ctx.alg.names()
    coeffs = {}
    for i, j, m, d, ex in _defects(ctx, H):
        key = f"{i + 1},{j + 1}"
        t.truth(f"({key}) expansion", not ex.violations)
        out = {}
        for w, q in ex.coeffs.items():
            _in_ring(t, f"({key}) tau^{_word_text(R.word(w))}", q, c, R)
            t.seen(q.prec)
            out[_word_text(R.word(w))] = q.text()
        coeffs[key] = out
    t.witness["tau"] = coeffs


@statement("commute", "T_I u = sum_E phi_{I,E}(u) T_E with phi in the ring and phi_{I,I} = s_I(u)",
           needs=("hecke",))
def _commute(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    c = ctx.coeffs
    t.names = A.names()
    e1 = A.x_of(tuple(int(k == 0) for k in range(A.n)))
    q = random_poly(A.n, A.cap, ctx.rng("commute"))
    for lab, u in (("x_1", e1), ("q", q)):
        for w in R.by_length():
            I = R.word(w)
            phis = H.commute_past(I, u)
            full = tuple(range(len(I)))
            t.series(f"phi_(I,I) for I={_word_text(I)}, u={lab}", phis[full], A.weyl_act(R.element(I), u).with_cap(phis[full].cap))
            for E, phi in phis.items():
                t.seen(phi.valid)
                _in_ring(t, f"phi_(I,E) for I={_word_text(I)}", Localized.series(A, phi), c, R)
            if I:
                t.twisted(f"reassembly for I={_word_text(I)}, u={lab}", H.reassemble_commute(I, phis),
                          H.word(I).rmul(u))


@statement("center", "W-invariants are central; x_a1 is not; central scalars are W-invariant", needs=("hecke",))
def _center(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    e1 = tuple(int(k == 0) for k in range(A.n))
    z = A.orbit_sum(e1)
    # the plain orbit sum can vanish (additive A1), so also use the sum of squares
    z2 = A.zero()
    for v in R.orbit(e1):
        z2 = z2 + A.x_of(v) * A.x_of(v)
    for name, c in (("z", z), ("z2", z2)):
        t.truth(f"{name} is W-invariant", A.is_invariant(c), "-", "not invariant", "invariant")
        for i in range(R.rank):
            T = H.Ti(i)
            t.twisted(f"{name} T_{i + 1} = T_{i + 1} {name}", T.lmul(c), T.rmul(c))
    one = A.one()
    for i in range(R.rank):
        T = H.Ti(i)
        t.twisted("1 is central", T.lmul(one), T.rmul(one))
    y = A.x_root(R.simple_index(0))
    witness = None
    for i in range(R.rank):
        T = H.Ti(i)
        d = T.lmul(y).difference(T.rmul(y))
        if d is not None:
            witness = {"T": f"T_{i + 1}", "delta": _word_text(R.word(d[0])),
                       "monomial": monomial_text(d[1], A.names()) or "1", "lhs": str(d[2]), "rhs": str(d[3])}
            break
    t.truth("x_a1 is not central", witness is not None, "-", "commutes with every T_i", "a nonzero commutator")
    invariant = A.is_invariant(y)
    t.truth("central scalars are W-invariant (x_a1: neither)", not invariant, "-", "x_a1 invariant", "not invariant")
    t.witness["z"] = A.text(z)
    t.witness["z2"] = A.text(z2)
    t.witness["noncentral"] = witness


@statement("word-dependence", "Delta_I and X_I for the two reduced words of a dihedral longest element",
           needs=("algebra",), min_cap=lambda R: 4)
def _word_dependence(ctx, t):
    A, H = ctx.alg, ctx.H
    R = A.datum
    t.names = A.names()
    pairs = [(i, j, m) for i, j, m in R.simple_pairs() if i < j and 3 <= m <= 4]
    if not pairs:
        raise Skip("datum has no pair with m_ij in {3, 4}")
    i, j, m = pairs[0]
    I, J = _alt(i, j, m), _alt(j, i, m)
    u = random_poly(A.n, A.cap, ctx.rng("word-dependence"))
    dI, dJ = A.demazure_seq(I, u), A.demazure_seq(J, u)
    XI, XJ = H.word(I, "X"), H.word(J, "X")
    d1 = dI.first_difference(dJ)
    d2 = XI.difference(XJ)
    t.seen(min(dI.valid, dJ.valid, XI.prec, XJ.prec))
    equal = d1 is None and d2 is None
    law = ctx.law
    name = law.name
    inner = str(law.params.get("inner", ""))
    if name in WORD_INDEPENDENT:
        expect = "equal"
    elif name == "from_log" or (name == "normalized" and inner.startswith("from_log")):
        expect = "differ"
    else:
        expect = None
    obs = {"words": f"{_word_text(I)} vs {_word_text(J)}", "observed": "equal" if equal else "differ"}
    if d1 is not None:
        obs["delta_witness"] = {"monomial": monomial_text(d1[0], A.names()) or "1", "lhs": str(d1[1]), "rhs": str(d1[2])}
    if d2 is not None:
        obs["x_witness"] = {"delta": _word_text(R.word(d2[0])), "monomial": monomial_text(d2[1], A.names()) or "1",
                            "lhs": str(d2[2]), "rhs": str(d2[3])}
    t.witness.update(obs)
    if expect is None:
        raise Skip("independence of the word is only asserted for additive and multiplicative laws")
    t.witness["expected"] = expect
    if expect == "equal":
        if d1 is not None:
            t.fail("Delta words agree", obs["delta_witness"]["monomial"], d1[1], d1[2])
        if d2 is not None:
            t.fail("X words agree", obs["x_witness"]["monomial"], d2[2], d2[3])
        t.checks += 1
    else:
        t.truth("words differ for a generic law", not equal, "-", "equal", "different")


# running -------------------------------------------------------------------------------------------


MATH_ERRORS = (DivisibilityError, UnitError, PoleError)
SKIP_ERRORS = (InsufficientExpansionError, NormalizationUnavailableError, UnsupportedRingError, UnsupportedDatumError)


def statement_ids():
    return list(STATEMENTS)


def _ctx_names(ctx, n):
    try:
        names = ctx.alg.names()
    except FormalHeckeError:
        names = []
    return names if len(names) == n else _names(n)


def check_statement(sid, ctx):
    """Run one statement in a context and return its verdict."""
    st = STATEMENTS[sid]
    start = time.perf_counter()
    v = Verdict(sid, "pass", st.title, cap=ctx.cap)
    try:
        R = ctx.R
        if st.min_cap is not None and ctx.cap < st.min_cap(R):
            raise Skip(f"needs cap >= {st.min_cap(R)}")
        for g in st.needs:
            GATES[g](ctx)
        t = Tally()
        st.fn(ctx, t)
        v.witness = t.witness
        v.precision = t.prec
        if t.failure is not None:
            v.status = "fail"
            v.witness = dict(t.witness, failure=t.failure)
        elif t.prec is not None and t.prec < st.min_prec:
            v.status = "skipped"
            v.reason = f"insufficient precision: certified through degree {t.prec} only; raise the cap"
        v.witness["checks"] = t.checks
    except Skip as exc:
        v.status, v.reason = "skipped", str(exc)
    except SKIP_ERRORS as exc:
        v.status, v.reason = "skipped", f"{type(exc).__name__}: {exc}"
    except MATH_ERRORS as exc:
        v.status = "fail"
        failure = {"check": type(exc).__name__, "monomial": "-", "lhs": str(exc), "rhs": "-"}
        if getattr(exc, "monomial", None) is not None:
            m = exc.monomial
            failure["monomial"] = monomial_text(m, _ctx_names(ctx, len(m))) or "1"
        for k in ("degree", "coefficient"):
            if getattr(exc, k, None) is not None:
                failure[k] = str(getattr(exc, k))
        v.witness = {"failure": failure}
    v.seconds = time.perf_counter() - start
    return v


def default_cap(sid, R):
    st = STATEMENTS[sid]
    return st.default_cap(R) if st.default_cap is not None else DEFAULT_CAP


def run_suite(spec):
    """One verdict per requested statement, in registry order."""
    ids = spec.statements or statement_ids()
    unknown = [s for s in ids if s not in STATEMENTS]
    if unknown:
        raise KeyError(f"unknown statement ids: {', '.join(unknown)}")
    R = spec.datum if isinstance(spec.datum, RootDatum) else parse_datum(spec.datum)
    contexts = {}
    out = []
    for sid in statement_ids():
        if sid not in ids:
            continue
        cap = spec.cap if spec.cap is not None else default_cap(sid, R)
        if cap not in contexts:
            contexts[cap] = Context(R, spec.fgl, cap, spec.seed)
        out.append(check_statement(sid, contexts[cap]))
    return out
