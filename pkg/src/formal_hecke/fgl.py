"""One-dimensional commutative formal group laws.

A law is stored as a bivariate :class:`TruncSeries` together with the derived
series that everything downstream needs: the formal inverse, the ratio
``mu(x) = inv(x) / (-x)`` and ``kappa(x) = 1/x + 1/inv(x)``.

Laws that can be regenerated to any order keep a ``recipe`` (a function of the
cap) so that callers needing more precision can ask for it with
:meth:`FormalGroupLaw.at_cap`.
"""

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (
    InsufficientExpansionError,
    InvalidFGLError,
    NormalizationUnavailableError,
    ParseError,
)
from .scalars import ONE, ZERO, Q, ScalarField
from .series import (
    TruncSeries,
    comp_inverse,
    div_exact,
    invert_unit,
    substitute,
)

# Laws for which the Demazure words of one Weyl element are known to agree.
WORD_INDEPENDENT = ("additive", "multiplicative")

# Symbols for mu_F(x_gamma) and x_gamma, present in every default coefficient field.
GAMMA_SYMBOLS = ("mu", "xg")


@dataclass
class AxiomFailure:
    axiom: str
    degree: int
    monomial: tuple
    lhs: object
    rhs: object

    def describe(self):
        return (f"{self.axiom} fails in degree {self.degree} at monomial {self.monomial}: "
                f"{self.lhs} != {self.rhs}")


@dataclass
class FormalGroupLaw:
    name: str
    params: dict
    series: TruncSeries
    field: ScalarField
    recipe: Optional[Callable] = None
    inverse: TruncSeries = None
    mu: TruncSeries = None
    kappa: TruncSeries = None
    failures: list = field(default_factory=list)

    @property
    def cap(self):
        return self.series.cap

    @property
    def valid(self):
        return self.series.valid

    @property
    def a11(self):
        return self.series.coeff((1, 1))

    @property
    def kappa_zero(self):
        return self.kappa.is_zero()

    @property
    def kappa_class(self):
        return "kappa_zero" if self.kappa_zero else "kappa_nonzero"

    @property
    def a_invertible(self):
        return bool(self.a11)

    @property
    def supported(self):
        """Either kappa vanishes or a11 is invertible."""
        return self.kappa_zero or self.a_invertible

    @property
    def is_valid(self):
        return not self.failures

    @property
    def extendable(self):
        return self.recipe is not None

    def is_normal(self):
        """The formal inverse is x/(x-1) = -x - x^2 - ... through its valid degree."""
        target = TruncSeries.univariate([ZERO] + [-ONE] * self.inverse.valid, self.inverse.cap)
        return self.inverse.agrees(target)

    def at_cap(self, cap):
        """This law regenerated (or truncated) to ``cap``."""
        if cap == self.cap:
            return self
        if cap < self.cap:
            law = make_fgl(self.series.with_cap(cap), name=self.name, params=self.params,
                           field=self.field, validate=False, recipe=self.recipe)
            law.failures = [f for f in self.failures if f.degree <= cap]
            return law
        if self.recipe is None:
            raise InsufficientExpansionError(
                f"law {self.name!r} is only known through degree {self.cap}; degree {cap} requested"
            )
        return self.recipe(cap)

    def label(self):
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())

    # evaluation ----------------------------------------------------------------
    def add(self, u, v):
        """u +_F v for series in a common ring (both must have zero constant term)."""
        return substitute(self.series.with_cap(u.cap), [u, v])

    def neg(self, u):
        return substitute(self.inverse.with_cap(u.cap), [u])

    def mu_of(self, u):
        return substitute(self.mu.with_cap(u.cap), [u])

    def kappa_of(self, u):
        return substitute(self.kappa.with_cap(u.cap), [u])

    def text(self):
        return self.series.to_text(["x", "y"])


def _check_axioms(F):
    """Unit, commutativity and associativity through the valid degree."""
    out = []
    cap = F.cap
    v = F.valid
    X = TruncSeries.var(0, 1, cap)
    Z = TruncSeries.zero(1, cap)
    lin = TruncSeries(2, cap, {(1, 0): 1, (0, 1): 1})
    lin_diff = F.homogeneous(1).first_difference(lin.truncated(v), upto=1) if v >= 1 else None
    if lin_diff is not None or F.constant_term():
        out.append(AxiomFailure("shape", 1 if lin_diff else 0, lin_diff[0] if lin_diff else (0, 0),
                                lin_diff[1] if lin_diff else F.constant_term(),
                                lin_diff[2] if lin_diff else ZERO))
        return out
    unit = substitute(F, [X, Z])
    d = unit.first_difference(X.truncated(unit.valid))
    if d is not None:
        out.append(AxiomFailure("unit", sum(d[0]), d[0], d[1], d[2]))
    swapped = TruncSeries(2, cap, {(j, i): c for (i, j), c in F.terms.items()}, valid=v)
    d = F.first_difference(swapped)
    if d is not None:
        out.append(AxiomFailure("commutativity", sum(d[0]), d[0], d[1], d[2]))
    x3 = [TruncSeries.var(k, 3, cap) for k in range(3)]
    yz = substitute(F, [x3[1], x3[2]])
    xy = substitute(F, [x3[0], x3[1]])
    left = substitute(F, [x3[0], yz])
    right = substitute(F, [xy, x3[2]])
    d = left.first_difference(right)
    if d is not None:
        out.append(AxiomFailure("associativity", sum(d[0]), d[0], d[1], d[2]))
    return out


def formal_inverse(F):
    """The series i(x) with F(x, i(x)) = 0, solved degree by degree."""
    cap, v = F.cap, F.valid
    inv = TruncSeries.univariate([ZERO, -ONE], cap, valid=v)
    X = TruncSeries.var(0, 1, cap)
    for d in range(2, v + 1):
        val = substitute(F.truncated(d), [X.truncated(d), inv.truncated(d)])
        c = val.coeff((d,))
        if c:
            inv = inv - TruncSeries.monomial((d,), c, cap).truncated(v)
    return inv.truncated(v)


def mu_kappa(inv):
    """mu = i(x)/(-x) and kappa = 1/x + 1/i(x) from the formal inverse."""
    cap = inv.cap
    X = TruncSeries.var(0, 1, cap)
    mu = div_exact(-inv, X)
    num = inv + X  # divisible by x^2
    q = div_exact(div_exact(num, X), X)
    # kappa = (x + i)/(x i) = -(x + i)/x^2 * mu^{-1}
    kappa = -(q * invert_unit(mu.with_cap(cap)))
    kappa = kappa.truncated(min(q.valid, mu.valid))
    return mu, kappa


def make_fgl(series, name="custom", params=None, field=None, validate=True, recipe=None):
    """Wrap a bivariate series as a law, computing inverse, mu and kappa.

    With ``validate`` the axioms are checked through the valid degree and an
    :class:`InvalidFGLError` is raised on failure.  Without it the failures
    are recorded on the returned object.
    """
    if series.nvars != 2:
        raise InvalidFGLError("a formal group law is a bivariate series")
    failures = _check_axioms(series)
    if failures and validate:
        raise InvalidFGLError(failures[0].describe(), failures)
    law = FormalGroupLaw(name=name, params=dict(params or {}), series=series,
                         field=field or ScalarField(GAMMA_SYMBOLS), recipe=recipe, failures=failures)
    if failures and failures[0].axiom == "shape":
        law.inverse = TruncSeries.zero(1, series.cap)
        law.mu = TruncSeries.zero(1, series.cap)
        law.kappa = TruncSeries.zero(1, series.cap)
        return law
    law.inverse = formal_inverse(series)
    law.mu, law.kappa = mu_kappa(law.inverse)
    return law


# catalog -----------------------------------------------------------------------

def additive(cap, field=None):
    F = TruncSeries(2, cap, {(1, 0): 1, (0, 1): 1})
    return make_fgl(F, "additive", {}, field, recipe=lambda c: additive(c, field))


def multiplicative(beta, cap, field=None):
    """x + y - beta x y."""
    F = TruncSeries(2, cap, {(1, 0): 1, (0, 1): 1, (1, 1): -beta})
    return make_fgl(F, "multiplicative", {"beta": beta}, field,
                    recipe=lambda c: multiplicative(beta, c, field))


def lorentz(beta, cap, field=None):
    """(x + y) / (1 + beta x y)."""
    num = TruncSeries(2, cap, {(1, 0): 1, (0, 1): 1})
    den = TruncSeries(2, cap, {(0, 0): 1, (1, 1): beta})
    return make_fgl(num * invert_unit(den), "lorentz", {"beta": beta}, field,
                    recipe=lambda c: lorentz(beta, c, field))


ELLIPTIC_CAP = 4


def elliptic_tate_deg4(a1, a2, a3, a4, a6, cap=ELLIPTIC_CAP, field=None):
    """The elliptic law of a Tate curve, known through total degree 4 only."""
    if cap > ELLIPTIC_CAP:
        raise InsufficientExpansionError(
            f"elliptic law is only tabulated through degree {ELLIPTIC_CAP}; cap {cap} requested"
        )
    terms = {
        (1, 0): 1, (0, 1): 1,
        (1, 1): -a1,
        (2, 1): -a2, (1, 2): -a2,
        (3, 1): -2 * a3, (1, 3): -2 * a3,
        (2, 2): -3 * a3 + a1 * a2,
    }
    F = TruncSeries(2, cap, {k: v for k, v in terms.items() if sum(k) <= cap})
    params = {"a1": a1, "a2": a2, "a3": a3, "a4": a4, "a6": a6}
    return make_fgl(F, "elliptic_tate_deg4", params, field)


def fgl_from_log(log, name="from_log", params=None, field=None, recipe=None, validate=True):
    """F(x, y) = log^{-1}(log x + log y) for log = x + c2 x^2 + ...

    Over Q such a law always exists; ``log`` must have linear coefficient 1.
    """
    if log.nvars != 1 or log.constant_term() or log.coeff((1,)) != 1:
        raise InvalidFGLError("logarithm must be x + higher order terms")
    cap = log.cap
    exp = comp_inverse(log)
    X = TruncSeries.var(0, 2, cap)
    Y = TruncSeries.var(1, 2, cap)
    s = substitute(log, [X]) + substitute(log, [Y])
    F = substitute(exp, [s])
    return make_fgl(F, name, params, field, validate=validate, recipe=recipe)


def from_log_coeffs(coeffs, cap, field=None, name="from_log", params=None):
    """Law with logarithm x + sum_k coeffs[k] x^k; ``coeffs`` maps k >= 2 to scalars."""
    log = TruncSeries(1, cap, {(1,): 1, **{(k,): c for k, c in coeffs.items() if k <= cap}})
    if params is None:
        params = {f"c{k}": c for k, c in sorted(coeffs.items())}
    return fgl_from_log(log, name, params, field,
                        recipe=lambda c: from_log_coeffs(coeffs, c, field, name, params))


def random_log_coeffs(seed, cap, bound=3):
    """Small random rational logarithm coefficients c2..c_cap (reproducible)."""
    rng = random.Random(seed)
    out = {}
    for k in range(2, cap + 1):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        out[k] = Q(num, den)
    if not out.get(2):
        out[2] = ONE
    return out


def perturbed(F, exps, delta, validate=False):
    """Copy of F with ``delta`` added to the coefficient of x^i y^j (both orders)."""
    i, j = exps
    terms = F.series.terms
    for m in {(i, j), (j, i)}:
        terms[m] = terms.get(m, ZERO) + delta
    S = TruncSeries(2, F.cap, terms, valid=F.valid)
    return make_fgl(S, F.name + "~perturbed", F.params, F.field, validate=validate)


# normalization ------------------------------------------------------------------

@dataclass
class Normalization:
    h: TruncSeries
    f: TruncSeries
    law: FormalGroupLaw
    checks: dict


def normalize(F, cap=None):
    """Change coordinates so that kappa becomes 1.

    With ``h(x) = (i(x) + x)/x`` and ``f`` its compositional inverse the new
    law is ``h(F(f x, f y))``.  Needs a nonzero kappa and invertible a11.  The
    returned checks confirm the normal form of the new inverse, mu and kappa.
    """
    target = F.cap if cap is None else cap
    if F.kappa_zero or not F.a_invertible:
        raise NormalizationUnavailableError("normalization needs kappa != 0 and an invertible a11")
    src = F.at_cap(target + 1) if F.extendable else F
    X = TruncSeries.var(0, 1, src.cap)
    h = div_exact(src.inverse + X, X)
    f = comp_inverse(h)
    Fs = src.series
    fx = substitute(f, [TruncSeries.var(0, 2, src.cap)])
    fy = substitute(f, [TruncSeries.var(1, 2, src.cap)])
    S = substitute(h, [substitute(Fs, [fx, fy])])
    S = S.with_cap(min(target, S.valid))
    recipe = (lambda c, F=F: normalize(F, c).law) if F.extendable else None
    law = make_fgl(S, "normalized", {"inner": F.label()}, F.field, validate=False, recipe=recipe)
    c = law.cap
    Xc = TruncSeries.var(0, 1, c)
    geo = TruncSeries.univariate([ONE] * (c + 1), c)  # 1/(1-x)
    checks = {
        "axioms": law.failures[0].describe() if law.failures else None,
        "inverse": _diff_text(law.inverse, -(Xc * geo)),
        "kappa": _diff_text(law.kappa, TruncSeries.one(1, c)),
        "mu": _diff_text(law.mu, geo),
    }
    return Normalization(h.with_cap(c), f.with_cap(c), law, checks)


def _diff_text(a, b):
    d = a.first_difference(b)
    if d is None:
        return None
    return f"degree {sum(d[0])}: {d[1]} != {d[2]}"


# parsing ---------------------------------------------------------------------------

KNOWN = ("additive", "multiplicative", "lorentz", "elliptic_tate_deg4", "from_log", "normalized")


def symbols_of_fgl_spec(text):
    """Symbol names a law string introduces (so a shared field can be made first)."""
    text = text.strip()
    name, _, rest = text.partition(":")
    if name == "normalized":
        return symbols_of_fgl_spec(rest)
    out = []
    if rest and rest != "random":
        for item in rest.split(","):
            item = item.strip()
            if item and "=" not in item and item.isidentifier():
                out.append(item)
    elif not rest and name in ("multiplicative", "lorentz"):
        out.append("beta")
    elif not rest and name == "elliptic_tate_deg4":
        out.extend(["a1", "a2", "a3", "a4", "a6"])
    return out


def _split_params(rest, field, names):
    vals = {}
    if not rest:
        items = []
    else:
        items = [s.strip() for s in rest.split(",") if s.strip()]
    for pos, item in enumerate(items):
        if "=" in item:
            key, _, value = item.partition("=")
            key = key.strip()
            vals[key] = field.parse(value)
        else:
            if item in field.symbols:
                vals[item] = field.gen(item)
            else:
                if names is None or pos >= len(names):
                    raise ParseError(f"unexpected parameter {item!r}")
                vals[names[pos]] = field.parse(item)
    return vals


def parse_fgl(text, cap, field=None, seed=0):
    """Build a law from strings like ``multiplicative:beta`` or ``from_log:c2=1,c3=1/2``.

    ``field`` must already contain any symbols used (see :func:`symbols_of_fgl_spec`).
    """
    if field is None:
        field = ScalarField(tuple(symbols_of_fgl_spec(text)) + GAMMA_SYMBOLS)
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.strip()
    if name == "normalized":
        inner = parse_fgl(rest, cap, field, seed)
        return normalize(inner, cap).law
    if name == "additive":
        if rest:
            raise ParseError("additive takes no parameters")
        return additive(cap, field)
    if name in ("multiplicative", "lorentz"):
        vals = _split_params(rest or "beta", field, ["beta"])
        if set(vals) != {"beta"}:
            raise ParseError(f"{name} takes one parameter beta")
        beta = vals["beta"]
        if not beta:
            raise ParseError("beta must be nonzero")
        return (multiplicative if name == "multiplicative" else lorentz)(beta, cap, field)
    if name == "elliptic_tate_deg4":
        keys = ["a1", "a2", "a3", "a4", "a6"]
        vals = _split_params(rest or ",".join(keys), field, keys)
        missing = [k for k in keys if k not in vals]
        if missing:
            raise ParseError(f"missing elliptic parameters {missing}")
        return elliptic_tate_deg4(*(vals[k] for k in keys), cap=cap, field=field)
    if name == "from_log":
        if rest.strip() == "random":
            coeffs = random_log_coeffs(seed, max(cap, 12))
            params = {"random_seed": seed}
            return from_log_coeffs(coeffs, cap, field, "from_log", params)
        vals = _split_params(rest, field, None)
        coeffs = {}
        for key, v in vals.items():
            if not (key.startswith("c") and key[1:].isdigit() and int(key[1:]) >= 2):
                raise ParseError(f"from_log parameters are c2, c3, ...; got {key!r}")
            coeffs[int(key[1:])] = v
        return from_log_coeffs(coeffs, cap, field, "from_log", dict(vals))
    raise ParseError(f"unknown formal group law {name!r}; known: {', '.join(KNOWN)}")
