import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_hecke.errors import InsufficientExpansionError, InvalidFGLError, NormalizationUnavailableError, ParseError
from formal_hecke.fgl import (
    additive,
    elliptic_tate_deg4,
    fgl_from_log,
    from_log_coeffs,
    lorentz,
    make_fgl,
    multiplicative,
    normalize,
    parse_fgl,
    perturbed,
    random_log_coeffs,
)
from formal_hecke.scalars import ONE, ZERO, Q, ScalarField
from formal_hecke.series import TruncSeries, substitute

import oracle
from oracle import X, Y


def sym_field(*names):
    return ScalarField(names + ("mu", "xg"))


def catalog(cap=10):
    fb = sym_field("beta")
    fe = sym_field("a1", "a2", "a3", "a4", "a6")
    beta = fb.gen("beta")
    laws = [
        additive(cap),
        multiplicative(beta, cap, fb),
        multiplicative(Q(2, 3), cap),
        lorentz(beta, cap, fb),
        elliptic_tate_deg4(*(fe.gen(n) for n in ("a1", "a2", "a3", "a4", "a6")), field=fe),
    ]
    laws += [from_log_coeffs(random_log_coeffs(s, cap), cap) for s in (0, 1, 2)]
    return laws


def uni_terms(s):
    return {e[0]: c for e, c in s.terms.items()}


# construction ------------------------------------------------------------------------


def test_additive_invariants():
    F = additive(8)
    assert uni_terms(F.inverse) == {1: -ONE}
    assert F.kappa.is_zero()
    assert uni_terms(F.mu) == {0: ONE}
    assert F.kappa_class == "kappa_zero"
    assert not F.is_normal()


def test_multiplicative_invariants():
    fb = sym_field("beta")
    beta = fb.gen("beta")
    F = multiplicative(beta, 10, fb)
    # i(x) = x/(beta x - 1) = -x - beta x^2 - beta^2 x^3 - ...
    assert uni_terms(F.inverse) == {k: -beta ** (k - 1) if k > 1 else -ONE for k in range(1, 11)}
    assert uni_terms(F.kappa) == {0: beta}
    assert uni_terms(F.mu) == {k: beta ** k if k else ONE for k in range(10)}
    assert F.kappa_class == "kappa_nonzero"
    assert multiplicative(ONE, 5).is_normal()


def test_lorentz_kappa_zero():
    fb = sym_field("beta")
    F = lorentz(fb.gen("beta"), 10, fb)
    assert F.kappa.is_zero()
    assert uni_terms(F.mu) == {0: ONE}


def test_elliptic_expansion():
    fe = sym_field("a1", "a2", "a3", "a4", "a6")
    a = [fe.gen(n) for n in ("a1", "a2", "a3", "a4", "a6")]
    F = elliptic_tate_deg4(*a, field=fe)
    assert F.cap == 4
    assert F.series.coeff((2, 2)) == a[0] * a[1] - 3 * a[2]
    assert F.series.coeff((1, 1)) == -a[0]
    with pytest.raises(InsufficientExpansionError):
        elliptic_tate_deg4(*a, cap=5, field=fe)


def test_non_commutative_rejected():
    # x + y + xy^2 already breaks symmetry in degree 3
    with pytest.raises(InvalidFGLError) as info:
        make_fgl(TruncSeries(2, 6, {(1, 0): 1, (0, 1): 1, (1, 2): 1}))
    fail = info.value.failures[0]
    assert (fail.axiom, fail.degree, fail.monomial) == ("commutativity", 3, (2, 1))


def test_non_associative_rejected():
    # the symmetrized x + y + xy(x + y) is commutative but not associative
    S = TruncSeries(2, 6, {(1, 0): 1, (0, 1): 1, (1, 2): 1, (2, 1): 1})
    with pytest.raises(InvalidFGLError) as info:
        make_fgl(S)
    fail = info.value.failures[0]
    assert fail.axiom == "associativity"
    assert fail.degree == 5
    assert make_fgl(S, validate=False).failures[0].axiom == "associativity"


def test_from_log_examples():
    assert from_log_coeffs({}, 8).series.terms == additive(8).series.terms
    fb = sym_field("beta")
    beta = fb.gen("beta")
    # -log(1 - beta x)/beta = x + beta x^2/2 + beta^2 x^3/3 + ...
    log = TruncSeries(1, 10, {(k,): beta ** (k - 1) / k for k in range(1, 11)})
    F = fgl_from_log(log, field=fb)
    assert F.series.terms == multiplicative(beta, 10, fb).series.terms
    fc = sym_field("c2", "c3")
    c2, c3 = fc.gen("c2"), fc.gen("c3")
    G = from_log_coeffs({2: c2, 3: c3}, 5, fc)
    assert G.a11 == -2 * c2


@pytest.mark.parametrize("seed", [0, 1, 2, 7])
def test_from_log_matches_oracle(seed):
    cap = 7
    coeffs = random_log_coeffs(seed, cap)
    F = from_log_coeffs(coeffs, cap)
    want = oracle.law_from_log({k: str(c) for k, c in coeffs.items()}, cap)
    assert sp.expand(oracle.to_sympy(F.series, [X, Y]) - want) == 0
    inv = oracle.formal_inverse(want, cap)
    assert sp.expand(oracle.to_sympy(F.inverse, [X]) - inv) == 0


def test_parse_fgl():
    assert parse_fgl("additive", 5).name == "additive"
    F = parse_fgl("multiplicative:beta=2/3", 5)
    assert F.a11 == Q(-2, 3)
    G = parse_fgl("from_log:c2=1,c3=1/2", 5)
    assert G.a11 == Q(-2)
    assert parse_fgl("normalized:multiplicative:beta", 5).is_normal()
    for bad in ("badfgl", "additive:1", "from_log:d2=1", "multiplicative:0"):
        with pytest.raises(ParseError):
            parse_fgl(bad, 5)


# invariants over the catalog ---------------------------------------------------------


@pytest.mark.parametrize("law", catalog(), ids=lambda F: F.label())
def test_catalog_axioms_and_inverse(law):
    assert law.is_valid, law.failures
    cap = law.cap
    U = TruncSeries.var(0, 1, cap)
    assert substitute(law.series, [U, law.inverse]).is_zero()
    assert law.inverse.coeff((1,)) == -ONE
    assert law.inverse.coeff((2,)) == law.a11
    # kappa = 0 iff mu = 1
    assert law.kappa.is_zero() == law.mu.agrees(TruncSeries.one(1, law.mu.cap))
    if not law.kappa_zero:
        assert law.a_invertible


@pytest.mark.parametrize("law", [F for F in catalog(12) if not F.kappa_zero], ids=lambda F: F.label())
def test_normalization(law):
    norm = normalize(law, min(12, law.cap))
    assert all(v is None for v in norm.checks.values()), norm.checks
    G = norm.law
    assert G.is_normal()
    assert G.kappa.agrees(TruncSeries.one(1, G.kappa.cap))
    assert all(c == -ONE for c in uni_terms(G.inverse).values())
    assert len(uni_terms(G.inverse)) == G.inverse.valid
    c = G.cap
    X1 = TruncSeries.var(0, 1, c)
    assert substitute(norm.f.with_cap(c), [norm.h.with_cap(c)]).agrees(X1)
    assert substitute(norm.h.with_cap(c), [norm.f.with_cap(c)]).agrees(X1)
    # h(x +_F y) = h(x) +_G h(y)
    Fx = law.series.with_cap(c)
    hx = substitute(norm.h.with_cap(c), [TruncSeries.var(0, 2, c)])
    hy = substitute(norm.h.with_cap(c), [TruncSeries.var(1, 2, c)])
    assert substitute(norm.h.with_cap(c), [Fx]).agrees(substitute(G.series, [hx, hy]))


def test_normalized_multiplicative_is_exact():
    fb = sym_field("beta")
    G = normalize(multiplicative(fb.gen("beta"), 12, fb), 12).law
    assert G.series.terms == {(1, 0): ONE, (0, 1): ONE, (1, 1): -ONE}
    assert G.cap == 12


def test_normal_law_h_is_inverse():
    F = multiplicative(ONE, 8)
    norm = normalize(F, 8)
    assert norm.h.agrees(F.inverse.with_cap(norm.h.cap))
    assert F.mu.agrees(TruncSeries.univariate([ONE] * 9, 8).truncated(F.mu.valid))


def test_normalize_unavailable():
    with pytest.raises(NormalizationUnavailableError):
        normalize(additive(6))


def test_perturbed_law_reports_degree():
    F = parse_fgl("from_log:random", 8)
    bad = perturbed(F, (2, 1), ONE)
    assert not bad.is_valid
    fail = bad.failures[0]
    assert fail.axiom == "associativity"
    assert fail.degree == 4


@settings(max_examples=15)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_from_log_axioms(seed):
    F = from_log_coeffs(random_log_coeffs(seed, 8), 8)
    assert F.is_valid
    assert substitute(F.series, [TruncSeries.var(0, 1, 8), F.inverse]).is_zero()
    G = normalize(F, 8).law
    assert G.is_normal()
    assert all(c == ONE or c == ZERO for c in [G.kappa.coeff((k,)) for k in range(G.kappa.valid + 1)])
