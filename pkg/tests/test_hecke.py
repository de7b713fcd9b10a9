import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formal_hecke.fga import FormalGroupAlgebra
from formal_hecke.fgl import parse_fgl
from formal_hecke.hecke import HeckeAlgebra, Twisted, require_series
from formal_hecke.localized import Localized
from formal_hecke.rootdata import parse_datum
from formal_hecke.scalars import ONE, Q
from formal_hecke.series import TruncSeries

LAWS = ["additive", "multiplicative:beta=2/3", "from_log:c2=1,c3=-1/2,c4=1/3"]


def hecke(datum, law, cap=6):
    A = FormalGroupAlgebra(parse_datum(datum), parse_fgl(law, cap), cap)
    return A, HeckeAlgebra(A)


def loc(A, u):
    return Localized.series(A, u)


@st.composite
def small_series(draw, n, cap):
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        e = tuple(draw(st.integers(0, 2)) for _ in range(n))
        terms[e] = Q(draw(st.integers(-2, 2)) or 1)
    return TruncSeries(n, cap, terms)


# the twisted product ----------------------------------------------------------------


def test_delta_products():
    A, H = hecke("A2:sc", "multiplicative:beta=2/3")
    R = A.datum
    for w in range(R.order):
        for v in range(R.order):
            assert (H.delta(w) * H.delta(v)).agrees(H.delta(R.mult(w, v)))
    s = R.simple_reflection(0)
    lam = (1, -1)
    got = H.delta(s) * H.scalar(A.x_of(lam)) * H.delta(s)
    assert got.agrees(H.scalar(A.x_of(R.act_lattice(s, lam))))


@pytest.mark.parametrize("law", LAWS)
def test_inverse_root_square(law):
    A, H = hecke("A1:sc", law)
    r = A.datum.simple_index(0)
    s = A.datum.simple_reflection(0)
    e = Twisted(A, {s: Localized.over_root(A, r)})
    want = Localized.over_root(A, r) * Localized.over_root(A, A.datum.negate(r))
    assert (e * e).agrees(Twisted(A, {0: want}))


# Demazure elements ------------------------------------------------------------------


@pytest.mark.parametrize("law", LAWS)
def test_demazure_element_relations(law):
    A, H = hecke("A2:sc", law)
    R = A.datum
    q = A.var(0) ** 2 + A.var(1) + A.one()
    for i in range(R.rank):
        r = R.simple_index(i)
        X = H.Xi(i)
        assert (X * X).agrees(X.lmul(A.kappa_root(r)))
        lhs = X.lmul(q)
        rhs = X.rmul(A.weyl_act(R.simple_reflection(i), q)) + H.scalar(A.demazure(r, q))
        assert lhs.agrees(rhs)


def test_braid_words_for_polynomial_laws():
    for law in ("additive", "multiplicative:beta=2/3"):
        A, H = hecke("A2:sc", law)
        assert H.word((0, 1, 0), "X").agrees(H.word((1, 0, 1), "X"))
        assert H.word((0, 1, 0), "T").agrees(H.word((1, 0, 1), "T"))
    A, H = hecke("A2:sc", LAWS[2])
    assert not H.word((0, 1, 0), "X").agrees(H.word((1, 0, 1), "X"))


# Hecke elements -----------------------------------------------------------------------------


@pytest.mark.parametrize("law", LAWS + ["lorentz:beta=1"])
def test_quadratic_relation(law):
    A, H = hecke("A2:sc", law)
    c = H.coeffs
    for i in range(2):
        T = H.Ti(i)
        if c.kappa_class == "kappa_zero":
            assert (T * T).agrees(H.delta(0))
        else:
            assert (T * T).agrees(T.scale(c.theta) + H.delta(0))


@pytest.mark.parametrize("law", LAWS)
def test_conjugation(law):
    A, H = hecke("B2:sc", law)
    R = A.datum
    for w in range(R.order):
        for i in range(R.rank):
            got = H.delta(w) * H.Ti(i) * H.delta(R.inverse(w))
            assert got.agrees(H.T(R.act_root(w, R.simple_index(i))))


@settings(max_examples=10)
@pytest.mark.parametrize("law", LAWS)
@given(data=st.data())
def test_action_is_tau(law, data):
    A, H = hecke("A2:sc", law)
    u = data.draw(small_series(2, 6))
    c = H.coeffs
    for i in range(2):
        r = A.datum.simple_index(i)
        assert H.Ti(i).act_on(A.one()).agrees(Localized.scalar(A, c.varpi))
        got = H.Ti(i).act_on(u)
        assert got.is_pole_free()
        assert got.agrees(loc(A, A.tau(r, u)))
    w = data.draw(st.integers(0, 5))
    assert H.delta(w).act_on(u).agrees(loc(A, A.weyl_act(w, u)))


# bases --------------------------------------------------------------------------------------


@pytest.mark.parametrize("law", LAWS)
def test_expansion_examples(law):
    A, H = hecke("A2:sc", law)
    R = A.datum
    ex = H.expand(H.delta(0))
    assert set(ex.coeffs) == {0}
    assert ex.coeffs[0].agrees(Localized.scalar(A, ONE))
    top = H.expand(H.basis(R.longest))
    assert set(top.coeffs) == {R.longest}
    assert top.coeffs[R.longest].agrees(Localized.scalar(A, ONE))
    assert not top.violations


@settings(max_examples=5)
@pytest.mark.parametrize("kind", ["T", "X"])
@given(data=st.data())
def test_expansion_round_trip(kind, data):
    A, H = hecke("A2:sc", "from_log:c2=1,c3=-1/2,c4=1/3")
    coeffs = {}
    for w in range(A.datum.order):
        if data.draw(st.booleans()):
            coeffs[w] = loc(A, data.draw(small_series(2, 6)))
    e = Twisted(A, coeffs)
    ex = H.expand(e, kind)
    assert not ex.violations
    assert H.reassemble(ex.coeffs, kind).agrees(e)


def test_transition_a1():
    A, H = hecke("A1:sc", "multiplicative:beta=2/3")
    c = H.coeffs
    r = A.datum.simple_index(0)
    s = A.datum.simple_reflection(0)
    rows, bad = H.transition()
    assert not bad
    vt = Localized.series(A, A.vartheta(r, A.cap + 1))
    want = Localized.scalar(A, c.varpi) - vt * Localized.over_root(A, r)
    assert rows[s].coeff(s).agrees(want)
    assert rows[0].agrees(H.delta(0))


@pytest.mark.parametrize("law", LAWS)
@pytest.mark.parametrize("datum", ["A2:sc", "B2:sc"])
def test_transition_triangular(datum, law):
    A, H = hecke(datum, law)
    R = A.datum
    c = H.coeffs
    rows, bad = H.transition()
    assert not bad
    for v, B in rows.items():
        for w in B.coeffs:
            assert R.bruhat_leq(w, v)
        d = B.coeff(v)
        # numerator constant term (-eps(vartheta))^l(v), a unit
        assert d.num.constant_term() == (-c.eps_vartheta) ** R.length(v)
        assert d.agrees(H.diagonal_closed_form(v))


def test_braid_defect_m2():
    A, H = hecke("A1xA1:sc", "from_log:c2=1,c3=-1/2,c4=1/3")
    d, ex = H.braid_defect(0, 1)
    assert not d.coeffs
    assert not ex.coeffs


@pytest.mark.parametrize("law", LAWS[1:])
def test_braid_defect_m3(law):
    A, H = hecke("A2:sc", law)
    R = A.datum
    c = H.coeffs
    a1, a2 = R.simple_index(0), R.simple_index(1)
    d, ex = H.braid_defect(0, 1)
    kp = H.kappa_pair(a1, a2, primed=True)
    want = (H.Ti(0) - H.Ti(1)).rmul(kp).scale(c.theta * c.theta)
    assert d.agrees(want)
    for w, q in ex.coeffs.items():
        assert R.length(w) <= 1
        require_series(q, c)


# commuting past series, center --------------------------------------------------------------


@pytest.mark.parametrize("law", LAWS)
def test_commute_past(law):
    A, H = hecke("A2:sc", law)
    R = A.datum
    u = A.var(0)
    phis = H.commute_past((0,), u)
    r = R.simple_index(0)
    assert phis[(0,)].agrees(A.weyl_act(R.simple_reflection(0), u))
    d = A.demazure(r, u)
    assert phis[()].agrees(A.vartheta(r, d.cap) * d)
    assert H.commute_past((), u) == {(): u}
    letters = (0, 1)
    phis = H.commute_past(letters, u)
    got = H.reassemble_commute(letters, phis)
    assert got.agrees(H.word(letters).rmul(u))
    assert phis[(0, 1)].agrees(A.weyl_act(R.element(letters), u))


@pytest.mark.parametrize("datum", ["A1:sc", "A2:sc"])
def test_center(datum):
    A, H = hecke(datum, "additive")
    R = A.datum
    lam = (1,) + (0,) * (R.rank - 1)
    z = H.scalar(A.orbit_sum(lam))
    for i in range(R.rank):
        assert (z * H.Ti(i)).agrees(H.Ti(i) * z)
    xa = A.x_root(R.simple_index(0))
    X = H.scalar(xa)
    comm = X * H.Ti(0) - H.Ti(0) * X
    assert comm.coeffs
    if datum == "A1:sc":
        # q T - T s(q) = vartheta Delta(q) = 2 vartheta with vartheta = 2 xg
        xg = A.field.gen("xg")
        rel = X * H.Ti(0) - H.Ti(0) * H.scalar(-xa)
        assert rel.agrees(H.scalar(A.const(4 * xg)))


def test_comparisons_are_not_vacuous():
    A, H = hecke("B2:sc", "from_log:c2=1,c3=-1/2,c4=1/3")
    T = H.Ti(0)
    assert (T * T).prec >= 4
    assert not (T * T).agrees(H.delta(0))
    X = H.Xi(0)
    assert not (X * X).agrees(X)
    d, ex = H.braid_defect(0, 1)
    assert d.prec >= 3 and d.coeffs
