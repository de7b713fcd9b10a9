import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from formal_hecke.errors import ParseError, UnsupportedDatumError
from formal_hecke.rootdata import RootDatum, parse_datum, torsion_info

DATA = ["A1:sc", "A1:ad", "A2:sc", "A2:ad", "A1xA1:sc", "B2:sc", "B2:ad", "C2:sc", "A3:sc", "B3:sc", "C3:ad", "D4:sc", "G2:sc"]
ORDERS = {"A1": 2, "A2": 6, "A1xA1": 4, "B2": 8, "C2": 8, "A3": 24, "B3": 48, "C3": 48, "D4": 192, "G2": 12}


def word_str(R, w):
    return "".join(str(i + 1) for i in R.word(w)) or "e"


def brute_weyl_order(R):
    """Closure of the reflection matrices, without the package's enumeration."""
    n = R.rank
    gens = []
    for i in range(n):
        a = R.simple[i]
        cols = []
        for k in range(n):
            e = [int(j == k) for j in range(n)]
            c = R.pair(i, e)
            cols.append(tuple(e[j] - c * a[j] for j in range(n)))
        gens.append(tuple(tuple(cols[k][j] for k in range(n)) for j in range(n)))
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident}
    todo = [ident]
    while todo:
        M = todo.pop()
        for g in gens:
            P = tuple(tuple(sum(M[i][k] * g[k][j] for k in range(n)) for j in range(n)) for i in range(n))
            if P not in seen:
                seen.add(P)
                todo.append(P)
    return len(seen)


@pytest.mark.parametrize("text", DATA)
def test_datum_structure(text):
    R = parse_datum(text)
    name = text.split(":")[0]
    assert R.order == ORDERS[name] == brute_weyl_order(R)
    assert R.N == R.npos == R.length(R.longest)
    for r in R.roots:
        assert all(c >= 0 for c in r) or all(c <= 0 for c in r)
    for w in range(R.order):
        assert R.element(R.word(w)) == w
        assert R.is_reduced(R.word(w))
        assert len(R.inversions(w)) == R.length(w)
        assert sorted(R.act_root(w, r) for r in range(len(R.roots))) == list(range(len(R.roots)))
    for r in range(len(R.roots)):
        s = R.reflection(r)
        assert R.mult(s, s) == 0
        assert R.act_root(s, r) == R.negate(r)
    assert R.word(0) == ()


def test_a2_examples():
    R = parse_datum("A2:sc")
    assert (R.npos, R.order, R.N) == (3, 6, 3)
    assert [word_str(R, w) for w in R.by_length()] == ["e", "1", "2", "12", "21", "121"]
    s1, s2 = R.element((0,)), R.element((1,))
    assert R.bruhat_leq(s1, R.element((0, 1, 0)))
    assert not R.bruhat_leq(s1, s2)
    assert R.m[0][1] == 3


def test_a1_lattice():
    R = parse_datum("A1:sc")
    assert R.root_vector(R.simple_index(0)) == (2,)
    assert parse_datum("A1:ad").root_vector(0) == (1,)


def test_b2_examples():
    R = parse_datum("B2:sc")
    assert R.order == 8
    assert word_str(R, R.longest) == "1212"
    assert R.m[0][1] == R.m[1][0] == 4
    assert parse_datum("A1xA1:sc").m[0][1] == 2
    assert parse_datum("G2:sc").m[0][1] == 6


@pytest.mark.parametrize("text", ["A2:sc", "B2:sc", "A3:sc"])
def test_bruhat_partial_order(text):
    R = parse_datum(text)
    W = range(R.order)
    for v in W:
        assert R.bruhat_leq(0, v)
        assert R.bruhat_leq(v, R.longest)
        assert R.bruhat_leq(v, v)
    for u, v in itertools.product(W, W):
        if u != v and R.bruhat_leq(u, v):
            assert not R.bruhat_leq(v, u)
            assert R.length(u) < R.length(v)


def test_torsion_table():
    assert torsion_info("A", 3).order == 4
    assert torsion_info("A", 3).torsion_primes == ()
    assert torsion_info("B", 3).torsion_primes == (2,)
    assert torsion_info("C", 3).torsion_primes == ()
    assert torsion_info("D", 4).order == 4
    assert torsion_info("E", 8).torsion_primes == (2, 3, 5)
    assert parse_datum("A2:sc").cartan_det() == 3
    with pytest.raises(UnsupportedDatumError):
        torsion_info("H", 3)


def test_parse_errors():
    for bad in ("X2:sc", "A9:sc", "A2:foo", "A:x:sc", "a:b:c:d"):
        with pytest.raises((ParseError, UnsupportedDatumError)):
            parse_datum(bad)


@given(st.sampled_from(["A2:sc", "B2:ad", "A3:sc", "C3:sc"]), st.data())
def test_reflection_formula(text, data):
    R = parse_datum(text)
    lam = tuple(data.draw(st.integers(-3, 3)) for _ in range(R.rank))
    for i in range(R.rank):
        # s_i(lam) = lam - <alpha_i^vee, lam> alpha_i
        want = tuple(l - R.pair(i, lam) * a for l, a in zip(lam, R.simple[i]))
        assert R.act_lattice(R.simple_reflection(i), lam) == want


@given(st.sampled_from(["A2:sc", "B2:sc", "A3:ad"]), st.data())
def test_group_laws(text, data):
    R = RootDatum(*{"A2:sc": ("A", 2), "B2:sc": ("B", 2), "A3:ad": ("A", 3)}[text], text.split(":")[1])
    u, v, w = (data.draw(st.integers(0, R.order - 1)) for _ in range(3))
    assert R.mult(R.mult(u, v), w) == R.mult(u, R.mult(v, w))
    assert R.mult(u, R.inverse(u)) == 0
    assert R.length(R.inverse(u)) == R.length(u)
    assert R.length(R.mult(u, v)) <= R.length(u) + R.length(v)
