import pytest

from formal_hecke.fgl import parse_fgl, perturbed
from formal_hecke.rootdata import parse_datum
from formal_hecke.scalars import ONE
from formal_hecke.verify import (
    STATEMENTS,
    CheckSpec,
    Context,
    Verdict,
    check_statement,
    default_cap,
    run_suite,
    statement_ids,
)


def by_id(verdicts):
    return {v.id: v for v in verdicts}


def test_registry():
    ids = statement_ids()
    assert len(ids) == len(set(ids))
    for sid in ("prop-demazure-4", "thm-hecke-2", "main-basis", "center", "u0", "gram", "normalize-transport"):
        assert sid in STATEMENTS
    R = parse_datum("A2:sc")
    assert default_cap("prop-hecke-2", R) == 6
    assert default_cap("gram", R) == 2 * R.N + 1
    with pytest.raises(KeyError):
        run_suite(CheckSpec("A2:sc", "additive", 6, ["no-such-statement"]))


@pytest.mark.slow
@pytest.mark.parametrize("law", ["additive", "multiplicative:beta"])
@pytest.mark.parametrize("datum", ["A1:sc", "A1xA1:sc", "A2:sc", "B2:sc"])
def test_known_good_fixtures(datum, law):
    verdicts = run_suite(CheckSpec(datum, law))
    fails = [v.line() for v in verdicts if v.status == "fail"]
    assert not fails
    got = by_id(verdicts)
    for sid in ("fgl-axioms", "prop-demazure-1", "prop-demazure-2", "prop-hecke-1", "prop-hecke-2",
                "lem-transition", "main-basis", "commute", "center"):
        assert got[sid].status == "pass", got[sid].line()
    if datum in ("A2:sc", "B2:sc"):
        assert got["word-dependence"].status == "pass"
        assert got["prop-hecke-3"].status == "pass"
    for v in verdicts:
        assert v.status in ("pass", "skipped")
        if v.status == "skipped":
            assert v.reason


def test_hecke_2_branches():
    v = run_suite(CheckSpec("A2:sc", "additive", 6, ["prop-hecke-2"]))[0]
    assert v.status == "pass"
    assert v.witness["branch"] == "T_i^2 = 1"
    v = run_suite(CheckSpec("A2:sc", "multiplicative:beta", 6, ["prop-hecke-2"]))[0]
    assert v.witness["branch"] == "T_i^2 = Theta T_i + 1"


def test_hypothesis_gates():
    v = run_suite(CheckSpec("B2:sc", "additive", 6, ["thm-hecke-2"]))[0]
    assert v.status == "skipped"
    assert "normalization" in v.reason
    v = run_suite(CheckSpec("B2:sc", "additive", None, ["u0"]))[0]
    assert v.status == "skipped"
    assert "torsion index" in v.reason
    v = run_suite(CheckSpec("A2:sc", "additive", 2, ["prop-demazure-7"]))[0]
    assert v.status == "skipped"
    assert "cap" in v.reason


def test_single_statement_examples():
    v = run_suite(CheckSpec("A2:sc", "from_log:random", 6, ["prop-demazure-2", "lemma-fglkey", "braid-coeff-in-ring"]))
    assert [x.status for x in v] == ["pass", "pass", "pass"]
    assert v[0].precision is not None and v[0].precision >= 3
    n = run_suite(CheckSpec("A2:sc", "normalized:multiplicative:beta", 6, ["lemma-fglkey"]))[0]
    assert n.status == "pass"


def test_thm_hecke_2_symbolic():
    v = run_suite(CheckSpec("B2:sc", "from_log:c2,c3", 6, ["thm-hecke-2"]))[0]
    assert v.status == "pass", v.line()


def test_u0_and_gram_witnesses():
    got = by_id(run_suite(CheckSpec("A1:sc", "additive", None, ["u0", "gram"])))
    assert got["u0"].witness["u0"] == "x_w1"
    assert got["gram"].witness["eps_matrix"] == [["2*xg", "0"], ["0", "2*xg"]]
    assert got["gram"].witness["det"] == "4*xg^2"


def test_center_witness():
    v = run_suite(CheckSpec("A1:sc", "additive", 6, ["center"]))[0]
    assert v.status == "pass"
    assert v.witness["noncentral"] is not None
    assert v.witness["z2"].startswith("2*x_w1^2")


def test_word_dependence_expectations():
    for law, obs in (("additive", "equal"), ("multiplicative:beta", "equal"), ("from_log:random", "differ")):
        v = run_suite(CheckSpec("A2:sc", law, 6, ["word-dependence"]))[0]
        assert v.status == "pass"
        assert v.witness["observed"] == obs
    v = run_suite(CheckSpec("A2:sc", "lorentz:beta", 6, ["word-dependence"]))[0]
    assert v.status == "skipped"


def test_determinism():
    spec = CheckSpec("A2:sc", "from_log:random", 6, ["prop-demazure-4", "prop-hecke-5", "commute"], seed=3)
    a = [v.to_dict(timings=False) for v in run_suite(spec)]
    b = [v.to_dict(timings=False) for v in run_suite(spec)]
    assert a == b
    v = run_suite(spec)[0]
    assert Verdict.from_dict(v.to_dict()).to_dict(timings=False) == v.to_dict(timings=False)


@pytest.fixture(scope="module")
def mutant_verdicts():
    law = perturbed(parse_fgl("from_log:random", 14), (2, 1), ONE)
    ids = ["fgl-axioms", "prop-demazure-2", "prop-demazure-4", "prop-hecke-2", "thm-hecke-1", "braid-coeff-in-ring"]
    return by_id(run_suite(CheckSpec("A2:sc", law, 6, ids)))


def test_mutation_is_caught(mutant_verdicts):
    ax = mutant_verdicts["fgl-axioms"]
    assert ax.status == "fail"
    f = ax.witness["failure"]
    assert f["check"] == "associativity"
    assert f["monomial"] and f["lhs"] != f["rhs"]
    downstream = [v for k, v in mutant_verdicts.items() if k != "fgl-axioms" and v.status == "fail"]
    assert downstream
    for v in downstream:
        for key in ("check", "monomial", "lhs", "rhs"):
            assert key in v.witness["failure"]


def test_statuses_are_exclusive():
    ctx = Context("A2:sc", "lorentz:beta", 6)
    for sid in statement_ids():
        if STATEMENTS[sid].default_cap is not None:
            continue
        v = check_statement(sid, ctx)
        assert v.status in ("pass", "fail", "skipped")
        assert (v.status == "skipped") == bool(v.reason)
        assert v.status != "fail", v.line()
