import io
import json
import subprocess
import sys

import pytest

from formal_hecke.cli import dump_report, load_report, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_verify_multiplicative_exit_zero():
    code, text = run("verify", "--datum", "A2:sc", "--fgl", "multiplicative:beta", "--cap", "6")
    assert code == 0
    assert "FAIL " not in text
    assert "stated degree only" in text


def test_verify_symbolic_b2_thm_hecke_2():
    code, text = run("verify", "--datum", "B2:sc", "--fgl", "from_log:c2,c3", "--cap", "6", "--only", "thm-hecke-2")
    assert code == 0
    assert "PASS    thm-hecke-2" in text


def test_verify_fail_exit_one(monkeypatch):
    # no --fgl string spells an invalid law, so feed the driver a perturbed one
    import formal_hecke.cli as cli
    from formal_hecke.fgl import parse_fgl, perturbed
    from formal_hecke.scalars import ONE
    from formal_hecke.verify import run_suite

    bad = perturbed(parse_fgl("from_log:c2=1", 8), (2, 1), ONE)
    monkeypatch.setattr(cli, "run_suite", lambda spec: run_suite(cli.CheckSpec(spec.datum, bad, 6, spec.statements)))
    code, text = run("verify", "--datum", "A1:sc", "--fgl", "from_log:c2=1", "--only", "fgl-axioms")
    assert code == 1
    assert "FAIL    fgl-axioms" in text
    assert "associativity" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--datum", "A2:sc", "--fgl", "badfgl", "--cap", "6"],
        ["verify", "--datum", "Q7:sc", "--fgl", "additive"],
        ["verify", "--datum", "A2:sc", "--fgl", "additive", "--only", "nope"],
        ["verify", "--fgl", "additive"],
        ["verify", "--datum", "A2:sc", "--fgl", "additive", "--cap", "0"],
        ["show", "nothing", "--fgl", "additive"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_two(argv, capsys):
    code, _ = run(*argv)
    assert code == 2


def test_json_report(tmp_path):
    path = tmp_path / "r.json"
    code, text = run("verify", "--datum", "A2:sc", "--fgl", "additive", "--only", "prop-hecke-2,center",
                     "--json", str(path))
    assert code == 0
    raw = path.read_text()
    report = load_report(raw)
    assert report["schema_version"] == "1"
    assert report["summary"] == {"pass": "2", "fail": "0", "skipped": "0"}
    assert [v["id"] for v in report["verdicts"]] == ["prop-hecke-2", "center"]
    assert set(report["timings"]) == {"prop-hecke-2", "center"}
    assert dump_report(json.loads(raw)) == raw

    def no_floats(x):
        if isinstance(x, float):
            return False
        if isinstance(x, dict):
            return all(no_floats(v) for v in x.values())
        if isinstance(x, list):
            return all(no_floats(v) for v in x)
        return True

    assert no_floats(report)
    with pytest.raises(ValueError):
        load_report(json.dumps({"schema_version": "0"}))


def test_text_output_is_deterministic():
    argv = ("verify", "--datum", "A2:sc", "--fgl", "from_log:random", "--seed", "5", "--only", "dla-3,lem-tau")
    assert run(*argv) == run(*argv)


def test_show_commands():
    assert run("show", "fgl", "--fgl", "multiplicative:beta", "--cap", "4") == (0, "x + y - beta*x*y\n")
    code, text = run("show", "u0", "--datum", "A1:sc", "--fgl", "additive", "--cap", "4")
    assert (code, text) == (0, "x_w1\n")
    code, text = run("show", "transition", "--datum", "A1:sc", "--fgl", "multiplicative:beta", "--cap", "5")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].endswith("e 1")
    assert sum(1 for line in lines if line.strip().startswith("a(")) == 4
    assert "a(e,1) = 0" in text
    code, text = run("show", "kappa", "--fgl", "multiplicative:beta")
    assert "kappa = beta" in text and "kappa_nonzero" in text
    code, text = run("show", "theta", "--fgl", "additive")
    assert "varpi = 1" in text and "eps(vartheta) = 2*xg" in text


def test_list_command():
    code, text = run("list")
    assert code == 0
    assert text.splitlines()[0].startswith("fgl-axioms")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "formal_hecke", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("formal-hecke ")
