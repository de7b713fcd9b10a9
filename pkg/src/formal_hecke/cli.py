"""Command-line driver: ``formal-hecke verify`` and ``formal-hecke show``.

Exit codes: 0 when no statement fails, 1 when one does, 2 for usage errors
(bad flags, unknown datum, law or statement id).
"""

import argparse
import json
import sys

from . import __version__
from .errors import FormalHeckeError, ParseError
from .fga import FormalGroupAlgebra
from .hecke import HeckeAlgebra
from .rootdata import parse_datum
from .verify import STATEMENTS, CheckSpec, Context, law_at, run_suite, statement_ids

SCHEMA_VERSION = "1"
POLYNOMIAL_LAWS = ("additive", "multiplicative")


class UsageError(Exception):
    pass


# reports ---------------------------------------------------------------------------


def _exact(value):
    """Numbers as strings, recursively, so the report never holds floats."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, float)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_exact(v) for v in value]
    return value if isinstance(value, str) else str(value)


def build_report(spec, verdicts, timings=True):
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "formal-hecke",
        "version": __version__,
        "spec": {
            "datum": str(spec.datum),
            "fgl": str(spec.fgl),
            "cap": spec.cap,
            "only": spec.statements,
            "seed": spec.seed,
        },
        "verdicts": [v.to_dict(timings=False) for v in verdicts],
        "summary": _summary(verdicts),
    }
    if timings:
        report["timings"] = {v.id: f"{v.seconds:.3f}" for v in verdicts}
    return _exact(report)


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def load_report(text):
    report = json.loads(text)
    if report.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema {report.get('schema_version')!r}")
    return report


def _summary(verdicts):
    out = {"pass": 0, "fail": 0, "skipped": 0}
    for v in verdicts:
        out[v.status] += 1
    return out


def render_text(spec, verdicts):
    cap = "default" if spec.cap is None else spec.cap
    lines = [f"formal-hecke verify  datum={spec.datum}  fgl={spec.fgl}  cap={cap}  seed={spec.seed}"]
    lines += [v.line() for v in verdicts]
    s = _summary(verdicts)
    lines.append(f"{s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped")
    lines.append("pass certifies agreement of every coefficient through the stated degree only")
    return "\n".join(lines) + "\n"


# commands ----------------------------------------------------------------------------


def _check_datum(text):
    try:
        return parse_datum(text)
    except FormalHeckeError as exc:
        raise UsageError(f"bad --datum {text!r}: {exc}") from None


def _check_only(text):
    if not text:
        return None
    ids = [s.strip() for s in text.split(",") if s.strip()]
    known = set(statement_ids())
    bad = [s for s in ids if s not in known]
    if bad:
        raise UsageError(f"unknown statement ids: {', '.join(bad)} (see 'formal-hecke list')")
    return ids


def _law(text, cap, seed):
    try:
        return law_at(text, cap, seed)
    except ParseError as exc:
        raise UsageError(f"bad --fgl {text!r}: {exc}") from None


def cmd_verify(args, out):
    _check_datum(args.datum)
    only = _check_only(args.only)
    _law(args.fgl, args.cap or 4, args.seed)  # reject unknown laws before running anything
    spec = CheckSpec(args.datum, args.fgl, args.cap, only, args.seed)
    verdicts = run_suite(spec)
    out.write(render_text(spec, verdicts))
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dump_report(build_report(spec, verdicts)))
    return 1 if any(v.status == "fail" for v in verdicts) else 0


def _show_fgl(args, out):
    law = _law(args.fgl, args.cap or 6, args.seed)
    exact = law.name in POLYNOMIAL_LAWS
    out.write(law.series.to_text(["x", "y"], big_o=not exact) + "\n")


def _show_kappa(args, out):
    law = _law(args.fgl, args.cap or 6, args.seed)
    out.write(f"kappa = {law.kappa.to_text(['x'])}\n")
    out.write(f"class = {law.kappa_class}\n")


def _context(args, cap):
    R = _check_datum(args.datum)
    return Context(R, args.fgl, cap, args.seed)


def _show_theta(args, out):
    cap = args.cap or 6
    _law(args.fgl, cap, args.seed)
    ctx = _context(args, cap)
    A = ctx.alg
    c = A.hecke_coeffs()
    out.write(f"Theta = {c.theta}\n")
    out.write(f"varpi = {c.varpi}\n")
    out.write(f"eps(vartheta) = {c.eps_vartheta}\n")
    R = A.datum
    for i in range(R.rank):
        r = R.simple_index(i)
        out.write(f"vartheta_{R.root_label(r)} = {A.text(A.vartheta(r))}\n")


def _show_u0(args, out):
    R = _check_datum(args.datum)
    cap = args.cap or 2 * R.N + 1
    _law(args.fgl, cap, args.seed)
    A = FormalGroupAlgebra(R, law_at(args.fgl, cap, args.seed), cap)
    out.write(A.text(A.find_u0(), big_o=False) + "\n")


def _show_transition(args, out):
    cap = args.cap or 6
    _law(args.fgl, cap, args.seed)
    ctx = _context(args, cap)
    H = HeckeAlgebra(ctx.alg)
    R = ctx.R
    rows, _ = H.transition("T")
    order = R.by_length()
    label = lambda w: "".join(str(i + 1) for i in R.word(w)) or "e"  # noqa: E731
    out.write("rows T_{I_v}, columns delta_w; w in order " + " ".join(label(w) for w in order) + "\n")
    for v in order:
        out.write(f"v = {label(v)}\n")
        for w in order:
            out.write(f"  a({label(v)},{label(w)}) = {rows[v].coeff(w).text()}\n")


SHOW = {
    "fgl": _show_fgl,
    "kappa": _show_kappa,
    "theta": _show_theta,
    "u0": _show_u0,
    "transition": _show_transition,
}


def cmd_show(args, out):
    SHOW[args.what](args, out)
    return 0


def cmd_list(args, out):
    for sid in statement_ids():
        st = STATEMENTS[sid]
        out.write(f"{sid:22} {st.title}\n")
    return 0


# parser ------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="formal-hecke", description="Check formal affine Hecke algebra relations.")
    p.add_argument("--version", action="version", version=f"formal-hecke {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, datum_default="A1:sc"):
        sp.add_argument("--datum", default=datum_default, help="root datum, e.g. A2:sc, B2:ad, A1xA1:sc")
        sp.add_argument("--fgl", required=True, help="law, e.g. additive, multiplicative:beta, from_log:c2,c3")
        sp.add_argument("--cap", type=_positive, default=None, help="truncation degree")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized inputs")

    v = sub.add_parser("verify", help="run the statement suite")
    common(v, datum_default=None)
    v.add_argument("--only", default=None, help="comma-separated statement ids")
    v.add_argument("--json", default=None, help="also write a JSON report here")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("show", help="print a computed object")
    s.add_argument("what", choices=sorted(SHOW))
    common(s)
    s.set_defaults(func=cmd_show)

    ls = sub.add_parser("list", help="list statement ids")
    ls.set_defaults(func=cmd_list)
    return p


def _positive(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("cap must be at least 1")
    return k


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "verify" and args.datum is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("formal-hecke verify: error: --datum is required\n")
        return 2
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"formal-hecke: error: {exc}\n")
        return 2
    except FormalHeckeError as exc:
        sys.stderr.write(f"formal-hecke: error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
