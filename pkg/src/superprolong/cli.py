"""Command-line interface: models, export, derive, verify, bracket.

Exit status: 0 all checks pass, 1 a verification failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .algebra import Workspace, bracket
from .expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS
from .models import BUILTIN_NAMES, ModelError, builtin, export_model, load_model
from .verify import SUITES, derive, run_suite

SEED_ENV = "SUPERPROLONG_SEED"


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def load(args):
    """Built-in name or a path to a model file."""
    name = args.model
    kw = {k: getattr(args, k) for k in ("alpha", "beta", "phi") if getattr(args, k, None) is not None}
    if name in BUILTIN_NAMES:
        return builtin(name, **kw)
    if kw:
        raise UsageError("--alpha/--beta/--phi apply only to jc_generalized")
    if Path(name).is_file():
        return load_model(name, args.seed, args.trials)
    raise UsageError(f"unknown model {name!r}; built-ins: {', '.join(BUILTIN_NAMES)}")


def alias(m, name: str) -> str:
    """Q+ -> Qp, U- -> Um; names already in the model pass through."""
    if name in m.named:
        return name
    if name.endswith("+") or name.endswith("-"):
        cand = name[:-1] + ("p" if name.endswith("+") else "m")
        if cand in m.named:
            return cand
    raise UsageError(f"unknown generator {name!r}; known: {', '.join(m.named)}")


def emit(report, as_json: bool, text: str):
    if as_json:
        print(json.dumps(report, indent=1, sort_keys=True, default=str))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def cmd_models(args) -> int:
    for name in BUILTIN_NAMES:
        print(name)
    return 0


def cmd_export(args) -> int:
    m = load(args)
    text = export_model(m)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_derive(args) -> int:
    m = load(args)
    try:
        det = derive(m, args.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    eqs = det.listing().splitlines()
    if args.json:
        print(det.to_json())
    else:
        print(f"{m.name}: {len(det)} determining equations")
        for e in eqs:
            print(f"  {e} = 0")
    return 0


def _line(ok: bool, text: str) -> str:
    return f"{'PASS' if ok else 'FAIL'}  {text}"


def _text_report(rep: dict) -> list:
    suite = rep.get("suite")
    out = []
    if suite == "all":
        for part in rep["suites"].values():
            out += _text_report(part)
        return out
    if suite == "algebra":
        for t in rep["tables"]:
            s = t["summary"]
            out.append(_line(s["ok"], f"table {t['table']}: {s['match']}/{s['cells']} cells match"))
            for c in t["cells"]:
                if c["status"] != "match":
                    tag = "suspect" if c.get("suspect") else c["status"]
                    out.append(f"      [{c['i']},{c['j']}] printed {c['expected']}; computed {c['computed']} ({tag})")
        for r in rep["relations"]:
            out.append(_relation_line(r))
        bad = [s["name"] for s in rep["symmetries"] if not s["ok"]]
        out.append(_line(not bad, f"{len(rep['symmetries'])} symmetries map solutions to solutions"
                         + (f"; failing {', '.join(bad)}" if bad else "")))
        for c in rep["closure"]["closures"]:
            s = c["summary"]
            state = "closed" if s["closed"] else f"not closed ({s['not_in_span']} brackets leave the span)"
            out.append(_line(c["ok"], f"closure {c['name']}: {state}, "
                             f"{s['jacobi_triples']} super-Jacobi triples"))
    elif suite == "supercharges":
        for r in rep["relations"]:
            out.append(_relation_line(r))
    elif suite == "ansatz":
        if rep.get("skipped"):
            out.append("SKIP  no ansatz for this model")
        else:
            out.append(_line(rep["xi_jet_equations"] > 0,
                             f"{rep['equations']} determining equations; {rep['xi_jet_equations']} force xi "
                             "independent of the dependent variables"))
            for r in rep["results"]:
                exp = "" if r["expect_pass"] else " (expected to fail)"
                out.append(_line(r["ok"], f"ansatz {r['name']}: {'satisfies' if r['passed'] else 'violates'} "
                                 f"the system, {r['independent_constants']}/{r['constants']} independent "
                                 f"constants{exp}"))
    elif suite == "solutions":
        for s in rep["solutions"]:
            out.append(_line(s["ok"], f"solution {s['label']} solves the equation"))
        worst = max((g["max_residual"] for g in rep["generators"]), default=0.0)
        bad = [g["generator"] for g in rep["generators"] if not g["ok"]]
        out.append(_line(not bad, f"{len(rep['generators'])} generators, max residual {worst:.2e}"
                         + (f"; failing {', '.join(bad)}" if bad else "")))
    elif suite == "finite":
        if not rep["transformations"]:
            out.append("SKIP  no finite transformations for this model")
        for t in rep["transformations"]:
            out.append(_line(t["ok"], f"{t['transformation']}: residual {t['residual']:.1e} "
                             f"(floor {t['floor']:.1e}), group law {t['group_law']:.1e}, "
                             f"vector field {t['vector_field']:.1e}"))
    return out


def _relation_line(r: dict) -> str:
    sub = f" [{r['substitution']}]" if r.get("substitution") else ""
    mode = " on shell" if r["mode"] == "on_shell" else ""
    if r["kind"] == "equal":
        what = "holds" if r["passed"] else "fails"
    elif r["kind"] == "not_in_span":
        what = "not in span" if r["passed"] else f"in span: {r.get('computed')}"
    else:
        what = f"= {r.get('computed')}"
    tail = "" if r["expect_pass"] else " (printed form, expected to fail)"
    return _line(r["ok"], f"{r['name']}{mode}{sub}: {what}{tail}")


def cmd_verify(args) -> int:
    m = load(args)
    rep = run_suite(m, args.suite, args.seed, args.trials, args.alpha_beta_shift)
    lines = _text_report(rep)
    warnings = rep["summary"].get("warnings", [])
    lines += [f"WARN  {w}" for w in warnings]
    lines.append(f"{m.name} {args.suite}: {'PASS' if rep['summary']['ok'] else 'FAIL'}")
    emit(rep, args.json, "\n".join(lines))
    return 0 if rep["summary"]["ok"] else 1


def _bracket_basis(m, a: str, b: str):
    for t in m.tables:
        if a in t.rows + t.cols and b in t.rows + t.cols:
            names = list(dict.fromkeys(t.rows + t.cols + [n for c in t.cells for n in c.expected]))
            kind = None if t.bracket == "graded" else t.bracket
            return names, t.mode, kind, f"table {t.name}"
    bb = m.doc.get("bracket_basis")
    if bb:
        return list(bb["names"]), bb.get("mode", "off_shell"), None, "declared basis"
    return [g.name for g in m.generators], "off_shell", None, "generators"


def cmd_bracket(args) -> int:
    m = load(args)
    a, b = alias(m, args.a), alias(m, args.b)
    names, mode, kind, source = _bracket_basis(m, a, b)
    if args.mode:
        mode = args.mode
    ws = Workspace(m, args.substitution)
    k, op = bracket(ws.gens[a], ws.gens[b], kind)
    exp = ws.expand(op, names, mode, args.seed, args.trials)
    rep = {"model": m.name, "a": a, "b": b, "kind": k, "mode": mode, "basis": names, "basis_source": source,
           "status": exp.status, "expansion": exp.combination(),
           "coefficients": {n: t for n, t in exp.display.items() if t != "0"}}
    if exp.status == "not_in_span":
        rep["residual"] = {"relative": exp.span_residual, "parameters": exp.witness}
    text = f"{k} = {exp.combination()}"
    if exp.status == "not_in_span":
        text = f"{k}: not in span of {source} (relative residual {exp.span_residual:.2e})"
    text += f"\n  basis: {source}, {'on shell' if mode == 'on_shell' else 'off shell'}"
    emit(rep, args.json, text)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        # accepted before or after the command; the subcommand copy must not reset defaults
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--seed", type=int, default=d(None),
                            help=f"oracle seed (default ${SEED_ENV} or {DEFAULT_SEED})")
        parser.add_argument("--trials", type=int, default=d(DEFAULT_TRIALS), help="oracle trials (default 20)")
        parser.add_argument("--json", action="store_true", default=d(False), help="emit a JSON report")

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, True)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("model", help="built-in model name or model file path")
    model.add_argument("--alpha", help="jc_generalized: value of alpha (default symbolic)")
    model.add_argument("--beta", help="jc_generalized: value of beta (default symbolic)")
    model.add_argument("--phi", help="jc_generalized: phase phi (default 0)")

    p = argparse.ArgumentParser(prog="superprolong", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    global_flags(p, False)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("models", parents=[common], help="list built-in models")

    e = sub.add_parser("export", parents=[common, model], help="write a model document")
    e.add_argument("-o", "--output", help="output file (default stdout)")

    d = sub.add_parser("derive", parents=[common, model], help="list the determining equations")
    d.add_argument("--order", type=int, default=None, help="prolongation order (default: equation order)")

    v = sub.add_parser("verify", parents=[common, model], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--alpha-beta-shift", nargs="?", const="printed", choices=("printed", "derived"),
                   default=None, help="impose the alpha+beta shift with physical kappa "
                   "(printed: -eE/(8M^2B), derived: -eE^2/(8M^2B))")

    b = sub.add_parser("bracket", parents=[common, model], help="expand a graded bracket in the basis")
    b.add_argument("a")
    b.add_argument("b")
    b.add_argument("--mode", choices=("on_shell", "off_shell"), help="override the reduction mode")
    b.add_argument("--substitution", help="named parameter substitution, e.g. physical")
    return p


COMMANDS = {"models": cmd_models, "export": cmd_export, "derive": cmd_derive, "verify": cmd_verify,
            "bracket": cmd_bracket}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.seed is None:
            args.seed = default_seed()
        return COMMANDS[args.command](args)
    except (UsageError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
