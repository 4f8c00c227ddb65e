"""Structure constants: basis expansion, table verification, closure and relations.

Coefficients of an expansion are constants in the coordinates that may
depend on the model parameters.  They are found numerically, fitted to a
small dictionary of parameter monomials, and the symbolic residual is then
gated by the zero oracle.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .expr import core
from .expr.core import Expr, FuncApp, Jet, Sym
from .expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_DOMAINS, Domains, Evaluator, is_zero, sample_env
from .expr.parse import ParseError, parse, parse_ast
from .operator import (GradedGenerator, MatrixDiffOp, anticommutator, bracket_kind, commutator, compose,
                       eval_node, is_zero_op, on_shell, scalar_op)
from .models.spec import BASE_DICTIONARY, ModelError, ModelSpec, Relation, StructureTable, substitute_op

PARAM_SAMPLES = 8
SPAN_TOL = 1e-7
FIT_TOL = 1e-7
SHIFTS = {"printed": "printed_shift", "derived": "derived_shift"}
SUPERCHARGE_GROUPS = ("supercharges", "susy", "standard", "blocks")


# ---------------------------------------------------------------- expansion


@dataclass
class BasisExpansion:
    """A = sum c_k G_k + residual.

    status "ok": residual passed the oracle; "not_in_span": no constant
    combination reproduces A numerically; "fit_failed": A is numerically in
    the span but a coefficient did not match the monomial dictionary.
    """

    status: str
    coefficients: dict = field(default_factory=dict)
    display: dict = field(default_factory=dict)
    residual: MatrixDiffOp | None = None
    span_residual: float = 0.0
    numeric: dict = field(default_factory=dict)
    witness: object = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def combination(self) -> str:
        if self.status == "not_in_span":
            return f"not in span (relative residual {self.span_residual:.2e})"
        parts = []
        for name, text in self.display.items():
            if text == "0":
                continue
            if text == "1":
                parts.append(name)
            elif text == "-1":
                parts.append(f"-{name}")
            else:
                parts.append(f"{text}*{name}")
        return _join(parts)


def _join(parts: list) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _support(ops) -> list:
    keys = set()
    for op in ops:
        for r, c, mi, _ in op.items():
            keys.add((r, c, mi))
    return sorted(keys)


def _coeff(op: MatrixDiffOp, key) -> Expr:
    r, c, mi = key
    return op.entries[r][c].get(mi, core.ZERO)


def _is_param(a) -> bool:
    return isinstance(a, Sym) and a.kind != "coord"


def _sample(atoms, seed: int, P: int, R: int, domains: Domains):
    """Parameters drawn P times, each repeated over R coordinate points."""
    rng = np.random.default_rng(seed)
    params = [a for a in atoms if _is_param(a)]
    coords = [a for a in atoms if not _is_param(a)]
    penv = sample_env(params, rng, P, domains)
    env = {a: np.repeat(v, R) for a, v in penv.items()}
    env.update(sample_env(coords, rng, P * R, domains))
    return penv, env


class Dictionary:
    """Candidate parameter monomials with display text."""

    def __init__(self, entries):
        self.entries = [("1", core.ONE)] + list(entries)

    @classmethod
    def for_model(cls, m: ModelSpec | None) -> "Dictionary":
        texts = []
        if m is not None:
            texts += m.doc.get("dictionary", [])
        texts += BASE_DICTIONARY
        base = []
        for text in dict.fromkeys(texts):
            try:
                base.append((text, parse(text, m.ctx)))
            except (ParseError, AttributeError):
                continue
        out = list(base)
        out += [(f"1/({t})" if _compound(t) else f"1/{t}", 1 / E) for t, E in base]
        out += [(f"({t})^2" if _compound(t) else f"{t}^2", E * E) for t, E in base]
        return cls(out)


def _compound_sum(text: str) -> bool:
    return "+" in text or "-" in text or "(" in text


def _compound(text: str) -> bool:
    return any(ch in text for ch in "+-*/^")


def _rational(x: float):
    fr = Fraction(x).limit_denominator(200)
    if abs(float(fr) - x) <= FIT_TOL * (1 + abs(x)):
        return fr
    return None


_SURDS = [(1, None), (2, core.sqrt(Expr.const(2))), (3, core.sqrt(Expr.const(3)))]


def _real_constant(x: float):
    """Return (Expr, text) for x as q or q*sqrt(2) or q*sqrt(3)."""
    if abs(x) < FIT_TOL:
        return core.ZERO, "0"
    for base, surd in _SURDS:
        fr = _rational(x / math.sqrt(base))
        if fr is None:
            continue
        q = Expr.const(fr)
        if surd is None:
            return q, _qtext(fr)
        return q * surd, (f"sqrt({base})" if fr == 1 else f"{_qtext(fr)}*sqrt({base})")
    return None


def _qtext(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def _complex_constant(z: complex):
    re = _real_constant(z.real)
    im = _real_constant(z.imag)
    if re is None or im is None:
        return None
    E = re[0] + core.I * im[0]
    if im[1] == "0":
        return E, re[1]
    itext = "i" if im[1] == "1" else "-i" if im[1] == "-1" else f"{im[1]}*i"
    if re[1] == "0":
        return E, itext
    return E, f"({re[1]} + {itext})".replace("+ -", "- ")


def _times(q: str, text: str) -> str:
    if text == "1":
        return q
    if text.startswith("1/") and re.fullmatch(r"-?\d+(/\d+)?", q):
        # 1/2 times 1/w reads 1/(2*w)
        num, _, den = q.partition("/")
        rest = text[2:]
        if not den:
            return f"{num}/{rest}"
        inner = rest[1:-1] if rest.startswith("(") and not _compound_sum(rest[1:-1]) else rest
        return f"{num}/({den}*{inner})"
    wrapped = f"({text})" if "+" in text or "-" in text[1:] else text
    if q == "1":
        return wrapped
    if q == "-1":
        return f"-{wrapped}"
    return f"{q}*{wrapped}"


def fit_constant(vals: np.ndarray, penv: dict, dictionary: Dictionary, ref: float):
    """Fit parameter samples of one coefficient; returns (Expr, text) or None."""
    if np.max(np.abs(vals)) <= FIT_TOL * (1 + ref):
        return core.ZERO, "0"
    n = len(vals)
    for text, E in dictionary.entries:
        if not E.free <= set(penv):
            continue
        ev = Evaluator(penv, n)
        with np.errstate(all="ignore"):
            dv, _ = ev.expr(E)
        if not np.all(np.isfinite(dv)) or np.min(np.abs(dv)) < 1e-12:
            continue
        ratio = vals / dv
        q = complex(np.mean(ratio))
        if np.max(np.abs(ratio - q)) > FIT_TOL * (1 + abs(q)):
            continue
        const = _complex_constant(q)
        if const is not None:
            return const[0] * E, _times(const[1], text)
    return _fit_laurent(vals, penv)


def _fit_laurent(vals: np.ndarray, penv: dict):
    """q * prod p^e with half-integer e; complex pairs enter as kappa^a kappabar^b."""
    real = [a for a in sorted(penv, key=lambda s: s.key) if not a.conj_name]
    pairs = sorted({min(a, a.partner(), key=lambda s: s.name) for a in penv if a.conj_name}, key=lambda s: s.key)
    if not real and not pairs:
        return None
    logs = np.column_stack([np.ones(len(vals))] + [np.log(np.abs(penv[a])) for a in real])
    grid = list(itertools.product(range(-2, 3), repeat=2 * len(pairs))) if len(pairs) <= 1 else [()]
    for exps in grid:
        cvals = vals.copy()
        cplx = core.ONE
        for k, a in enumerate(pairs):
            ea, eb = exps[2 * k], exps[2 * k + 1]
            cvals = cvals / (penv[a] ** ea * penv[a.partner()] ** eb)
            cplx = cplx * Expr.atom(a) ** ea * Expr.atom(a.partner()) ** eb
        if np.min(np.abs(cvals)) < 1e-14:
            continue
        sol, *_ = np.linalg.lstsq(logs, np.log(np.abs(cvals)), rcond=None)
        halves = [round(2 * e) / 2 for e in sol[1:]]
        mono = np.ones(len(vals), dtype=complex)
        E = cplx
        for a, e in zip(real, halves):
            mono = mono * np.abs(penv[a]) ** e
            E = E * _power(a, e)
        ratio = cvals / mono
        q = complex(np.mean(ratio))
        if np.max(np.abs(ratio - q)) > FIT_TOL * (1 + abs(q)):
            continue
        const = _complex_constant(q)
        if const is not None:
            full = const[0] * E
            return full, core.to_str(full)
    return None


def _power(a: Sym, e: float) -> Expr:
    whole = math.floor(e)
    out = Expr.atom(a) ** whole if whole else core.ONE
    if e != whole:
        out = out * core.sqrt(Expr.atom(a))
    return out


def expand_in_basis(A: MatrixDiffOp, basis: list, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                    domains: Domains = DEFAULT_DOMAINS, dictionary: Dictionary | None = None,
                    names: list | None = None) -> BasisExpansion:
    """Expand A in a list of GradedGenerator or (name, op) pairs."""
    if not basis:
        raise ValueError("basis must be nonempty")
    pairs = [(g.name, g.op) if isinstance(g, GradedGenerator) else tuple(g) for g in basis]
    if names:
        pairs = [(n, op) for n, (_, op) in zip(names, pairs)]
    dictionary = dictionary or Dictionary([])
    K = len(pairs)
    if A.is_exact_zero():
        return BasisExpansion("ok", {n: core.ZERO for n, _ in pairs}, {n: "0" for n, _ in pairs},
                              MatrixDiffOp.zero(A.n))
    keys = _support([A] + [op for _, op in pairs])
    cols = [[_coeff(op, k) for k in keys] for _, op in pairs]
    target = [_coeff(A, k) for k in keys]
    atoms = set()
    for E in target + [e for col in cols for e in col]:
        if any(isinstance(a, (FuncApp, Jet)) for a in E.atoms()):
            raise ValueError("operator coefficients must not contain jets or unknown functions")
        atoms |= E.free
    P, R = PARAM_SAMPLES, max(2 * K, 8)
    penv, env = _sample(atoms, seed, P, R, domains)
    ev = Evaluator(env, P * R)
    with np.errstate(all="ignore"):
        b = np.concatenate([ev.expr(E)[0] for E in target])
        Mcols = [np.concatenate([ev.expr(E)[0] for E in col]) for col in cols]
    Mat = np.column_stack(Mcols)
    rowp = np.tile(np.repeat(np.arange(P), R), len(keys))
    good = np.isfinite(b) & np.all(np.isfinite(Mat), axis=1)
    coeffs = np.zeros((P, K), dtype=complex)
    worst = 0.0
    for p in range(P):
        sel = good & (rowp == p)
        Mp, bp = Mat[sel], b[sel]
        c, *_ = np.linalg.lstsq(Mp, bp, rcond=None)
        scale = np.linalg.norm(bp) + 1e-300
        worst = max(worst, float(np.linalg.norm(Mp @ c - bp) / scale))
        coeffs[p] = c
    if worst > SPAN_TOL:
        wit = {a.name: complex(v[0]) for a, v in sorted(penv.items(), key=lambda kv: kv[0].key)}
        return BasisExpansion("not_in_span", residual=A, span_residual=worst, witness=wit)
    ref = float(np.max(np.abs(coeffs)))
    out, disp, numeric = {}, {}, {}
    failed = False
    for k, (name, _) in enumerate(pairs):
        numeric[name] = complex(coeffs[0, k])
        fit = fit_constant(coeffs[:, k], penv, dictionary, ref)
        if fit is None:
            failed = True
            disp[name] = f"~{complex(coeffs[0, k]):.6g}"
            continue
        out[name], disp[name] = fit
    if failed:
        return BasisExpansion("fit_failed", out, disp, None, worst, numeric)
    residual = A
    for name, op in pairs:
        if out[name].terms:
            residual = residual - op.scale(out[name])
    res = is_zero_op(residual, seed, trials, domains)
    status = "ok" if res else "fit_failed"
    return BasisExpansion(status, out, disp, residual, worst, numeric, None if res else res.witness)


# ---------------------------------------------------------------- brackets


def bracket(A: GradedGenerator, B: GradedGenerator, kind: str | None = None) -> tuple:
    """(kind, operator); kind defaults to the graded choice."""
    kind = kind or bracket_kind(A.parity, B.parity)
    op = anticommutator(A.op, B.op) if kind == "anticommutator" else commutator(A.op, B.op)
    return kind, op


class Workspace:
    """Named operators of a model after substitution, with cached on-shell forms."""

    def __init__(self, m: ModelSpec, substitution: str | None = None):
        self.m = m
        self.sub = m.substituted(substitution)
        self.H = substitute_op(m.hamiltonian, self.sub)
        self.gens = {name: GradedGenerator(name, substitute_op(g.op, self.sub), g.parity)
                     for name, g in m.named.items()}
        self._reduced: dict = {}
        self.dictionary = Dictionary.for_model(m)

    def reduce(self, op: MatrixDiffOp, mode: str) -> MatrixDiffOp:
        return on_shell(op, self.H) if mode == "on_shell" else op

    def basis(self, names: list, mode: str) -> list:
        out = []
        for n in names:
            if n not in self.gens:
                raise ModelError(f"unknown generator {n!r}")
            key = (n, mode)
            if key not in self._reduced:
                self._reduced[key] = self.reduce(self.gens[n].op, mode)
            out.append((n, self._reduced[key]))
        return out

    def names(self) -> dict:
        d = dict(self.m.operators)
        d.update({n: g.op for n, g in self.m.named.items()})
        d["H"] = self.m.hamiltonian
        return d

    def parse(self, text: str):
        """Operator or scalar-operator dict, with the substitution applied."""
        try:
            v = eval_node(parse_ast(text), self.m.ctx, self.names(), text)
        except ParseError as exc:
            raise ModelError(str(exc)) from exc
        if isinstance(v, dict):
            return {mi: core.substitute(c, self.sub) for mi, c in v.items()} if self.sub else v
        return substitute_op(v, self.sub)

    def expand(self, op: MatrixDiffOp, names: list, mode: str, seed: int, trials: int) -> BasisExpansion:
        return expand_in_basis(self.reduce(op, mode), self.basis(names, mode), seed, trials, self.m.domains,
                               self.dictionary)


def _combo_op(ws: Workspace, combo: dict, mode: str) -> MatrixDiffOp:
    out = MatrixDiffOp.zero(ws.m.n)
    for n, c in combo.items():
        ((_, op),) = ws.basis([n], mode)
        out = out + op.scale(core.substitute(c, ws.sub) if ws.sub else c)
    return out


def _witness_json(w):
    if w is None:
        return None
    if isinstance(w, dict):
        return {k: [v.real, v.imag] if isinstance(v, complex) else v for k, v in w.items()}
    if isinstance(w, tuple) and len(w) == 4:
        r, c, mi, z = w
        return {"entry": [r, c], "derivative": list(mi), "value": [z.value.real, z.value.imag],
                "point": _witness_json(z.witness)}
    return str(w)


def verify_table(m: ModelSpec, table: StructureTable | str, seed: int = DEFAULT_SEED,
                 trials: int = DEFAULT_TRIALS, substitution: str | None = None) -> dict:
    """Compare every cell of a printed table with the computed graded bracket."""
    if isinstance(table, str):
        table = next((t for t in m.tables if t.name == table), None)
        if table is None:
            raise ModelError(f"model {m.name!r} has no table {table!r}")
    ws = Workspace(m, substitution)
    basis = list(dict.fromkeys(list(table.rows) + list(table.cols)
                               + [n for c in table.cells for n in c.expected]))
    mode = table.mode
    cells = []
    for row in table.rows:
        for col in table.cols:
            cell = table.cell(row, col)
            kind, op = bracket(ws.gens[row], ws.gens[col], None if table.bracket == "graded" else table.bracket)
            exp = ws.expand(op, basis, mode, seed, trials)
            entry = {"i": row, "j": col, "kind": kind, "expected": cell.text, "computed": None,
                     "suspect": cell.suspect}
            if cell.note:
                entry["note"] = cell.note
            direct = is_zero_op(ws.reduce(op, mode) - _combo_op(ws, cell.expected, mode), seed, trials,
                                m.domains)
            if exp.status == "not_in_span":
                entry["status"] = "match" if direct else "not_in_span"
                entry["computed"] = exp.combination()
            else:
                entry["computed"] = exp.combination()
                entry["status"] = "match" if direct else "mismatch"
            if not direct:
                entry["witness"] = _witness_json(direct.witness)
            cells.append(entry)
    summary = _summarize(cells)
    return {"model": m.name, "table": table.name, "title": table.title, "mode": mode, "cells": cells,
            "summary": summary}


def _summarize(cells: list) -> dict:
    s = {"cells": len(cells), "match": 0, "mismatch": 0, "not_in_span": 0, "suspect_mismatch": 0}
    for c in cells:
        s[c["status"]] += 1
        if c["status"] != "match" and c.get("suspect"):
            s["suspect_mismatch"] += 1
    genuine = s["mismatch"] + s["not_in_span"] - s["suspect_mismatch"]
    s["genuine_failures"] = genuine
    s["ok"] = genuine == 0
    s["warnings"] = [f"printed cell ({c['i']},{c['j']}) = {c['expected']}; computed {c['computed']}"
                     for c in cells if c["status"] != "match" and c.get("suspect")]
    return s


# ---------------------------------------------------------------- closure


def graded_jacobi(a: GradedGenerator, b: GradedGenerator, c: GradedGenerator) -> MatrixDiffOp:
    """(-1)^{ac}[a,[b,c]} + (-1)^{ba}[b,[c,a]} + (-1)^{cb}[c,[a,b]}."""
    par = {"even": 0, "odd": 1}

    def br(x, px, y, py):
        return anticommutator(x, y) if px and py else commutator(x, y)

    pa, pb, pc = par[a.parity], par[b.parity], par[c.parity]
    t1 = br(a.op, pa, br(b.op, pb, c.op, pc), (pb + pc) % 2).scale((-1) ** (pa * pc))
    t2 = br(b.op, pb, br(c.op, pc, a.op, pa), (pc + pa) % 2).scale((-1) ** (pb * pa))
    t3 = br(c.op, pc, br(a.op, pa, b.op, pb), (pa + pb) % 2).scale((-1) ** (pc * pb))
    return t1 + t2 + t3


def closure_check(m: ModelSpec, names: list, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                  mode: str = "off_shell", kind: str | None = None, substitution: str | None = None,
                  jacobi: bool = True) -> dict:
    """Expand every pairwise bracket in span(names); closed iff nothing leaves the span."""
    ws = Workspace(m, substitution)
    cells = []
    for i, a in enumerate(names):
        for b in names[i:]:
            k, op = bracket(ws.gens[a], ws.gens[b], kind)
            exp = ws.expand(op, names, mode, seed, trials)
            cells.append({"i": a, "j": b, "kind": k, "status": exp.status, "computed": exp.combination()})
    jac = {"triples": 0, "failures": []}
    if jacobi:
        graded = [ws.gens[n] for n in names if ws.gens[n].parity in ("even", "odd")]
        for a, b, c in itertools.combinations_with_replacement(graded, 3):
            jac["triples"] += 1
            J = graded_jacobi(a, b, c)
            if J.is_exact_zero():
                continue
            res = is_zero_op(J, seed, trials, m.domains)
            if not res:
                jac["failures"].append({"triple": [a.name, b.name, c.name], "witness": _witness_json(res.witness)})
    outside = [c for c in cells if c["status"] == "not_in_span"]
    return {"model": m.name, "basis": list(names), "mode": mode, "kind": kind or "graded",
            "substitution": substitution, "cells": cells,
            "summary": {"pairs": len(cells), "not_in_span": len(outside), "closed": not outside,
                        "jacobi_triples": jac["triples"], "jacobi_failures": len(jac["failures"])},
            "jacobi": jac}


# ---------------------------------------------------------------- relations


def _resolve_sub(m: ModelSpec, rel: Relation, shift: str | None) -> str | None:
    if rel.substitution != "@shift":
        return rel.substitution
    if shift is None:
        return None
    name = SHIFTS.get(shift, shift)
    if name not in m.substitutions:
        raise ModelError(f"model {m.name!r} has no substitution {name!r}; the shift needs a symbolic beta")
    return name


def check_relation(m: ModelSpec, rel: Relation, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                   shift: str | None = None) -> dict:
    sub = _resolve_sub(m, rel, shift)
    ws = Workspace(m, sub)
    out = {"name": rel.name, "group": rel.group, "kind": rel.kind, "mode": rel.mode, "substitution": sub,
           "expect_pass": rel.expect_pass}
    if rel.note:
        out["note"] = rel.note
    lhs = ws.parse(rel.lhs)
    rhs = ws.parse(rel.rhs)
    n = lhs.n if isinstance(lhs, MatrixDiffOp) else rhs.n if isinstance(rhs, MatrixDiffOp) else m.n
    lhs = lhs if isinstance(lhs, MatrixDiffOp) else scalar_op(n, lhs)
    rhs = rhs if isinstance(rhs, MatrixDiffOp) else scalar_op(n, rhs)
    if rel.kind == "equal":
        if lhs.n != rhs.n:
            raise ModelError(f"relation {rel.name!r}: dimension mismatch {lhs.n} vs {rhs.n}")
        res = is_zero_op(ws.reduce(lhs - rhs, rel.mode), seed, trials, m.domains)
        passed = bool(res)
        if not passed:
            out["witness"] = _witness_json(res.witness)
    else:
        exp = ws.expand(lhs, rel.basis, rel.mode, seed, trials)
        out["computed"] = exp.combination()
        out["expansion_status"] = exp.status
        passed = exp.status == "not_in_span" if rel.kind == "not_in_span" else True
    out["passed"] = passed
    out["ok"] = passed == rel.expect_pass
    out["status"] = ("pass" if passed else "fail") if rel.expect_pass else (
        "expected_fail" if not passed else "unexpected_pass")
    return out


def check_relations(m: ModelSpec, groups=None, exclude=(), seed: int = DEFAULT_SEED,
                    trials: int = DEFAULT_TRIALS, shift: str | None = None) -> list:
    return [check_relation(m, r, seed, trials, shift) for r in m.relations
            if (groups is None or r.group in groups) and r.group not in exclude]


def supercharge_suite(m: ModelSpec, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                      shift: str | None = None) -> dict:
    rels = check_relations(m, SUPERCHARGE_GROUPS, seed=seed, trials=trials, shift=shift)
    return {"model": m.name, "suite": "supercharges", "shift": shift, "relations": rels,
            "summary": {"checks": len(rels), "failures": sum(not r["ok"] for r in rels),
                        "ok": all(r["ok"] for r in rels)}}


def symmetry_check(m: ModelSpec, names: list | None = None, seed: int = DEFAULT_SEED,
                   trials: int = DEFAULT_TRIALS) -> list:
    """(i d_t - H) X vanishes on solutions for every listed symmetry X."""
    S = m.schrodinger()
    out = []
    for name in names or m.symmetries:
        res = is_zero_op(on_shell(compose(S, m.op(name)), m.hamiltonian), seed, trials, m.domains)
        out.append({"name": name, "ok": bool(res), "witness": None if res else _witness_json(res.witness)})
    return out


def algebra_suite(m: ModelSpec, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> dict:
    tables = [verify_table(m, t, seed, trials) for t in m.tables]
    rels = check_relations(m, exclude=SUPERCHARGE_GROUPS, seed=seed, trials=trials)
    syms = symmetry_check(m, seed=seed, trials=trials)
    ok = (all(t["summary"]["ok"] for t in tables) and all(r["ok"] for r in rels) and all(s["ok"] for s in syms))
    warnings = [w for t in tables for w in t["summary"]["warnings"]]
    return {"model": m.name, "suite": "algebra", "tables": tables, "relations": rels, "symmetries": syms,
            "summary": {"ok": ok, "warnings": warnings}}
