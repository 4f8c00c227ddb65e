"""Model documents: parsing, validation and export.

A model is described by a JSON-compatible document whose leaves are
expression and operator strings.  Built-in models are documents too, so
export followed by load reproduces them exactly.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..expr import core
from ..expr.core import Expr, Jet, Sym
from ..expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS, Domains, is_zero
from ..expr.parse import Context, ParseError, parse, parse_ast
from ..operator import (D_TOKENS, MI0, GradedGenerator, MatrixDiffOp, apply, classify_parity,
                        compose, eval_node, is_zero_op, parse_opexpr, scalar_op, STANDARD_OPS)
from ..prolong import AnsatzSolution, PDESystem, coord_index

BASE_DICTIONARY = ["w", "w^2", "M", "M*w", "e", "B", "e*B", "wt", "wab", "sqrt(wt)", "sqrt(w)"]


class ModelError(ValueError):
    """Schema or invariant violation; `path` points into the document."""

    def __init__(self, message: str, path: str = "", witness=None):
        self.path = path
        self.witness = witness
        super().__init__(f"{path}: {message}" if path else message)


@dataclass
class TableCell:
    row: str
    col: str
    expected: dict
    text: str
    suspect: bool = False
    note: str = ""


@dataclass
class StructureTable:
    name: str
    title: str
    rows: list
    cols: list
    cells: list
    mode: str = "off_shell"
    bracket: str = "graded"

    def cell(self, row: str, col: str) -> TableCell:
        for c in self.cells:
            if c.row == row and c.col == col:
                return c
        raise KeyError((row, col))


@dataclass
class Relation:
    """A claimed identity.

    kind "equal": lhs = rhs; "not_in_span": lhs is outside span(basis);
    "report": expand lhs in span(basis) and report, no expectation.
    A substitution of "@shift" is chosen at run time.
    """

    name: str
    lhs: str
    rhs: str = "0"
    kind: str = "equal"
    mode: str = "off_shell"
    group: str = "relations"
    basis: list = field(default_factory=list)
    substitution: str | None = None
    expect_pass: bool = True
    note: str = ""


@dataclass
class AnsatzSpec:
    solution: AnsatzSolution
    unknowns: dict
    conj_pairs: dict
    variants: dict = field(default_factory=dict)


@dataclass
class ModelSpec:
    name: str
    doc: dict
    ctx: Context
    n: int
    coords: tuple
    hamiltonian: MatrixDiffOp
    grading: MatrixDiffOp
    generators: list
    named: dict
    symmetries: list
    tables: list
    relations: list
    solutions: list
    dictionary: list
    substitutions: dict
    domains: Domains
    ansatz: AnsatzSpec | None = None
    operators: dict = field(default_factory=dict)
    _system: PDESystem | None = field(default=None, repr=False)

    @property
    def system(self) -> PDESystem:
        if self._system is None:
            self._system = system_from_hamiltonian(self.hamiltonian, self.coords)
        return self._system

    def op(self, name: str) -> MatrixDiffOp:
        return self.named[name].op

    def ops(self) -> dict:
        return {k: g.op for k, g in self.named.items()}

    def generator_names(self) -> list:
        return [g.name for g in self.generators]

    def substituted(self, name: str | None) -> dict:
        if not name:
            return {}
        if name not in self.substitutions:
            raise ModelError(f"unknown substitution {name!r}")
        return self.substitutions[name]

    def schrodinger(self) -> MatrixDiffOp:
        """i d_t - H."""
        return MatrixDiffOp.deriv(self.n, D_TOKENS["Dt"]).scale(core.I) - self.hamiltonian

    def __eq__(self, other):
        if not isinstance(other, ModelSpec):
            return NotImplemented
        return (self.name == other.name and self.n == other.n
                and self.hamiltonian == other.hamiltonian and self.grading == other.grading
                and self.ops() == other.ops()
                and [s for _, s in self.solutions] == [s for _, s in other.solutions])


def system_from_hamiltonian(H: MatrixDiffOp, coords) -> PDESystem:
    """i u_r,t - sum_c H[r][c] u_c = 0 in jet symbols, plus conjugates."""
    eqs = []
    for r in range(H.n):
        e = core.I * Expr.atom(Jet(r + 1, False, (1, 0, 0)))
        for c in range(H.n):
            for mi, coeff in H.entries[r][c].items():
                e = e - coeff * Expr.atom(Jet(c + 1, False, mi))
        eqs.append(e)
    return PDESystem.from_equations(coords, H.n, eqs)


# ---------------------------------------------------------------- loading


def _req(doc: dict, key: str, path: str):
    if key not in doc:
        raise ModelError(f"missing required section {key!r}", path)
    return doc[key]


def _parse_expr(text, ctx: Context, path: str) -> Expr:
    if not isinstance(text, str):
        raise ModelError("expected an expression string", path)
    try:
        return parse(text, ctx)
    except ParseError as exc:
        raise ModelError(str(exc), path) from exc


def _parse_operator(text, ctx: Context, names: dict, n: int | None, path: str):
    if not isinstance(text, str):
        raise ModelError("expected an operator string", path)
    try:
        v = eval_node(parse_ast(text), ctx, names, text)
    except ParseError as exc:
        raise ModelError(str(exc), path) from exc
    if isinstance(v, dict):
        return v if n is None else scalar_op(n, v)
    if n is not None and v.n != n:
        raise ModelError(f"expected a {n}x{n} operator, got {v.n}x{v.n}", path)
    return v


def build_context(doc: dict) -> Context:
    ctx = Context()
    for c in _req(doc, "coordinates", ""):
        if c not in core.COORD_NAMES:
            raise ModelError(f"unknown coordinate {c!r}", "coordinates")
        ctx.declare_coord(c)
    for k, p in enumerate(doc.get("parameters", [])):
        name = p["name"] if isinstance(p, dict) else p
        conj = p.get("conjugate") if isinstance(p, dict) else None
        ctx.declare_param(name, conj)
    ctx.max_dep = len(_req(doc, "dependents", ""))
    for k, (name, text) in enumerate(doc.get("definitions", {}).items()):
        ctx.define(name, _parse_expr(text, ctx, f"definitions.{name}"))
    for name, spec in doc.get("functions", {}).items():
        ctx.declare_function(name, spec.get("conjugate"))
    return ctx


def _combination(text: str, ctx: Context, basis: list, path: str) -> dict:
    """Parse a linear combination of basis names into {name: coefficient}."""
    local = ctx.copy()
    labels = {}
    for name in basis:
        labels[name] = local.declare_label(f"__{name}")
        local.definitions[name] = Expr.atom(labels[name])
    E = _parse_expr(text, local, path)
    label_atoms = {s: name for name, s in labels.items()}
    groups = core.split_by(E, lambda a: a in label_atoms)
    out = {}
    for mono, coeff in groups.items():
        if not mono:
            if coeff.terms:
                raise ModelError("expected a linear combination of generators", path)
            continue
        if len(mono) != 1 or mono[0][1] != 1:
            raise ModelError("combination must be linear in generator names", path)
        out[label_atoms[mono[0][0]]] = coeff
    return out


def load_doc(doc: dict, validate: bool = True, seed: int = DEFAULT_SEED,
             trials: int = DEFAULT_TRIALS) -> ModelSpec:
    doc = copy.deepcopy(doc)
    name = _req(doc, "name", "")
    ctx = build_context(doc)
    n = len(doc["dependents"])
    coords = tuple(doc["coordinates"])
    names: dict = {}
    for key, text in doc.get("operators", {}).items():
        names[key] = _parse_operator(text, ctx, names, None, f"operators.{key}")
    helpers = dict(names)
    H = _parse_operator(_req(doc, "hamiltonian", ""), ctx, names, n, "hamiltonian")
    gamma = _parse_operator(_req(doc, "grading", ""), ctx, names, n, "grading")
    names["H"] = H
    named: dict = {}
    generators = []
    symmetries = []
    for k, g in enumerate(doc.get("generators", [])):
        path = f"generators[{k}]"
        op = _parse_operator(_req(g, "op", path), ctx, names, n, path + ".op")
        gen = GradedGenerator(g["name"], op, g.get("parity") or _parity(op, gamma, seed, trials))
        names[g["name"]] = op
        named[g["name"]] = gen
        generators.append(gen)
        if g.get("symmetry", True):
            symmetries.append(g["name"])
    for k, p in enumerate(doc.get("products", [])):
        path = f"products[{k}]"
        if "expr" in p:
            op = _parse_operator(p["expr"], ctx, names, n, path + ".expr")
        else:
            factors = _req(p, "factors", path)
            missing = [f for f in factors if f not in names]
            if missing:
                raise ModelError(f"unknown factor {missing[0]!r}", path + ".factors")
            op = MatrixDiffOp.identity(n)
            for f in factors:
                op = compose(op, _promote(names[f], n))
            scale = _parse_expr(p.get("scale", "1"), ctx, path + ".scale")
            op = op.scale(scale)
        gen = GradedGenerator(p["name"], op, p.get("parity") or _parity(op, gamma, seed, trials))
        names[p["name"]] = op
        named[p["name"]] = gen
        if p.get("symmetry", True):
            symmetries.append(p["name"])
    substitutions = {}
    for sname, binds in doc.get("substitutions", {}).items():
        sub = {}
        for var, text in binds.items():
            sym = ctx.symbols.get(var)
            if sym is None:
                raise ModelError(f"substitution target {var!r} is not a parameter", f"substitutions.{sname}")
            sub[sym] = _parse_expr(text, ctx, f"substitutions.{sname}.{var}")
        substitutions[sname] = sub
    tables = [_load_table(t, ctx, named, f"tables[{k}]") for k, t in enumerate(doc.get("tables", []))]
    relations = []
    for k, r in enumerate(doc.get("relations", [])):
        rel = Relation(r["name"], r["lhs"], r.get("rhs", "0"), r.get("kind", "equal"),
                       r.get("mode", "off_shell"), r.get("group", "relations"), list(r.get("basis", [])),
                       r.get("substitution"), r.get("expect_pass", True), r.get("note", ""))
        if rel.kind not in ("equal", "not_in_span", "report"):
            raise ModelError(f"unknown relation kind {rel.kind!r}", f"relations[{k}]")
        if rel.substitution and rel.substitution != "@shift" and rel.substitution not in substitutions:
            raise ModelError(f"unknown substitution {rel.substitution!r}", f"relations[{k}]")
        for b in rel.basis:
            if b not in named:
                raise ModelError(f"unknown generator {b!r}", f"relations[{k}].basis")
        relations.append(rel)
    for k, c in enumerate(doc.get("closures", [])):
        for b in c.get("basis", []):
            if b not in named:
                raise ModelError(f"unknown generator {b!r}", f"closures[{k}].basis")
        if c.get("substitution") and c["substitution"] not in substitutions:
            raise ModelError(f"unknown substitution {c['substitution']!r}", f"closures[{k}]")
    for b in doc.get("bracket_basis", {}).get("names", []):
        if b not in named:
            raise ModelError(f"unknown generator {b!r}", "bracket_basis.names")
    solutions = []
    for k, s in enumerate(doc.get("solutions", [])):
        comps = s["components"]
        if len(comps) != n:
            raise ModelError(f"solution has {len(comps)} components, expected {n}", f"solutions[{k}]")
        solutions.append((s.get("label", f"solution {k}"),
                          [_parse_expr(c, ctx, f"solutions[{k}].components[{j}]") for j, c in enumerate(comps)]))
    dictionary = []
    for text in BASE_DICTIONARY + doc.get("dictionary", []):
        try:
            dictionary.append(parse(text, ctx))
        except ParseError:
            continue
    overrides = {k: tuple(v) for k, v in doc.get("sampling", {}).items()}
    spec = ModelSpec(name, doc, ctx, n, coords, H, gamma, generators, named, symmetries, tables,
                     relations, solutions, dictionary, substitutions, Domains(overrides=overrides))
    spec.operators = helpers
    if "ansatz" in doc:
        spec.ansatz = _load_ansatz(doc["ansatz"], ctx, n, coords)
    if validate:
        validate_model(spec, seed, trials)
    return spec


def _promote(v, n: int) -> MatrixDiffOp:
    return v if isinstance(v, MatrixDiffOp) else scalar_op(n, v)


def _parity(op: MatrixDiffOp, gamma: MatrixDiffOp, seed: int, trials: int) -> str:
    return classify_parity(op, gamma, seed, trials)


def _load_table(t: dict, ctx: Context, named: dict, path: str) -> StructureTable:
    rows, cols = _req(t, "rows", path), _req(t, "cols", path)
    for nm in list(rows) + list(cols):
        if nm not in named:
            raise ModelError(f"unknown generator {nm!r}", path)
    basis = list(dict.fromkeys(t.get("basis", list(rows) + list(cols))))
    suspect = {tuple(s.split(",")): note for s, note in t.get("suspect", {}).items()}
    cells = []
    for key, text in _req(t, "cells", path).items():
        r, c = key.split(",")
        if r not in rows or c not in cols:
            raise ModelError(f"cell {key!r} outside the table", path)
        expected = _combination(text, ctx, [b for b in named], f"{path}.cells.{key}")
        cells.append(TableCell(r, c, expected, text, (r, c) in suspect, suspect.get((r, c), "")))
    have = {(c.row, c.col) for c in cells}
    for r in rows:
        for c in cols:
            if (r, c) not in have:
                cells.append(TableCell(r, c, {}, "0"))
    bracket = t.get("bracket", "graded")
    if bracket not in ("graded", "commutator", "anticommutator"):
        raise ModelError(f"unknown bracket {bracket!r}", path)
    return StructureTable(t["name"], t.get("title", t["name"]), list(rows), list(cols), cells,
                          t.get("mode", "off_shell"), bracket)


def _load_ansatz(a: dict, ctx: Context, n: int, coords) -> AnsatzSpec:
    local = ctx.copy()
    for c in a["constants"]:
        local.declare_param(c)
    free = {}
    for name, spec in a.get("free_functions", {}).items():
        cname = spec.get("conjugate", "c" + name)
        local.declare_function(name, cname)
        free[name] = (int(spec["component"]), cname)
    bodies = {}
    unknowns = {}
    for k, c in enumerate(coords):
        key = f"xi{k + 1}"
        bodies[key] = _parse_expr(a["xi"].get(c, "0"), local, f"ansatz.xi.{c}")
        unknowns[key] = c
    conj_pairs = {}
    variants = {}
    for j in range(n):
        body = _parse_expr(a["phi"][j], local, f"ansatz.phi[{j}]")
        bodies[f"Phi{j + 1}"] = body
        bodies[f"cPhi{j + 1}"] = core.conj(body)
        conj_pairs[f"Phi{j + 1}"] = f"cPhi{j + 1}"
    for vname, v in a.get("variants", {}).items():
        vb = dict(bodies)
        for j, text in enumerate(v.get("phi", [])):
            if text is None:
                continue
            body = _parse_expr(text, local, f"ansatz.variants.{vname}.phi[{j}]")
            vb[f"Phi{j + 1}"] = body
            vb[f"cPhi{j + 1}"] = core.conj(body)
        variants[vname] = vb
    constants = [local.symbols[c] for c in a["constants"]]
    sol = AnsatzSolution(bodies, constants, free)
    return AnsatzSpec(sol, unknowns, conj_pairs, variants)


# ---------------------------------------------------------------- validation


def validate_model(m: ModelSpec, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS):
    g2 = compose(m.grading, m.grading) - MatrixDiffOp.identity(m.n)
    res = is_zero_op(g2, seed, trials, m.domains)
    if not res:
        raise ModelError("grading operator does not square to the identity", "grading", res.witness)
    S = m.schrodinger()
    for k, (label, sol) in enumerate(m.solutions):
        out = apply(S, sol)
        for j, comp in enumerate(out):
            z = is_zero(comp, seed, trials, m.domains)
            if not z:
                raise ModelError(f"solution {label!r} violates the equation in component {j + 1}",
                                 f"solutions[{k}]", z.witness)


def load_model(path: str | Path, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> ModelSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("model document must be an object")
    return load_doc(doc, seed=seed, trials=trials)


def export_model(m: ModelSpec, path: str | Path | None = None) -> str:
    text = json.dumps(m.doc, indent=1, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def solution_strings(sols) -> list:
    return [{"label": label, "components": [core.to_str(c) for c in comps]} for label, comps in sols]


def substitute_op(op: MatrixDiffOp, sub: dict) -> MatrixDiffOp:
    if not sub:
        return op
    return op.map_coeffs(lambda c: core.substitute(c, sub))


def sym_of(ctx: Context, name: str) -> Sym:
    return ctx.symbols[name]


__all__ = [
    "ModelError", "ModelSpec", "StructureTable", "TableCell", "Relation", "AnsatzSpec",
    "load_doc", "load_model", "export_model", "validate_model", "system_from_hamiltonian",
    "solution_strings", "substitute_op", "BASE_DICTIONARY", "coord_index", "MI0", "STANDARD_OPS",
    "parse_opexpr",
]
