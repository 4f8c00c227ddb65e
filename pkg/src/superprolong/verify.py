"""Verification suites shared by the CLI and the tests.

Every suite returns a JSON-ready dict with a summary carrying "ok".
"""

from __future__ import annotations

from .algebra import algebra_suite, closure_check, supercharge_suite
from .expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS, is_zero
from .operator import apply
from .prolong import AnsatzSolution, collect_determining, invariance_residual, unknown_field, verify_ansatz
from .numcheck import (NumericModel, consistency_vector_field, field_of, finite_residual, generator_residual,
                       group_law, identity_deviation, inverse_deviation, transformations)

SUITES = ("algebra", "ansatz", "supercharges", "solutions", "finite", "all")

GENERATOR_TOL = 1e-9
FINITE_TOL = 1e-5
FLOOR_FACTOR = 10
GROUP_TOL = 1e-8
VF_TOL = 1e-6
IDENTITY_TOL = 1e-12
INVERSE_TOL = 1e-10
FINITE_LAMBDA = 0.3


def xi_names(m) -> list:
    return [f"xi{k + 1}" for k in range(len(m.coords))]


def derive(m, order: int | None = None):
    """Determining system of the generic point symmetry of the model."""
    n = m.n
    v = unknown_field(m.coords, n, xi_names(m), [f"Phi{j + 1}" for j in range(n)],
                      [f"cPhi{j + 1}" for j in range(n)])
    return collect_determining(invariance_residual(v, m.system, order))


def ansatz_suite(m, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> dict:
    if m.ansatz is None:
        return {"model": m.name, "suite": "ansatz", "skipped": True, "summary": {"ok": True, "checks": 0}}
    det = derive(m)
    findings = det.xi_jet_findings(set(xi_names(m)))
    exact = m.solutions[0][1] if m.solutions else None
    a = m.ansatz
    runs = [("printed", a.solution, True)]
    vdocs = m.doc.get("ansatz", {}).get("variants", {})
    for name, bodies in a.variants.items():
        runs.append((name, AnsatzSolution(bodies, a.solution.constants, a.solution.free_functions),
                     vdocs.get(name, {}).get("expect_pass", True)))
    results = []
    for name, sol, expect in runs:
        rep = verify_ansatz(det, sol, exact, seed, trials, m.domains, a.conj_pairs)
        results.append({
            "name": name, "passed": rep.ok, "expect_pass": expect, "ok": rep.ok == expect,
            "constants": rep.n_constants, "independent_constants": rep.n_independent,
            "free_functions": rep.n_free_functions, "failures": [[i, k] for i, k in rep.failures()[:20]],
            "conjugation": rep.conj_checks,
        })
    ok = all(r["ok"] for r in results) and bool(findings)
    return {"model": m.name, "suite": "ansatz", "equations": len(det), "xi_jet_equations": len(findings),
            "nonlinear_degree": det.nonlinear_degree, "results": results,
            "summary": {"ok": ok, "checks": len(results) + 1}}


def solutions_suite(m, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> dict:
    S = m.schrodinger()
    sols = []
    for label, sol in m.solutions:
        ok = all(is_zero(c, seed, trials, m.domains).ok for c in apply(S, sol))
        sols.append({"label": label, "ok": ok})
    gens = []
    for g in m.symmetries:
        worst = 0.0
        where = None
        for label, sol in m.solutions:
            r = generator_residual(m, m.named[g], sol, seed)
            if r.value > worst:
                worst, where = r.value, {"solution": label, "witness": _jsonable(r.witness)}
        entry = {"generator": g, "max_residual": worst, "ok": worst <= GENERATOR_TOL}
        if where and worst > GENERATOR_TOL:
            entry.update(where)
        gens.append(entry)
    ok = all(s["ok"] for s in sols) and all(g["ok"] for g in gens)
    return {"model": m.name, "suite": "solutions", "solutions": sols, "generators": gens,
            "summary": {"ok": ok, "checks": len(sols) + len(gens)}}


def _jsonable(d):
    if d is None:
        return None
    return {k: [v.real, v.imag] if isinstance(v, complex) else v for k, v in d.items()}


def finite_suite(m, seed: int = DEFAULT_SEED, lam: float = FINITE_LAMBDA) -> dict:
    nm = NumericModel(m, seed)
    cat = transformations(nm)
    rows = []
    for name, T in cat.items():
        floor = max(finite_residual(m, T, 0.0, sol, seed, nm=nm).value for _, sol in m.solutions)
        res = [finite_residual(m, T, lam, sol, seed, nm=nm) for _, sol in m.solutions]
        worst = max(r.value for r in res)
        row = {
            "transformation": name, "note": T.note, "lambda": lam, "floor": floor, "residual": worst,
            "group_law": group_law(T, 0.1, 0.1, seed), "vector_field": consistency_vector_field(
                T, field_of(m, T.generator), nm, seed),
            "identity": identity_deviation(T, seed), "inverse": inverse_deviation(T, lam, seed),
        }
        row["ok"] = (worst <= FINITE_TOL and worst <= FLOOR_FACTOR * max(floor, 1e-12)
                     and row["group_law"] <= GROUP_TOL and row["vector_field"] <= VF_TOL
                     and row["identity"] <= IDENTITY_TOL and row["inverse"] <= INVERSE_TOL)
        rows.append(row)
    return {"model": m.name, "suite": "finite", "transformations": rows,
            "summary": {"ok": all(r["ok"] for r in rows), "checks": len(rows), "skipped": not rows}}


def closures_suite(m, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS) -> dict:
    out = []
    for c in m.doc.get("closures", []):
        r = closure_check(m, c["basis"], seed, trials, c.get("mode", "off_shell"), c.get("kind"),
                          c.get("substitution"))
        r["name"] = c["name"]
        r["expect_closed"] = c.get("expect_closed", True)
        r["ok"] = r["summary"]["closed"] == r["expect_closed"] and r["summary"]["jacobi_failures"] == 0
        out.append(r)
    return {"model": m.name, "suite": "closure", "closures": out,
            "summary": {"ok": all(c["ok"] for c in out), "checks": len(out)}}


def run_suite(m, suite: str, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
              shift: str | None = None) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if suite == "all":
        parts = {s: run_suite(m, s, seed, trials, shift) for s in SUITES[:-1]}
        ok = all(p["summary"]["ok"] for p in parts.values())
        warnings = [w for p in parts.values() for w in p["summary"].get("warnings", [])]
        return {"model": m.name, "suite": "all", "suites": parts, "summary": {"ok": ok, "warnings": warnings}}
    if suite == "algebra":
        rep = algebra_suite(m, seed, trials)
        rep["closure"] = closures_suite(m, seed, trials)
        rep["summary"]["ok"] = rep["summary"]["ok"] and rep["closure"]["summary"]["ok"]
        return rep
    if suite == "supercharges":
        return supercharge_suite(m, seed, trials, shift)
    if suite == "ansatz":
        return ansatz_suite(m, seed, trials)
    if suite == "solutions":
        return solutions_suite(m, seed, trials)
    return finite_suite(m, seed)
