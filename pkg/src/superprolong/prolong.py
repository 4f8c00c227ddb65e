"""Jet-space vector fields, prolongation and determining equations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .expr import core
from .expr.core import Expr, FuncApp, Jet, Sym
from .expr.oracle import DEFAULT_SEED, DEFAULT_TRIALS, DEFAULT_DOMAINS, Domains, evaluate, is_zero, sample_env
from .operator import COORD_ATOMS, MI0, MatrixDiffOp


def coord_index(name: str) -> int:
    return core.COORD_NAMES.index(name)


def total_derivative(E: Expr, k: int) -> Expr:
    """D_k E = d_k E + sum over jets u^J of u^(J+e_k) dE/du^J (conjugate jets included)."""
    if not 0 <= k < len(COORD_ATOMS):
        raise ValueError(f"unknown coordinate index {k}")
    out = core.differentiate(E, COORD_ATOMS[k])
    for j in sorted(core.jets_of(E), key=lambda a: a.key):
        d = core.differentiate(E, j)
        if d.terms:
            out = out + Expr.atom(j.shifted(k)) * d
    return out


def total_derivative_mi(E: Expr, mi) -> Expr:
    for k, n in enumerate(mi):
        for _ in range(n):
            E = total_derivative(E, k)
    return E


# ---------------------------------------------------------------- PDE systems


class SolvedFormError(ValueError):
    pass


@dataclass
class PDESystem:
    """Evolution system; equations[k] = 0 with leading[k] = rhs[k] on shell."""

    coords: tuple
    n_dep: int
    equations: list
    leading: list
    rhs: list
    _cache: dict = field(default_factory=dict, repr=False)

    @staticmethod
    def from_equations(coords: Iterable[str], n_dep: int, equations: list,
                       add_conjugates: bool = True) -> "PDESystem":
        coords = tuple(coord_index(c) for c in coords)
        eqs = list(equations)
        if add_conjugates:
            eqs = eqs + [core.conj(e) for e in eqs]
        leading, rhs = [], []
        for e in eqs:
            lead = [j for j in core.jets_of(e) if j.mi == (1, 0, 0)]
            if len(lead) != 1:
                raise SolvedFormError(f"equation needs exactly one first-order time jet: {e}")
            j = lead[0]
            c = core.coefficient(e, j, 1)
            if c.free:
                raise SolvedFormError(f"leading coefficient of {j.name} is not constant")
            rest = e - c * Expr.atom(j)
            if j in rest.free:
                raise SolvedFormError(f"{j.name} appears nonlinearly")
            leading.append(j)
            rhs.append(-rest / c)
        return PDESystem(coords, n_dep, eqs, leading, rhs)

    def dependents(self) -> list:
        return [(j.dep, j.conj) for j in self.leading]

    def replacement(self, j: Jet) -> Expr:
        key = j
        if key in self._cache:
            return self._cache[key]
        for lead, r in zip(self.leading, self.rhs):
            if lead.dep == j.dep and lead.conj == j.conj:
                mi = (j.mi[0] - 1, j.mi[1], j.mi[2])
                out = self.on_shell(total_derivative_mi(r, mi))
                self._cache[key] = out
                return out
        raise SolvedFormError(f"no solved form for {j.name}")

    def on_shell(self, E: Expr) -> Expr:
        """Eliminate every time-derivative jet using the solved form."""
        for _ in range(16):
            tj = [a for a in E.free if isinstance(a, Jet) and a.mi[0] >= 1]
            if not tj:
                return E
            E = core.substitute(E, {a: self.replacement(a) for a in tj})
        raise RuntimeError("on-shell substitution did not terminate")

    def max_order(self) -> int:
        return max(j.order for e in self.equations for j in core.jets_of(e))


# ---------------------------------------------------------------- vector fields


class JetVectorField:
    """v = sum xi_j d_{x_j} + sum Phi_a d_{u_a}; prolonged coefficients are cached."""

    def __init__(self, xi: dict, phi: dict, coords: Iterable[int] = (0, 1, 2)):
        self.coords = tuple(coords)
        self.xi = {k: core.as_expr(v) for k, v in xi.items()}
        self.phi = {k: core.as_expr(v) for k, v in phi.items()}
        self._cache: dict = {}

    def xi_of(self, k: int) -> Expr:
        return self.xi.get(k, core.ZERO)

    def coeff(self, dep: int, conj: bool, mi) -> Expr:
        """phi^J via phi^(J+e_k) = D_k phi^J - sum_j (D_k xi_j) u^(J+e_j)."""
        mi = tuple(mi)
        key = (dep, conj, mi)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if sum(mi) == 0:
            out = self.phi.get((dep, conj), core.ZERO)
        else:
            k = max(i for i, n in enumerate(mi) if n)
            parent = list(mi)
            parent[k] -= 1
            parent = tuple(parent)
            prev = self.coeff(dep, conj, parent)
            out = total_derivative(prev, k)
            base = Jet(dep, conj, parent)
            for j in self.coords:
                dxi = total_derivative(self.xi_of(j), k)
                if dxi.terms:
                    out = out - dxi * Expr.atom(base.shifted(j))
        self._cache[key] = out
        return out

    def prolong(self, n: int, deps: Iterable | None = None) -> dict:
        deps = list(deps) if deps is not None else sorted(self.phi)
        out = {}
        for dep, conj in deps:
            for mi in multi_indices(self.coords, n):
                out[(dep, conj, mi)] = self.coeff(dep, conj, mi)
        return out

    def apply(self, F: Expr) -> Expr:
        """Prolonged field acting on F as a derivation."""
        out = core.ZERO
        for j in self.coords:
            xi = self.xi_of(j)
            if xi.terms:
                out = out + xi * core.differentiate(F, COORD_ATOMS[j])
        for a in sorted(core.jets_of(F), key=lambda s: s.key):
            c = self.coeff(a.dep, a.conj, a.mi)
            if c.terms:
                out = out + c * core.differentiate(F, a)
        return out

    def base_apply(self, F: Expr) -> Expr:
        """Unprolonged action, for F depending on coordinates and order-0 jets."""
        if any(j.order for j in core.jets_of(F)):
            raise ValueError("base action needs order-0 jets only")
        return self.apply(F)

    def scaled(self, c) -> "JetVectorField":
        return JetVectorField({k: v * c for k, v in self.xi.items()},
                              {k: v * c for k, v in self.phi.items()}, self.coords)

    def __add__(self, other: "JetVectorField") -> "JetVectorField":
        xi = {k: self.xi_of(k) + other.xi_of(k) for k in set(self.xi) | set(other.xi)}
        phi = {k: self.phi.get(k, core.ZERO) + other.phi.get(k, core.ZERO)
               for k in set(self.phi) | set(other.phi)}
        return JetVectorField(xi, phi, self.coords)

    @staticmethod
    def from_operator(op: MatrixDiffOp, coords: Iterable[int] = (0, 1, 2),
                      with_conjugates: bool = True) -> "JetVectorField":
        """Field of a first-order operator op = xi.d - M with scalar derivative part.

        Phi = M psi, and the conjugate components are conj(Phi).
        """
        n = op.n
        xi = {}
        for r, c, mi, coeff in op.items():
            if sum(mi) > 1:
                raise ValueError("operator is not first order")
            if sum(mi) == 1:
                if r != c:
                    raise ValueError("derivative part is not scalar")
                k = mi.index(1)
                if k in xi and not is_zero(xi[k] - coeff):
                    raise ValueError("derivative part is not scalar")
                xi.setdefault(k, coeff)
        for k, v in xi.items():
            for r in range(n):
                if op.entries[r][r].get(core.unit_mi(k), core.ZERO) != v:
                    raise ValueError("derivative part is not scalar")
        phi = {}
        for r in range(n):
            acc = core.ZERO
            for c in range(n):
                m = -op.entries[r][c].get(MI0, core.ZERO)
                if m.terms:
                    acc = acc + m * Expr.atom(Jet(c + 1))
            phi[(r + 1, False)] = acc
            if with_conjugates:
                phi[(r + 1, True)] = core.conj(acc)
        return JetVectorField(xi, phi, coords)


def multi_indices(coords: Iterable[int], n: int) -> list:
    coords = tuple(coords)
    out = []

    def rec(i, left, cur):
        if i == len(coords):
            out.append(tuple(cur))
            return
        for k in range(left + 1):
            cur[coords[i]] = k
            rec(i + 1, left - k, cur)
        cur[coords[i]] = 0

    rec(0, n, [0, 0, 0])
    return sorted(set(out), key=lambda mi: (sum(mi), tuple(-v for v in mi)))


def bracket(v1: JetVectorField, v2: JetVectorField) -> JetVectorField:
    """Lie bracket of base fields (coefficients over coordinates and order-0 jets)."""
    coords = tuple(sorted(set(v1.coords) | set(v2.coords)))
    xi = {j: v1.base_apply(v2.xi_of(j)) - v2.base_apply(v1.xi_of(j)) for j in coords}
    keys = sorted(set(v1.phi) | set(v2.phi))
    phi = {k: v1.base_apply(v2.phi.get(k, core.ZERO)) - v2.base_apply(v1.phi.get(k, core.ZERO))
           for k in keys}
    return JetVectorField(xi, phi, coords)


def prolonged_commutator(v1: JetVectorField, v2: JetVectorField, n: int) -> dict:
    """Components of [pr v1, pr v2] as a derivation on jet coordinates up to order n."""
    out = {}
    for j in v1.coords:
        out[("x", j)] = v1.apply(v2.xi_of(j)) - v2.apply(v1.xi_of(j))
    for dep, conj in sorted(set(v1.phi) | set(v2.phi)):
        for mi in multi_indices(v1.coords, n):
            out[(dep, conj, mi)] = v1.apply(v2.coeff(dep, conj, mi)) - v2.apply(v1.coeff(dep, conj, mi))
    return out


def invariance_residual(v: JetVectorField, system: PDESystem, n: int | None = None) -> list:
    """pr v applied to each equation, then reduced on shell."""
    need = system.max_order()
    if n is not None and n < need:
        raise ValueError(f"prolongation order {n} below equation order {need}")
    return [system.on_shell(v.apply(eq)) for eq in system.equations]


# ---------------------------------------------------------------- determining systems


def _is_derivative_jet(a) -> bool:
    return isinstance(a, Jet) and a.order >= 1


def _normalized(E: Expr) -> Expr:
    lead = min(E.terms, key=core.mono_key)
    return E * (1 / E.terms[lead])


@dataclass
class DeterminingSystem:
    equations: list
    sources: list
    nonlinear_degree: int = 0

    def __len__(self):
        return len(self.equations)

    def listing(self) -> str:
        return "\n".join(core.to_str(e) for e in self.equations)

    def to_json(self) -> str:
        return json.dumps([core.to_str(e) for e in self.equations], indent=1)

    def unknowns(self) -> set:
        return {a.name for e in self.equations for a in core.funcapps_of(e)}

    def xi_jet_findings(self, xi_names) -> list:
        """Equations whose only content is derivatives of xi with respect to jets."""
        found = []
        for e in self.equations:
            apps = core.funcapps_of(e)
            if not apps:
                continue
            ok = True
            for a in apps:
                jet_order = sum(k for arg, k in zip(a.args, a.deriv) if isinstance(arg, Jet))
                if a.name not in xi_names or jet_order == 0:
                    ok = False
                    break
            if ok:
                found.append(e)
        return found


def collect_determining(residuals: list) -> DeterminingSystem:
    """Split residuals by monomials in derivative jets; deduplicate up to scale."""
    seen = {}
    sources = []
    degree = 0
    for idx, r in enumerate(residuals):
        groups = core.split_by(r, _is_derivative_jet)
        for mono in sorted(groups, key=core.mono_key):
            eq = groups[mono]
            if not eq.terms:
                continue
            degree = max(degree, sum(p for _, p in mono))
            key = _normalized(eq)
            if key not in seen:
                seen[key] = len(seen)
                label = "*".join(core.atom_str(a) + (f"^{p}" if p != 1 else "") for a, p in mono) or "1"
                sources.append((idx, label))
    eqs = sorted(seen, key=lambda e: seen[e])
    return DeterminingSystem(eqs, sources, degree)


# ---------------------------------------------------------------- ansatz verification


@dataclass
class AnsatzSolution:
    """Unknown-function bodies plus free constants and free solution functions.

    free_functions maps a name such as A0 to (component index, conjugate name);
    during verification it is replaced by a component of an exact solution.
    """

    bodies: dict
    constants: list
    free_functions: dict = field(default_factory=dict)

    def defs_for(self, solution) -> dict:
        defs = dict(self.bodies)
        for name, (comp, cname) in self.free_functions.items():
            val = core.as_expr(solution[comp]) if solution is not None else core.ZERO
            defs[name] = val
            if cname:
                defs[cname] = core.conj(val)
        return defs


@dataclass
class AnsatzReport:
    per_equation: list
    n_constants: int
    n_independent: int
    n_free_functions: int
    conj_checks: dict
    instances: list

    @property
    def ok(self) -> bool:
        return all(all(row) for row in self.per_equation) and all(self.conj_checks.values())

    def failures(self) -> list:
        out = []
        for k, row in enumerate(self.per_equation):
            for j, ok in enumerate(row):
                if not ok:
                    out.append((self.instances[j], k))
        return out


def verify_ansatz(det: DeterminingSystem, sol: AnsatzSolution, exact_solution=None,
                  seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
                  domains: Domains = DEFAULT_DOMAINS, conj_pairs: dict | None = None) -> AnsatzReport:
    """Substitute the ansatz into every determining equation and run the oracle.

    Free solution functions are replaced by the given exact solution and by zero.
    """
    missing = det.unknowns() - set(sol.bodies) - set(sol.free_functions) - {
        c for _, c in sol.free_functions.values() if c}
    if missing:
        raise ValueError(f"unassigned unknown functions: {', '.join(sorted(missing))}")
    instances = ["exact", "zero"] if exact_solution is not None else ["zero"]
    sols = [exact_solution, None] if exact_solution is not None else [None]
    per_eq = [[True] * len(sols) for _ in det.equations]
    for j, s in enumerate(sols):
        defs = sol.defs_for(s)
        for k, eq in enumerate(det.equations):
            e = core.bind_functions(eq, defs)
            per_eq[k][j] = is_zero(e, seed + k, trials, domains).ok
    conj_checks = {}
    defs = sol.defs_for(exact_solution)
    for name, cname in (conj_pairs or {}).items():
        a = core.bind_functions(sol.bodies[name], defs)
        b = core.bind_functions(sol.bodies[cname], defs)
        conj_checks[f"{cname} = conj({name})"] = is_zero(b - core.conj(a), seed, trials, domains).ok
    n_ind = independent_constants(sol, seed, domains)
    return AnsatzReport(per_eq, len(sol.constants), n_ind, len(sol.free_functions), conj_checks, instances)


def independent_constants(sol: AnsatzSolution, seed: int = DEFAULT_SEED,
                          domains: Domains = DEFAULT_DOMAINS, points: int = 12) -> int:
    """Numeric rank of d(bodies)/d(delta_i) over random points."""
    defs = sol.defs_for(None)
    bodies = [core.bind_functions(b, defs) for _, b in sorted(sol.bodies.items())]
    rng = np.random.default_rng(seed)
    cols = []
    atoms = set()
    for b in bodies:
        atoms |= b.free
    env = sample_env(atoms, rng, points, domains)
    for c in sol.constants:
        col = []
        for b in bodies:
            d = core.differentiate(b, c)
            v, _, _ = evaluate(d, env, points)
            col.append(v)
        cols.append(np.concatenate(col))
    if not cols:
        return 0
    mat = np.array(cols)
    return int(np.linalg.matrix_rank(mat, tol=1e-8 * max(1.0, np.abs(mat).max())))


def unknown_field(coords: Iterable[str], n_dep: int, xi_names: list, phi_names: list,
                  cphi_names: list) -> JetVectorField:
    """Generic field whose components are unknown functions of coordinates and all order-0 jets."""
    cidx = [coord_index(c) for c in coords]
    args = [COORD_ATOMS[k] for k in cidx]
    for d in range(1, n_dep + 1):
        args += [Jet(d, False), Jet(d, True)]
    xi = {k: Expr.atom(FuncApp(name, args, None, name)) for k, name in zip(cidx, xi_names)}
    phi = {}
    for d, (p, cp) in enumerate(zip(phi_names, cphi_names), start=1):
        phi[(d, False)] = Expr.atom(FuncApp(p, args, None, cp))
        phi[(d, True)] = Expr.atom(FuncApp(cp, args, None, p))
    return JetVectorField(xi, phi, cidx)
