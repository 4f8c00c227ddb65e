"""Numeric evaluation and the randomized zero oracle.

Sampling ranges:
  real parameters   uniform in [0.5, 2]
  complex parameter modulus in [0.5, 2], uniform phase; its partner is the conjugate
  coordinates       uniform in [-2, 2]
  jet symbols       uniform in the complex disk of radius 2
A sample is rejected and redrawn when a value is not finite, a negative power
hits |v| < 1e-10, or a tan argument has |cos| < 1e-3.  sqrt and arctan use the
numpy principal branches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Atom, Expr, Fn, FuncApp, ImagUnit, Jet, Paren, Sym

TOL = 1e-9
RESAMPLE_CAP = 100
DEFAULT_SEED = 42
DEFAULT_TRIALS = 20


class UnboundSymbolError(KeyError):
    pass


class SingularSampleError(RuntimeError):
    pass


_NP_FN = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "tan": np.tan,
    "arctan": np.arctan,
}


class Evaluator:
    """Vectorized evaluation over a batch of sample points."""

    def __init__(self, env: dict, n: int):
        self.env = env
        self.n = n
        self.cache: dict = {}
        self.bad = np.zeros(n, dtype=bool)

    def atom(self, a: Atom):
        v = self.cache.get(a)
        if v is not None:
            return v
        if isinstance(a, ImagUnit):
            v = np.full(self.n, 1j)
        elif isinstance(a, Sym) and a.kind == "const":
            v = np.full(self.n, math.pi + 0j)
        elif isinstance(a, (Sym, Jet)):
            if a not in self.env:
                raise UnboundSymbolError(a.name)
            v = np.broadcast_to(np.asarray(self.env[a], dtype=complex), (self.n,))
        elif isinstance(a, Fn):
            arg, _ = self.expr(a.arg)
            if a.name == "tan":
                self.bad |= np.abs(np.cos(arg)) < 1e-3
            with np.errstate(all="ignore"):
                v = _NP_FN[a.name](arg)
        elif isinstance(a, Paren):
            v, _ = self.expr(a.base)
        elif isinstance(a, FuncApp):
            raise ValueError(f"unknown function {a.name} must be eliminated before evaluation")
        else:
            raise TypeError(a)
        self.cache[a] = v
        return v

    def power(self, a: Atom, p: int):
        key = (a, p)
        v = self.cache.get(key)
        if v is not None:
            return v
        base = self.atom(a)
        if p < 0:
            self.bad |= np.abs(base) < 1e-10
            with np.errstate(all="ignore"):
                v = 1.0 / base if p == -1 else base ** p
        else:
            v = base if p == 1 else base ** p
        self.cache[key] = v
        return v

    def expr(self, E: Expr):
        total = np.zeros(self.n, dtype=complex)
        scale = np.zeros(self.n)
        for m, c in E.terms.items():
            t = np.full(self.n, float(c) + 0j)
            for a, p in m:
                t = t * self.power(a, p)
            total = total + t
            scale = np.maximum(scale, np.abs(t))
        return total, scale


def evaluate(E: Expr, env: dict, n: int):
    ev = Evaluator(env, n)
    with np.errstate(all="ignore"):
        val, scale = ev.expr(E)
    bad = ev.bad | ~np.isfinite(val) | ~np.isfinite(scale)
    return val, scale, bad


def eval_numeric(E: Expr, point: dict) -> complex:
    """Evaluate at one point; keys may be atoms or names."""
    env = {}
    by_name = {getattr(a, "name", None): a for a in E.atoms() if isinstance(a, (Sym, Jet))}
    for k, v in point.items():
        if isinstance(k, Atom):
            env[k] = v
        elif k in by_name:
            env[by_name[k]] = v
    val, _, _ = evaluate(E, env, 1)
    return complex(val[0])


# ---------------------------------------------------------------- sampling


@dataclass
class Domains:
    """Sampling ranges; overrides map a symbol name to (lo, hi)."""

    param: tuple = (0.5, 2.0)
    coord: tuple = (-2.0, 2.0)
    jet_radius: float = 2.0
    overrides: dict = field(default_factory=dict)


DEFAULT_DOMAINS = Domains()


def sample_env(atoms, rng: np.random.Generator, n: int, domains: Domains = DEFAULT_DOMAINS) -> dict:
    env = {}
    for a in sorted(atoms, key=lambda x: x.key):
        if a in env:
            continue
        if isinstance(a, Jet):
            r = domains.jet_radius * np.sqrt(rng.uniform(0, 1, n))
            th = rng.uniform(0, 2 * np.pi, n)
            env[a] = r * np.exp(1j * th)
        elif isinstance(a, Sym):
            lo, hi = domains.overrides.get(a.name, domains.coord if a.kind == "coord" else domains.param)
            if a.conj_name:
                rep = min(a, a.partner(), key=lambda s: s.name)
                mod = rng.uniform(lo, hi, n)
                th = rng.uniform(0, 2 * np.pi, n)
                z = mod * np.exp(1j * th)
                env[rep] = z
                env[rep.partner()] = np.conj(z)
            else:
                env[a] = rng.uniform(lo, hi, n) + 0j
    return env


@dataclass
class ZeroResult:
    ok: bool
    value: complex = 0j
    scale: float = 0.0
    witness: dict | None = None

    def __bool__(self):
        return self.ok


def is_zero(E: Expr, seed: int = DEFAULT_SEED, trials: int = DEFAULT_TRIALS,
            domains: Domains = DEFAULT_DOMAINS, extra_atoms=()) -> ZeroResult:
    """Randomized zero test with tolerance |v| <= 1e-9 (1 + max term magnitude)."""
    if not E.terms:
        return ZeroResult(True)
    if any(isinstance(a, FuncApp) for a in E.atoms()):
        raise ValueError("expression still contains unknown functions")
    rng = np.random.default_rng(seed)
    atoms = set(E.free) | set(extra_atoms)
    env = sample_env(atoms, rng, trials, domains)
    val, scale, bad = evaluate(E, env, trials)
    for _ in range(RESAMPLE_CAP):
        if not bad.any():
            break
        idx = np.nonzero(bad)[0]
        fresh = sample_env(atoms, rng, len(idx), domains)
        for a in env:
            arr = np.array(env[a], dtype=complex)
            arr[idx] = fresh[a]
            env[a] = arr
        val, scale, bad = evaluate(E, env, trials)
    else:
        if bad.any():
            raise SingularSampleError("could not find regular sample points")
    err = np.abs(val) - TOL * (1.0 + scale)
    k = int(np.argmax(err))
    if err[k] <= 0:
        return ZeroResult(True, complex(val[k]), float(scale[k]))
    witness = {a.name: complex(env[a][k]) for a in sorted(env, key=lambda x: x.key)}
    return ZeroResult(False, complex(val[k]), float(scale[k]), witness)
