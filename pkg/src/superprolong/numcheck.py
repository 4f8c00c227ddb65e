"""Numeric checks that symmetries map solutions to solutions.

Finite transformations are the flows of the generators X = xi.d - M:
  d x~/d lam = xi(x~),  d U/d lam = M(x~) U,  U(0) = 1,
and a solution Psi maps to Psi~(x~) = U(x, lam) Psi(x) with x the pre-image
of x~.  Multipliers below are closed-form integrals of these equations and
take the pre-image point.  Inverse maps are the flows at -lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import core
from .expr.core import Expr, Jet, Sym
from .expr.oracle import DEFAULT_SEED, Evaluator, sample_env
from .expr.parse import parse
from .operator import MatrixDiffOp, apply, compose
from .prolong import JetVectorField

FD_STEP = 1e-3
VF_STEP = 1e-4
SAFE_WINDOW = 0.5
COORD_BOX = {"t": (-2.0, 2.0), "x": (-1.5, 1.5), "y": (-1.5, 1.5)}


# ---------------------------------------------------------------- numeric model


class NumericModel:
    """A model with parameters fixed to one random draw."""

    def __init__(self, m, seed: int = DEFAULT_SEED, values: dict | None = None):
        self.m = m
        rng = np.random.default_rng(seed)
        params = [s for s in m.ctx.symbols.values() if isinstance(s, Sym) and s.kind == "param"]
        env = sample_env(params, rng, 1, m.domains)
        self.params = {a: complex(v[0]) for a, v in env.items()}
        for name, v in (values or {}).items():
            a = m.ctx.symbols[name]
            self.params[a] = complex(v)
            if a.conj_name:
                self.params[a.partner()] = complex(v).conjugate()
        self.coord_atoms = {c: m.ctx.symbols[c] for c in m.coords}

    def val(self, text: str) -> complex:
        return complex(self.eval(parse(text, self.m.ctx), {}, 1)[0])

    def eval(self, E: Expr, pts: dict, n: int) -> np.ndarray:
        env = {a: np.full(n, v) for a, v in self.params.items()}
        for c, arr in pts.items():
            env[self.coord_atoms[c]] = np.asarray(arr, dtype=complex)
        ev = Evaluator(env, n)
        with np.errstate(all="ignore"):
            v, _ = ev.expr(E)
        return v

    def psi(self, sol: list, pts: dict) -> np.ndarray:
        n = len(next(iter(pts.values())))
        return np.stack([self.eval(c, pts, n) for c in sol], axis=1)


def _npts(pts: dict) -> int:
    return len(next(iter(pts.values())))


def sample_points(coords, rng: np.random.Generator, n: int) -> dict:
    return {c: rng.uniform(*COORD_BOX[c], n) for c in coords}


# ---------------------------------------------------------------- transformations


@dataclass
class FiniteTransformation:
    """One-parameter group generated by `generator`.

    forward(pts, lam) and inverse(pts, lam) map coordinate dicts; multiplier
    (pts, lam) returns the (P, N, N) factor evaluated at the pre-image.
    """

    name: str
    generator: str
    n: int
    forward: Callable
    multiplier: Callable
    inverse: Callable | None = None
    window: float = SAFE_WINDOW
    note: str = ""
    coords: tuple = ("t", "x")

    def __post_init__(self):
        if self.inverse is None:
            self.inverse = lambda pts, lam: self.forward(pts, -lam)

    def transformed(self, nm: NumericModel, sol: list, pts: dict, lam: float) -> np.ndarray:
        pre = self.inverse(pts, lam)
        U = self.multiplier(pre, lam)
        return np.einsum("pij,pj->pi", U, nm.psi(sol, pre))


def _same(pts: dict) -> dict:
    return {k: np.array(v, dtype=float) for k, v in pts.items()}


def _shift(c: str, amount):
    def f(pts, lam):
        out = _same(pts)
        out[c] = out[c] + lam * (amount(pts) if callable(amount) else amount)
        return out
    return f


def _scalar_mult(n: int, phase: Callable):
    def f(pts, lam):
        v = np.asarray(phase(pts, lam), dtype=complex) * np.ones(_npts(pts))
        return v[:, None, None] * np.eye(n)[None]
    return f


def _diag_mult(diag: Callable):
    def f(pts, lam):
        d = [np.asarray(x, dtype=complex) * np.ones(_npts(pts)) for x in diag(pts, lam)]
        out = np.zeros((_npts(pts), len(d), len(d)), dtype=complex)
        for k, x in enumerate(d):
            out[:, k, k] = x
        return out
    return f


def _nilpotent_mult(n: int, entries: Callable):
    """1 + lam * N(pts) for a nilpotent N given as {(r, c): values}."""
    def f(pts, lam):
        P = _npts(pts)
        out = np.tile(np.eye(n, dtype=complex), (P, 1, 1))
        for (r, c), v in entries(pts).items():
            out[:, r, c] += lam * v
        return out
    return f


def _identity(pts, lam):
    return _same(pts)


def _sl2_flow(tau, lam):
    """tan tau~ = e^lam tan tau on the branch continuous in tau; returns (tau~, D, J)."""
    a = np.arctan2(np.exp(lam) * np.sin(tau), np.cos(tau))
    tt = a + 2 * np.pi * np.round((tau - a) / (2 * np.pi))
    D = np.cos(tau) ** 2 + np.exp(2 * lam) * np.sin(tau) ** 2
    return tt, D, np.exp(lam) / D


def oscillator_transformations(nm: NumericModel) -> dict:
    M, w = nm.val("M").real, nm.val("w").real

    def sl2(offset):
        def fwd(pts, lam):
            tau = w * pts["t"] - offset
            tt, _, J = _sl2_flow(tau, lam)
            return {"t": (tt + offset) / w, "x": pts["x"] * np.sqrt(J)}

        def mult(pts, lam):
            tau = w * pts["t"] - offset
            tt, D, J = _sl2_flow(tau, lam)
            s, c = np.sin(tau), np.cos(tau)
            f = J ** -0.25 * np.exp(-1j * M * w * pts["x"] ** 2 * s * c * (np.exp(2 * lam) - 1) / (2 * D))
            ph = np.exp(0.5j * (tt - tau))
            return _diag_mult(lambda p, l: (f * ph, f / ph))(pts, lam)
        return fwd, mult

    f1, m1 = sl2(0.0)
    f2, m2 = sl2(math.pi / 4)
    T = {
        "X1": FiniteTransformation("X1", "X1", 2, f1, m1, note="tan(w t~) = e^lam tan(w t)"),
        "X2": FiniteTransformation("X2", "X2", 2, f2, m2, note="X1 flow in w t - pi/4"),
        "X3": FiniteTransformation("X3", "X3", 2, _shift("t", 1.0),
                                   _diag_mult(lambda p, l: (np.exp(0.5j * w * l), np.exp(-0.5j * w * l)))),
        "X4": FiniteTransformation(
            "X4", "X4", 2, _shift("x", lambda p: np.cos(w * p["t"])),
            _scalar_mult(2, lambda p, l: np.exp(-1j * M * w * np.sin(w * p["t"])
                                                * (p["x"] * l + l * l * np.cos(w * p["t"]) / 2)))),
        "X5": FiniteTransformation(
            "X5", "X5", 2, _shift("x", lambda p: np.sin(w * p["t"])),
            _scalar_mult(2, lambda p, l: np.exp(1j * M * w * np.cos(w * p["t"])
                                                * (p["x"] * l + l * l * np.sin(w * p["t"]) / 2)))),
        "X6": FiniteTransformation("X6", "X6", 2, _identity, _scalar_mult(2, lambda p, l: np.exp(1j * l))),
        "X7": FiniteTransformation("X7", "X7", 2, _identity,
                                   _nilpotent_mult(2, lambda p: {(0, 1): np.exp(1j * w * p["t"])})),
        "X8": FiniteTransformation("X8", "X8", 2, _identity,
                                   _nilpotent_mult(2, lambda p: {(1, 0): np.exp(-1j * w * p["t"])})),
        "X9": FiniteTransformation("X9", "X9", 2, _identity,
                                   _diag_mult(lambda p, l: (np.exp(-l), np.exp(l)))),
        "X10": FiniteTransformation("X10", "X10", 2, _identity,
                                    _nilpotent_mult(2, lambda p: {(0, 1): -1j * np.exp(1j * w * p["t"])})),
        "X11": FiniteTransformation("X11", "X11", 2, _identity,
                                    _nilpotent_mult(2, lambda p: {(1, 0): -1j * np.exp(-1j * w * p["t"])})),
        "X12": FiniteTransformation("X12", "X12", 2, _identity,
                                    _diag_mult(lambda p, l: (np.exp(1j * l), np.exp(-1j * l)))),
        "X13": FiniteTransformation("X13", "X13", 2, _identity, _scalar_mult(2, lambda p, l: np.exp(l))),
    }
    return T


def _rotate(pts, lam):
    out = _same(pts)
    c, s = math.cos(lam), math.sin(lam)
    out["x"] = pts["x"] * c - pts["y"] * s
    out["y"] = pts["x"] * s + pts["y"] * c
    return out


def _landau_common(nm: NumericModel, n: int) -> dict:
    eB = nm.val("e*B").real
    rot = np.diag([1, -1] * (n // 2)).astype(float)
    c3 = ("t", "x", "y")
    return {
        "X2": FiniteTransformation("X2", "X2", n, _rotate,
                                   _diag_mult(lambda p, l: tuple(np.exp(-0.5j * l * s) for s in np.diag(rot))),
                                   coords=c3, note="rotation with spin phase"),
        "X3": FiniteTransformation("X3", "X3", n, _shift("x", 1.0),
                                   _scalar_mult(n, lambda p, l: np.exp(0.5j * eB * p["y"] * l)), coords=c3),
        "X4": FiniteTransformation("X4", "X4", n, _shift("y", 1.0),
                                   _scalar_mult(n, lambda p, l: np.exp(-0.5j * eB * p["x"] * l)), coords=c3),
        "X5": FiniteTransformation("X5", "X5", n, _identity, _scalar_mult(n, lambda p, l: np.exp(1j * l)),
                                   coords=c3),
        "X6": FiniteTransformation("X6", "X6", n, _identity, _scalar_mult(n, lambda p, l: np.exp(l)), coords=c3),
    }


def jc_transformations(nm: NumericModel) -> dict:
    T = {"X1": FiniteTransformation("X1", "X1", 2, _shift("t", 1.0), _scalar_mult(2, lambda p, l: 1.0),
                                    coords=("t", "x", "y"))}
    T.update(_landau_common(nm, 2))
    return T


def jc_generalized_transformations(nm: NumericModel) -> dict:
    wab = nm.val("wab").real
    ep = nm.val("exp(i*phi)")
    c3 = ("t", "x", "y")
    gam = (1, 1, -1, -1)
    T = {"X1": FiniteTransformation("X1", "X1", 4, _shift("t", 1.0),
                                    _diag_mult(lambda p, l: tuple(np.exp(0.5j * l * wab * g) for g in gam)),
                                    coords=c3)}
    T.update(_landau_common(nm, 4))

    def up(k):
        return lambda p: {(0, 2): k * np.exp(1j * wab * p["t"]), (1, 3): k * ep * np.exp(1j * wab * p["t"])}

    def down(k):
        return lambda p: {(2, 0): k * np.exp(-1j * wab * p["t"]),
                          (3, 1): k * np.conj(ep) * np.exp(-1j * wab * p["t"])}

    T["X7"] = FiniteTransformation("X7", "X7", 4, _identity, _nilpotent_mult(4, up(1)), coords=c3)
    T["X8"] = FiniteTransformation("X8", "X8", 4, _identity, _nilpotent_mult(4, down(1)), coords=c3)
    T["X9"] = FiniteTransformation("X9", "X9", 4, _identity,
                                   _diag_mult(lambda p, l: tuple(np.exp(-l * g) for g in gam)), coords=c3)
    T["X10"] = FiniteTransformation("X10", "X10", 4, _identity, _nilpotent_mult(4, up(-1j)), coords=c3)
    T["X11"] = FiniteTransformation("X11", "X11", 4, _identity, _nilpotent_mult(4, down(-1j)), coords=c3)
    T["X12"] = FiniteTransformation("X12", "X12", 4, _identity,
                                    _diag_mult(lambda p, l: tuple(np.exp(-1j * l * g) for g in gam)), coords=c3)
    return T


CATALOG = {
    "susy_oscillator": oscillator_transformations,
    "jc": jc_transformations,
    "jc_generalized": jc_generalized_transformations,
}


def transformations(nm: NumericModel) -> dict:
    """Finite transformations of the model family, keyed by generator name."""
    family = nm.m.doc.get("family", nm.m.name)
    if family not in CATALOG:
        return {}
    return CATALOG[family](nm)


# ---------------------------------------------------------------- residuals


@dataclass
class Residual:
    value: float
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


def generator_residual(m, G, sol: list, seed: int = DEFAULT_SEED, points: int = 50) -> Residual:
    """max |(i d_t - H) G Psi| over random parameter and coordinate draws."""
    op = G.op if hasattr(G, "op") else G
    out = apply(m.schrodinger(), apply(op, sol))
    rng = np.random.default_rng(seed)
    atoms = set()
    for e in out:
        atoms |= e.free
    env = sample_env(atoms, rng, points, m.domains)
    worst, arg, which = 0.0, 0, 0
    for j, e in enumerate(out):
        if not e.terms:
            continue
        ev = Evaluator(env, points)
        with np.errstate(all="ignore"):
            v, _ = ev.expr(e)
        k = int(np.nanargmax(np.abs(v)))
        if abs(v[k]) > worst:
            worst, arg, which = float(abs(v[k])), k, j
    witness = None
    if worst > 0:
        witness = {"component": which + 1}
        witness.update({a.name: complex(v[arg]) for a, v in sorted(env.items(), key=lambda kv: kv[0].key)})
    return Residual(worst, witness)


_STENCIL = {
    0: ((0,), (1.0,)),
    1: ((-2, -1, 1, 2), (1 / 12, -8 / 12, 8 / 12, -1 / 12)),
    2: ((-2, -1, 0, 1, 2), (-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12)),
}


def _stencil(mi, coords, h):
    """Offsets and weights of the tensor-product 5-point stencil for d^mi."""
    items = [((), 1.0)]
    for k, c in enumerate(coords):
        order = mi[k]
        offs, ws = _STENCIL[order]
        items = [(o + ((c, d * h),), w * wk / h ** order) for o, w in items for d, wk in zip(offs, ws)]
    return items


def _derivatives(field_fn, centers: dict, mis, coords, h):
    """Richardson-extrapolated 5-point derivatives {mi: (P, N)} of field_fn at centers."""
    P = _npts(centers)
    jobs = []
    for mi in mis:
        for hh in (h, h / 2):
            for offs, wgt in _stencil(mi, coords, hh):
                jobs.append((mi, hh, offs, wgt))
    big = {c: np.concatenate([centers[c] + dict(offs).get(c, 0.0) for _, _, offs, _ in jobs]) for c in coords}
    vals = field_fn(big)
    acc: dict = {}
    for k, (mi, hh, _, wgt) in enumerate(jobs):
        acc[(mi, hh)] = acc.get((mi, hh), 0) + wgt * vals[k * P:(k + 1) * P]
    out = {}
    for mi in mis:
        order = sum(mi)
        if order == 0:
            out[mi] = acc[(mi, h)]
        else:
            out[mi] = (16 * acc[(mi, h / 2)] - acc[(mi, h)]) / 15
    return out


def pde_residual(nm: NumericModel, field_fn, centers: dict, h: float = FD_STEP):
    """(i d_t - H) applied to a numeric field by finite differences; returns (res, values)."""
    m = nm.m
    coords = m.coords
    H = m.hamiltonian
    mis = {(1,) + (0,) * (len(coords) - 1), (0,) * len(coords)}
    for _, _, mi, _ in H.items():
        mis.add(tuple(mi[:len(coords)]))
    mis = sorted(mis)
    D = _derivatives(field_fn, centers, mis, coords, h)
    P = _npts(centers)
    dt = (1,) + (0,) * (len(coords) - 1)
    res = 1j * D[dt]
    for r, c, mi, coeff in H.items():
        cv = nm.eval(coeff, centers, P)
        res[:, r] = res[:, r] - cv * D[tuple(mi[:len(coords)])][:, c]
    return res, D[(0,) * len(coords)]


def finite_residual(m, T: FiniteTransformation, lam: float, sol: list, seed: int = DEFAULT_SEED,
                    points: int = 100, h: float = FD_STEP, nm: NumericModel | None = None) -> Residual:
    """max |PDE residual of the transformed solution| / max |transformed solution|."""
    if abs(lam) > T.window:
        raise ValueError(f"lambda {lam} outside the safe window |lambda| <= {T.window}")
    nm = nm or NumericModel(m, seed)
    rng = np.random.default_rng(seed + 1)
    centers = sample_points(m.coords, rng, points)

    def field_fn(pts):
        return T.transformed(nm, sol, pts, lam)

    res, vals = pde_residual(nm, field_fn, centers, h)
    scale = float(np.max(np.abs(vals)))
    if not np.isfinite(scale) or scale == 0:
        raise ValueError("transformed solution vanishes or is not finite on the sample")
    err = np.abs(res).max(axis=1)
    k = int(np.argmax(err))
    witness = {c: float(centers[c][k]) for c in m.coords}
    return Residual(float(err[k] / scale), witness, {"scale": scale})


def group_law(T: FiniteTransformation, lam1: float, lam2: float, seed: int = DEFAULT_SEED,
              points: int = 100) -> float:
    """max |T(l1) o T(l2) - T(l1 + l2)| on coordinates and multiplier entries."""
    for lam in (lam1, lam2, lam1 + lam2):
        if abs(lam) > T.window:
            raise ValueError(f"lambda {lam} outside the safe window |lambda| <= {T.window}")
    rng = np.random.default_rng(seed)
    p = sample_points(T.coords, rng, points)
    p2 = T.forward(p, lam2)
    p12 = T.forward(p2, lam1)
    direct = T.forward(p, lam1 + lam2)
    dev = max(float(np.max(np.abs(p12[c] - direct[c]))) for c in T.coords)
    U = np.einsum("pij,pjk->pik", T.multiplier(p2, lam1), T.multiplier(p, lam2))
    dev = max(dev, float(np.max(np.abs(U - T.multiplier(p, lam1 + lam2)))))
    return dev


def inverse_deviation(T: FiniteTransformation, lam: float, seed: int = DEFAULT_SEED, points: int = 100) -> float:
    rng = np.random.default_rng(seed)
    p = sample_points(T.coords, rng, points)
    back = T.inverse(T.forward(p, lam), lam)
    return max(float(np.max(np.abs(back[c] - p[c]))) for c in T.coords)


def identity_deviation(T: FiniteTransformation, seed: int = DEFAULT_SEED, points: int = 100) -> float:
    rng = np.random.default_rng(seed)
    p = sample_points(T.coords, rng, points)
    q = T.forward(p, 0.0)
    dev = max(float(np.max(np.abs(q[c] - p[c]))) for c in T.coords)
    return max(dev, float(np.max(np.abs(T.multiplier(p, 0.0) - np.eye(T.n)[None]))))


def consistency_vector_field(T: FiniteTransformation, v: JetVectorField, nm: NumericModel,
                             seed: int = DEFAULT_SEED, points: int = 20, step: float = VF_STEP) -> float:
    """Compare d/dlam at 0 of the coordinate map and multiplier with xi and Phi of v."""
    rng = np.random.default_rng(seed)
    p = sample_points(T.coords, rng, points)
    fp, fm = T.forward(p, step), T.forward(p, -step)
    dev = 0.0
    index = {"t": 0, "x": 1, "y": 2}
    for c in T.coords:
        num = (fp[c] - fm[c]) / (2 * step)
        xi = nm.eval(v.xi_of(index[c]), p, points)
        dev = max(dev, float(np.max(np.abs(num - xi))))
    dU = (T.multiplier(p, step) - T.multiplier(p, -step)) / (2 * step)
    for r in range(T.n):
        phi = v.phi.get((r + 1, False), core.ZERO)
        for c in range(T.n):
            Mrc = core.differentiate(phi, Jet(c + 1))
            dev = max(dev, float(np.max(np.abs(dU[:, r, c] - nm.eval(Mrc, p, points)))))
    return dev


def field_of(m, name: str) -> JetVectorField:
    coords = [{"t": 0, "x": 1, "y": 2}[c] for c in m.coords]
    return JetVectorField.from_operator(m.op(name), coords)
