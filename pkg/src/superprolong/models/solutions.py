"""Exact solutions built by applying creation operators to Gaussian ground states."""

from __future__ import annotations

from ..expr import core
from ..expr.core import Expr
from ..expr.parse import parse, parse_ast
from ..operator import eval_node, sop_apply

MAX_LEVEL = 3


def _ex(spec, text: str) -> Expr:
    return parse(text, spec.ctx)


def _act(spec, op_text: str, f: Expr, times: int = 1) -> Expr:
    op = eval_node(parse_ast(op_text), spec.ctx, spec.operators, op_text)
    for _ in range(times):
        f = sop_apply(op, f)
    return f


def _phase(spec, energy: Expr) -> Expr:
    return core.exp(-core.I * energy * _ex(spec, "t"))


def oscillator(spec, n: int) -> list:
    g = _ex(spec, "sqrt(sqrt(M*w/pi))*exp(-M*w*x^2/2)")
    phi = _act(spec, "axd", g, n)
    w = _ex(spec, "w")
    return [
        (f"n={n} top", [phi * _phase(spec, n * w), core.ZERO]),
        (f"n={n} bottom", [core.ZERO, phi * _phase(spec, (n + 1) * w)]),
    ]


def _landau(spec, n: int) -> Expr:
    return _act(spec, "Acal0d", _ex(spec, "exp(-e*B*(x^2+y^2)/4)"), n)


def pauli(spec, n: int) -> list:
    wt = _ex(spec, "wt")
    out = []
    phi = _landau(spec, n)
    out.append((f"n={n} top", [phi * _phase(spec, n * wt), core.ZERO]))
    out.append((f"n={n} bottom", [core.ZERO, phi * _phase(spec, (n + 1) * wt)]))
    if n:
        psi = _act(spec, "Ap0", _landau(spec, 0), n)
        out.append((f"A+^{n} top", [psi, core.ZERO]))
        out.append((f"A+^{n} bottom", [core.ZERO, psi * _phase(spec, wt)]))
    return out


def jc_pair(spec, n: int, kappa: Expr, kappabar: Expr, s: Expr | None = None) -> list:
    """Ground state (n = 0) and the two doublet states of level n for H_JC(kappa)."""
    wt = _ex(spec, "wt")
    if s is None:
        s = core.sqrt((n + 1) * kappa * kappabar)
    out = []
    if n == 0:
        out.append(("ground", [_landau(spec, 0), core.ZERO]))
    else:
        out.append((f"A+^{n} ground", [_act(spec, "Ap0", _landau(spec, 0), n), core.ZERO]))
    lo, hi = _landau(spec, n), _landau(spec, n + 1)
    for sign, tag in ((1, "+"), (-1, "-")):
        energy = wt * (n + 1) + sign * s
        ph = _phase(spec, energy)
        out.append((f"doublet n={n} {tag}", [kappa * hi * ph, sign * s * lo * ph]))
    return out


def jc(spec, n: int) -> list:
    return jc_pair(spec, n, _ex(spec, "kappa"), _ex(spec, "kappabar"))


def jc_generalized(spec, n: int) -> list:
    kappa, kappabar = _ex(spec, "kappa"), _ex(spec, "kappabar")
    t = _ex(spec, "t")
    out = []
    shift1 = core.exp(core.I * _ex(spec, "w*alpha") * t)
    for label, (a, b) in jc_pair(spec, n, kappa, kappabar):
        out.append((f"block 1 {label}", [a * shift1, b * shift1, core.ZERO, core.ZERO]))
    shift2 = core.exp(core.I * _ex(spec, "w*beta") * t)
    ep, em = _ex(spec, "exp(i*phi)"), _ex(spec, "exp(-i*phi)")
    for label, (a, b) in jc_pair(spec, n, kappa * ep, kappabar * em, core.sqrt((n + 1) * kappa * kappabar)):
        out.append((f"block 2 {label}", [core.ZERO, core.ZERO, a * shift2, b * shift2]))
    return out


def jc_standard_susy(spec, n: int) -> list:
    wt = _ex(spec, "wt")
    out = []
    for label, (a, b) in jc_pair(spec, n, core.I * wt, -core.I * wt, core.sqrt(Expr.const(n + 1)) * wt):
        out.append((f"block 1 {label}", [a, b, core.ZERO, core.ZERO]))
        c = _act(spec, "Acal0", a) + core.I * b
        d = _act(spec, "Acal0", b)
        if c.terms or d.terms:
            out.append((f"block 2 {label}", [core.ZERO, core.ZERO, c, d]))
    return out


BUILDERS = {
    "susy_oscillator": oscillator,
    "pauli_2d": pauli,
    "jc": jc,
    "jc_generalized": jc_generalized,
    "jc_standard_susy": jc_standard_susy,
}


def exact_solutions(spec, n: int) -> list:
    """Solutions at excitation level n (0 <= n <= 3) as (label, components)."""
    if not 0 <= n <= MAX_LEVEL:
        raise ValueError(f"excitation level must be in 0..{MAX_LEVEL}")
    family = spec.doc.get("family", spec.name)
    if family not in BUILDERS:
        raise ValueError(f"no solution builder for model family {family!r}")
    return BUILDERS[family](spec, n)
