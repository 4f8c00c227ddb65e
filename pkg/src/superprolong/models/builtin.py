"""Built-in model documents.

Generators follow the operator convention X = xi.d - M where the
infinitesimal field acts on the wave function as Psi -> M Psi.  With it
operator commutators reproduce vector field brackets.
"""

from __future__ import annotations

from .solutions import BUILDERS
from .spec import ModelError, load_doc, solution_strings

# ---------------------------------------------------------------- helpers


def _gens(ops: list, first: int = 1) -> list:
    return [{"name": f"X{k + first}", "op": op} for k, op in enumerate(ops)]


def _cells(rows: dict) -> dict:
    return {f"{r},{c}": v for r, row in rows.items() for c, v in row.items()}


def _prod(name: str, factors: list, scale: str = "1", symmetry: bool = True) -> dict:
    return {"name": name, "factors": factors, "scale": scale, "symmetry": symmetry}


def _expr(name: str, text: str, symmetry: bool = True) -> dict:
    return {"name": name, "expr": text, "symmetry": symmetry}


def _rel(name: str, lhs: str, rhs: str = "0", mode: str = "off_shell", group: str = "relations", **kw) -> dict:
    return {"name": name, "lhs": lhs, "rhs": rhs, "mode": mode, "group": group, **kw}


LANDAU_OPS = {
    "HL": "(-Dx^2 - Dy^2 + i*e*B*(x*Dy - y*Dx) + e^2*B^2*(x^2 + y^2)/4)/(2*M)",
    "Acal0": "(-i*Dx + Dy - i*e*B/2*(x + i*y))/sqrt(2*e*B)",
    "Acal0d": "(-i*Dx - Dy + i*e*B/2*(x - i*y))/sqrt(2*e*B)",
    "Am0": "(-i*Dx - Dy - i*e*B/2*(x - i*y))/sqrt(2*e*B)",
    "Ap0": "(-i*Dx + Dy + i*e*B/2*(x + i*y))/sqrt(2*e*B)",
}

LANDAU_DEFS = {"w": "e*B/(2*M)", "wt": "e*B/M"}

KAPPA_PHYSICAL = {"kappa": "i*e*E*sqrt(2*e*B)/(4*M^2)", "kappabar": "-i*e*E*sqrt(2*e*B)/(4*M^2)"}


# ---------------------------------------------------------------- oscillator


def oscillator_doc() -> dict:
    s2, c2, s1, c1 = "sin(2*w*t)", "cos(2*w*t)", "sin(w*t)", "cos(w*t)"
    gens = _gens([
        f"{s2}/(2*w)*Dt + x*{c2}/2*Dx + {c2}/4 + i*M*w*x^2/2*{s2} - i/4*{s2}*sigma3",
        f"-{c2}/(2*w)*Dt + x*{s2}/2*Dx + {s2}/4 - i*M*w*x^2/2*{c2} + i/4*{c2}*sigma3",
        "Dt - i*w/2*sigma3",
        f"{c1}*Dx + i*M*w*x*{s1}",
        f"{s1}*Dx - i*M*w*x*{c1}",
        "-i",
        "-exp(i*w*t)*sigmap",
        "-exp(-i*w*t)*sigmam",
        "sigma3",
        "i*exp(i*w*t)*sigmap",
        "i*exp(-i*w*t)*sigmam",
        "-i*sigma3",
        "-sigma0",
    ])
    products = [
        _expr("H0", "i*X3"),
        _expr("Cm", "w*(i*X1 - X2)"),
        _expr("Cp", "-w*(i*X1 + X2)"),
        _expr("Axm", "(X4 + i*X5)/sqrt(2*M*w)"),
        _expr("Axp", "-(X4 - i*X5)/sqrt(2*M*w)"),
        _expr("I", "i*X6"),
        _expr("Tp", "-X7"),
        _expr("Tm", "-X8"),
        _expr("Y", "X9/2"),
        _prod("Qp", ["Tp", "Axp"], "sqrt(w)"),
        _prod("Qm", ["Tm", "Axm"], "sqrt(w)"),
        _prod("Sp", ["Tp", "Axm"], "sqrt(w)"),
        _prod("Sm", ["Tm", "Axp"], "sqrt(w)"),
    ]
    t1 = _cells({
        "X1": {"X2": "1/(2*w)*X3", "X3": "2*w*X2", "X4": "-1/2*X4", "X5": "1/2*X5"},
        "X2": {"X1": "-1/(2*w)*X3", "X3": "-2*w*X1", "X4": "-1/2*X5", "X5": "-1/2*X4"},
        "X3": {"X1": "-2*w*X2", "X2": "2*w*X1", "X4": "-w*X5", "X5": "w*X4"},
        "X4": {"X1": "1/2*X4", "X2": "1/2*X5", "X3": "w*X5", "X5": "M*w*X6"},
        "X5": {"X1": "-1/2*X5", "X2": "1/2*X4", "X3": "-w*X4", "X4": "-M*w*X6"},
    })
    t2 = _cells({
        "X7": {"X8": "X9", "X9": "-2*X7", "X11": "X12", "X12": "-2*X10"},
        "X8": {"X7": "-X9", "X9": "2*X8", "X10": "-X12", "X12": "2*X11"},
        "X9": {"X7": "2*X7", "X8": "-2*X8", "X10": "2*X10", "X11": "-2*X11"},
        "X10": {"X8": "X12", "X9": "-2*X10", "X11": "-X9", "X12": "2*X7"},
        "X11": {"X7": "-X12", "X9": "2*X11", "X10": "X9", "X12": "-2*X8"},
        "X12": {"X7": "2*X10", "X8": "-2*X11", "X10": "-2*X7", "X11": "2*X8"},
    })
    osp = ["H0", "Cm", "Cp", "Y", "Qm", "Qp", "Sm", "Sp"]
    t3 = _cells({
        "H0": {"Cm": "-2*w*Cm", "Cp": "2*w*Cp", "Qm": "-w*Qm", "Qp": "w*Qp", "Sm": "w*Sm", "Sp": "-w*Sp"},
        "Cm": {"H0": "2*w*Cm", "Cp": "-w*H0", "Qp": "i*w*Sp", "Sm": "i*w*Qm"},
        "Cp": {"H0": "-2*w*Cp", "Cm": "w*H0", "Qm": "-i*w*Sm", "Sp": "-i*w*Qp"},
        "Y": {"Qm": "-Qm", "Qp": "Qp", "Sm": "-Sm", "Sp": "Sp"},
        "Qm": {"H0": "w*Qm", "Cp": "i*w*Sm", "Y": "Qm", "Qp": "H0 - w*Y", "Sp": "-2*i*Cm"},
        "Qp": {"H0": "w*Qp", "Cm": "i*w*Sp", "Y": "-Qp", "Qm": "H0 - w*Y", "Sm": "-2*i*Cp"},
        "Sm": {"H0": "-w*Sm", "Cm": "-i*w*Qm", "Y": "2*Sm", "Qp": "-2*i*Cp", "Sp": "H0 + w*Y"},
        "Sp": {"H0": "w*Sp", "Cp": "i*w*Qp", "Y": "-2*Sm", "Qm": "-2*i*Cm", "Sm": "H0 + w*Y"},
    })
    t3_suspect = {
        "Qp,H0": "antisymmetric partner H0,Qp reads w*Qp",
        "H0,Qp": "antisymmetric partner Qp,H0 reads w*Qp",
        "Qp,Cm": "antisymmetric partner Cm,Qp reads i*w*Sp",
        "Cm,Qp": "antisymmetric partner Qp,Cm reads i*w*Sp",
        "Sm,Y": "antisymmetric partner Y,Sm reads -Sm",
        "Y,Sm": "antisymmetric partner Sm,Y reads 2*Sm",
        "Sp,Y": "antisymmetric partner Y,Sp reads Sp",
        "Y,Sp": "antisymmetric partner Sp,Y reads -2*Sm",
    }
    t4 = _cells({
        "Axm": {"H0": "w*Axm", "Cp": "i*w*Axp", "Qp": "sqrt(w)*Tp", "Sm": "sqrt(w)*Tm"},
        "Axp": {"H0": "-w*Axp", "Cm": "-i*w*Axm", "Qm": "-sqrt(w)*Tm", "Sp": "-sqrt(w)*Tp"},
        "Tm": {"Y": "Tm", "Qp": "sqrt(w)*Axp", "Sp": "sqrt(w)*Axm"},
        "Tp": {"Y": "-Tp", "Qm": "sqrt(w)*Axm", "Sm": "sqrt(w)*Axp"},
    })
    rels = [_rel(f"[X13,X{k}] = 0", f"comm(X13, X{k})", group="su2") for k in range(1, 13)]
    rels += [
        _rel("{Qp,Qm} = H0 - w*Y", "acomm(Qp, Qm)", "H0 - w*Y", "on_shell", "supercharges"),
        _rel("{Qp,Qm} = H_SUSY", "acomm(Qp, Qm)", "H", group="supercharges"),
        _rel("{Sm,Sp} = H0 + w*Y", "acomm(Sm, Sp)", "H0 + w*Y", "on_shell", "supercharges"),
        _rel("{Qp,Sm} = -2i Cp", "acomm(Qp, Sm)", "-2*i*Cp", "on_shell", "supercharges"),
        _rel("Qp^2 = 0", "Qp^2", group="supercharges"),
        _rel("Qm^2 = 0", "Qm^2", group="supercharges"),
        _rel("[H_SUSY,Qp] = 0", "comm(H, Qp)", group="supercharges"),
        _rel("[H_SUSY,Qm] = 0", "comm(H, Qm)", group="supercharges"),
        _rel("[Axm,Axp] = I", "comm(Axm, Axp)", "I", group="sh22"),
        _rel("{Tm,Tp} = I", "acomm(Tm, Tp)", "I", group="sh22"),
        _rel("[ax,axd] = 1", "comm(ax, axd)", "1", group="realization"),
        _rel("H_SUSY = w(axd ax + 1/2) - w/2 sigma3", "H", "w*(axd*ax + 1/2) - w/2*sigma3", group="realization"),
        _rel("H0 = w(axd ax + 1/2)", "H0", "w*(axd*ax + 1/2)", "on_shell", "realization"),
        _rel("Cm = i w e^{2iwt} ax^2/2", "Cm", "i*w*exp(2*i*w*t)*ax^2/2", "on_shell", "realization"),
        _rel("Cp = i w e^{-2iwt} axd^2/2", "Cp", "i*w*exp(-2*i*w*t)*axd^2/2", "on_shell", "realization"),
        _rel("Cm = 2w(iX1 - X2) printed", "Cm", "2*w*(i*X1 - X2)", "on_shell", "realization", expect_pass=False,
             note="printed factor 2w doubles the table normalization"),
        _rel("Axm = e^{iwt} ax", "Axm", "exp(i*w*t)*ax", group="realization"),
        _rel("Axp = e^{-iwt} axd", "Axp", "exp(-i*w*t)*axd", group="realization"),
        _rel("Qp = sqrt(w) axd sigma+", "Qp", "sqrt(w)*axd*sigmap", group="realization"),
        _rel("Qm = sqrt(w) ax sigma-", "Qm", "sqrt(w)*ax*sigmam", group="realization"),
        _rel("Sp = sqrt(w) e^{2iwt} ax sigma+", "Sp", "sqrt(w)*exp(2*i*w*t)*ax*sigmap", group="realization"),
        _rel("Sm = sqrt(w) e^{-2iwt} axd sigma-", "Sm", "sqrt(w)*exp(-2*i*w*t)*axd*sigmam", group="realization"),
        _rel("Tp Axp = Qp/sqrt(w)", "Tp*Axp", "Qp/sqrt(w)", group="realization"),
    ]
    a1 = ("-1/4*(exp(-2*i*w*t) + 2*i*M*w*x^2*sin(2*w*t))*delta1"
          " - i/4*(exp(-2*i*w*t) - 2*M*w*x^2*cos(2*w*t))*delta2"
          " - i*M*w*x*(delta4*sin(w*t) - delta5*cos(w*t)) + delta13 + i*delta6")
    b2 = ("-1/4*(exp(2*i*w*t) + 2*i*M*w*x^2*sin(2*w*t))*delta1"
          " + i/4*(exp(2*i*w*t) + 2*M*w*x^2*cos(2*w*t))*delta2"
          " - i*M*w*x*(delta4*sin(w*t) - delta5*cos(w*t)) + delta9 + i*delta12")
    ansatz = {
        "constants": [f"delta{k}" for k in range(1, 14)],
        "free_functions": {"A0": {"component": 0}, "B0": {"component": 1}},
        "xi": {
            "t": "(delta1*sin(2*w*t) - delta2*cos(2*w*t))/(2*w) + delta3",
            "x": "(delta1*cos(2*w*t) + delta2*sin(2*w*t))*x/2 + delta4*cos(w*t) + delta5*sin(w*t)",
        },
        "phi": [
            f"A0(t,x) + ({a1})*u1 + (delta7 - i*delta10)*exp(i*w*t)*u2",
            f"B0(t,x) + (delta8 - i*delta11)*exp(-i*w*t)*u1 + ({b2})*u2",
        ],
    }
    return {
        "name": "susy_oscillator",
        "family": "susy_oscillator",
        "coordinates": ["t", "x"],
        "dependents": [{"name": "psi1", "conjugate": "cpsi1"}, {"name": "psi2", "conjugate": "cpsi2"}],
        "parameters": [{"name": "M", "positive": True}, {"name": "w", "positive": True}],
        "operators": {
            "Hosc": "-Dx^2/(2*M) + M*w^2*x^2/2",
            "ax": "(M*w*x + Dx)/sqrt(2*M*w)",
            "axd": "(M*w*x - Dx)/sqrt(2*M*w)",
        },
        "hamiltonian": "[[Hosc - w/2, 0], [0, Hosc + w/2]]",
        "grading": "sigma3",
        "generators": gens,
        "products": products,
        "dictionary": ["M*w", "sqrt(w)", "sqrt(M*w)"],
        "tables": [
            {"name": "sl2_h2", "title": "sl(2,R) + h(2)", "rows": [f"X{k}" for k in range(1, 7)],
             "cols": [f"X{k}" for k in range(1, 7)], "cells": t1},
            {"name": "su2", "title": "complex su(2)", "rows": [f"X{k}" for k in range(7, 13)],
             "cols": [f"X{k}" for k in range(7, 13)], "cells": t2, "bracket": "commutator"},
            {"name": "osp22", "title": "osp(2/2)", "rows": osp, "cols": osp, "cells": t3, "mode": "on_shell",
             "suspect": t3_suspect},
            {"name": "osp22_sh22", "title": "osp(2/2) with sh(2/2)", "rows": ["Axm", "Axp", "I", "Tm", "Tp"],
             "cols": osp, "cells": t4, "mode": "on_shell"},
        ],
        "relations": rels,
        "closures": [{"name": "osp(2/2) + sh(2/2)", "basis": osp + ["Axm", "Axp", "I", "Tm", "Tp"],
                      "mode": "on_shell", "expect_closed": True}],
        "ansatz": ansatz,
    }


# ---------------------------------------------------------------- Pauli


def pauli_doc() -> dict:
    s2, c2 = "sin(2*w*t)", "cos(2*w*t)"
    gens = _gens([
        "Dt + w*y*Dx - w*x*Dy - i*w*sigma3",
        f"{c2}*Dt - w*(x*{s2} - y*{c2})*Dx - w*(x*{c2} + y*{s2})*Dy"
        f" + i*M*w^2*(x^2 + y^2)*{c2} - w*{s2} - i*w*{c2}*sigma3",
        f"-{s2}*Dt - w*(x*{c2} + y*{s2})*Dx + w*(x*{s2} - y*{c2})*Dy"
        f" - i*M*w^2*(x^2 + y^2)*{s2} - w*{c2} + i*w*{s2}*sigma3",
        "-y*Dx + x*Dy",
        f"-{c2}/(2*w)*Dx + {s2}/(2*w)*Dy - i*M/2*(x*{s2} + y*{c2})",
        f"{s2}/(2*w)*Dx + {c2}/(2*w)*Dy - i*M/2*(x*{c2} - y*{s2})",
        "-i",
        "Dx - i*M*w*y",
        "Dy + i*M*w*x",
        "-exp(2*i*w*t)*sigmap",
        "-exp(-2*i*w*t)*sigmam",
        "sigma3",
        "i*exp(2*i*w*t)*sigmap",
        "i*exp(-2*i*w*t)*sigmam",
        "-i*sigma3",
        "-sigma0",
    ], first=0)
    r2w = "sqrt(2*w)"
    products = [
        _expr("H0", "i*X0"),
        _expr("Cm", "(X1 - i*X2)/2"),
        _expr("Cp", "(X1 + i*X2)/2"),
        _expr("L", "-i*X3"),
        _expr("Acal", "sqrt(w/M)*(i*X4 + X5)"),
        _expr("Acald", "sqrt(w/M)*(i*X4 - X5)"),
        _expr("I", "i*X6"),
        _expr("Am", "-(X8 + i*X7)/(2*sqrt(M*w))"),
        _expr("Ap", "(X8 - i*X7)/(2*sqrt(M*w))"),
        _expr("Tp", "-X9"),
        _expr("Tm", "-X10"),
        _expr("Y", "X11"),
        _prod("Qm", ["Acal", "Tm"], r2w),
        _prod("Qp", ["Acald", "Tp"], r2w),
        _prod("Sm", ["Ap", "Tm"], r2w),
        _prod("Sp", ["Am", "Tp"], r2w),
        _prod("Up", ["Ap", "Tp"], r2w),
        _prod("Um", ["Am", "Tm"], r2w),
        _prod("Vp", ["Acal", "Tp"], r2w),
        _prod("Vm", ["Acald", "Tm"], r2w),
    ]
    t5 = _cells({
        "X0": {"X1": "2*X2", "X2": "-2*w*X1", "X4": "w*X5", "X5": "-w*X4", "X7": "w*X8", "X8": "-w*X7"},
        "X1": {"X0": "-2*w*X2", "X2": "-2*w*X0", "X4": "1/2*X8", "X5": "1/2*X7", "X7": "2*w^2*X5",
               "X8": "2*w^2*X4"},
        "X2": {"X0": "2*w*X1", "X1": "2*w*X0", "X4": "-1/2*X7", "X5": "1/2*X8", "X7": "-2*w^2*X4",
               "X8": "2*w^2*X5"},
        "X3": {"X4": "X5", "X5": "-X4", "X7": "-X8", "X8": "X7"},
        "X4": {"X0": "-w*X5", "X1": "-1/2*X8", "X2": "1/2*X7", "X3": "-X5", "X5": "-M/(2*w)*X6"},
        "X5": {"X0": "w*X4", "X1": "-1/2*X7", "X2": "-1/2*X8", "X3": "X4", "X4": "M/(2*w)*X6"},
        "X7": {"X0": "-w*X8", "X1": "-2*w^2*X5", "X2": "2*w^2*X4", "X3": "X8", "X8": "-2*M*w*X6"},
        "X8": {"X0": "w*X7", "X1": "-2*w^2*X4", "X2": "-2*w^2*X5", "X3": "-X7", "X7": "2*M*w*X6"},
    })
    basis9 = [f"X{k}" for k in range(9)]
    span = ["H0", "Cm", "Cp", "L", "Y", "Acal", "Acald", "Am", "Ap", "I", "Tp", "Tm", "Qm", "Qp", "Sm", "Sp"]
    on = "on_shell"
    rels = [
        _rel("{Qm,Qp} = H0 - wL - wY", "acomm(Qm, Qp)", "H0 - w*L - w*Y", on, "supercharges"),
        _rel("{Qm,Qp} = H_P", "acomm(Qm, Qp)", "H", group="supercharges"),
        _rel("Qm^2 = 0", "Qm^2", group="supercharges"),
        _rel("Qp^2 = 0", "Qp^2", group="supercharges"),
        _rel("[H_P,Qm] = 0", "comm(H, Qm)", group="supercharges"),
        _rel("[H_P,Qp] = 0", "comm(H, Qp)", group="supercharges"),
        _rel("{Sm,Sp} = H0 + wL + wY", "acomm(Sm, Sp)", "H0 + w*L + w*Y", on, "supercharges"),
        _rel("Sm^2 = 0", "Sm^2", group="supercharges"),
        _rel("Sp^2 = 0", "Sp^2", group="supercharges"),
        _rel("[i Dt - H_P, Sm] = 0", "comm(i*Dt - H, Sm)", group="supercharges"),
        _rel("[i Dt - H_P, Sp] = 0", "comm(i*Dt - H, Sp)", group="supercharges"),
        _rel("[H0,Qp] = w Qp", "comm(H0, Qp)", "w*Qp", on, "structure"),
        _rel("[H0,Qm] = -w Qm", "comm(H0, Qm)", "-w*Qm", on, "structure"),
        _rel("[H0,Sp] = -w Sp", "comm(H0, Sp)", "-w*Sp", on, "structure"),
        _rel("[H0,Sm] = w Sm", "comm(H0, Sm)", "w*Sm", on, "structure"),
        _rel("[Cp,Qm] = i w Sm", "comm(Cp, Qm)", "i*w*Sm", on, "structure"),
        _rel("[Cm,Qp] = -i w Sp", "comm(Cm, Qp)", "-i*w*Sp", on, "structure"),
        _rel("[Y,Qp] = 2 Qp", "comm(Y, Qp)", "2*Qp", group="structure"),
        _rel("[Y,Qm] = -2 Qm", "comm(Y, Qm)", "-2*Qm", group="structure"),
        _rel("[Y,Sp] = 2 Sp", "comm(Y, Sp)", "2*Sp", group="structure"),
        _rel("[Y,Sm] = -2 Sm", "comm(Y, Sm)", "-2*Sm", group="structure"),
        _rel("{Qm,Sp} = 2i Cm", "acomm(Qm, Sp)", "2*i*Cm", on, "structure"),
        _rel("{Qp,Sm} = 2i Cp", "acomm(Qp, Sm)", "2*i*Cp", on, "structure"),
        _rel("Acal = e^{2iwt} Acal(0)", "Acal", "exp(2*i*w*t)*Acal0*sigma0", group="realization"),
        _rel("Acald = e^{-2iwt} Acald(0)", "Acald", "exp(-2*i*w*t)*Acal0d*sigma0", group="realization"),
        _rel("Am = A-(JC form)", "Am", "Am0", group="realization"),
        _rel("Ap = A+(JC form)", "Ap", "Ap0", group="realization"),
        _rel("{Um,Up}", "acomm(Um, Up)", kind="report", basis=span, mode=on, group="dynamical"),
        _rel("{Vm,Vp}", "acomm(Vm, Vp)", kind="report", basis=span, mode=on, group="dynamical"),
        _rel("Up^2 = 0", "Up^2", group="dynamical"),
        _rel("Vp^2 = 0", "Vp^2", group="dynamical"),
    ]
    return {
        "name": "pauli_2d",
        "family": "pauli_2d",
        "coordinates": ["t", "x", "y"],
        "dependents": [{"name": "psi1", "conjugate": "cpsi1"}, {"name": "psi2", "conjugate": "cpsi2"}],
        "parameters": [{"name": n, "positive": True} for n in ("M", "e", "B")],
        "definitions": dict(LANDAU_DEFS),
        "operators": dict(LANDAU_OPS),
        "hamiltonian": "HL - w*sigma3",
        "grading": "sigma3",
        "generators": gens,
        "products": products,
        "dictionary": ["M/w", "M*w", "w^2", "sqrt(2*w)", "sqrt(w/M)"],
        "tables": [
            {"name": "sl2_so2_h4", "title": "(sl(2,R) + so(2)) + h(4)", "rows": basis9, "cols": basis9, "cells": t5,
             "suspect": {"X0,X1": "antisymmetric partner X1,X0 reads -2*w*X2",
                         "X1,X0": "antisymmetric partner X0,X1 reads 2*X2"}},
        ],
        "relations": rels,
        "bracket_basis": {"names": span, "mode": "on_shell"},
    }


# ---------------------------------------------------------------- Jaynes-Cummings


def _jc_ansatz_xi() -> dict:
    return {"t": "delta1", "x": "-delta2*y + delta3", "y": "delta2*x + delta4"}


def jc_doc() -> dict:
    gens = _gens([
        "Dt",
        "-y*Dx + x*Dy + i/2*sigma3",
        "Dx - i*e*B/2*y",
        "Dy + i*e*B/2*x",
        "-i",
        "-sigma0",
    ])
    products = [
        _expr("HJC", "H"),
        _expr("J", "-i*X2"),
        _expr("Am", "(-i*X3 - X4)/sqrt(2*e*B)"),
        _expr("Ap", "(-i*X3 + X4)/sqrt(2*e*B)"),
        _expr("I", "-X6"),
        _expr("Qp", "sqrt(2*w)*Acal0d*sigmap", symmetry=False),
        _expr("Qm", "sqrt(2*w)*Acal0*sigmam", symmetry=False),
        _expr("Qd", "Qp - Qm", symmetry=False),
        _expr("Qcal", "(kappa*Qp + kappabar*Qm)/sqrt(2*wt)"),
        _expr("Qcalw", "(kappa*Qp + kappabar*Qm)/sqrt(2*w)"),
    ]
    six = [f"X{k}" for k in range(1, 7)]
    tk = _cells({
        "X2": {"X3": "-X4", "X4": "X3"},
        "X3": {"X2": "X4", "X4": "-e*B*X5"},
        "X4": {"X2": "-X3", "X3": "e*B*X5"},
    })
    lie = ["HJC", "Am", "Ap", "I", "J", "Qd"]
    rels = [
        _rel("[H_JC,J] = 0", "comm(H, J)", group="kinematical"),
        _rel("[H_JC,Am] = 0", "comm(H, Am)", group="kinematical"),
        _rel("[H_JC,Ap] = 0", "comm(H, Ap)", group="kinematical"),
        _rel("[H_JC,I] = 0", "comm(H, I)", group="kinematical"),
        _rel("[Am,Ap] = I", "comm(Am, Ap)", "I", group="kinematical"),
        _rel("Am = A-(0)", "Am", "Am0", group="kinematical"),
        _rel("Ap = A+(0)", "Ap", "Ap0", group="kinematical"),
        _rel("H_JC = H_P + kappa Acal0d sigma+ + kappabar Acal0 sigma-", "H",
             "HL - w*sigma3 + kappa*Acal0d*sigmap + kappabar*Acal0*sigmam", group="identities"),
        _rel("H_JC = wt(Acal0d Acal0 + 1/2) - wt/2 sigma3 + coupling", "H",
             "wt*(Acal0d*Acal0 + 1/2) - wt/2*sigma3 + kappa*Acal0d*sigmap + kappabar*Acal0*sigmam",
             group="identities"),
        _rel("[Acal0,Acal0d] = 1", "comm(Acal0, Acal0d)", "1", group="identities"),
        _rel("Qcal_w = kappa Acal0d sigma+ + kappabar Acal0 sigma-", "Qcalw",
             "kappa*Acal0d*sigmap + kappabar*Acal0*sigmam", group="identities"),
        _rel("[H_JC,Qcal] = 0", "comm(H, Qcal)", group="supercharges"),
        _rel("(Qp - Qm)^2 outside span", "Qd^2", kind="not_in_span", basis=lie, group="supercharges"),
        _rel("(Qp - Qm)^2 = -H_P", "Qd^2", "-(HL - w*sigma3)", group="supercharges"),
        _rel("[H_JC,Qd] = 0 (physical kappa)", "comm(H, Qd)", group="closure", substitution="physical"),
        _rel("[Qd,Am] = 0", "comm(Qd, Am)", group="closure"),
        _rel("[Qd,Ap] = 0", "comm(Qd, Ap)", group="closure"),
        _rel("[Qd,J] = 0", "comm(Qd, J)", group="closure"),
        _rel("(Qp - Qm)^2 in span at physical kappa", "Qd^2", "-H + kappa/sqrt(2*w)*Qd",
             group="closure", substitution="physical"),
    ]
    ansatz = {
        "constants": [f"delta{k}" for k in range(1, 7)],
        "free_functions": {"A0": {"component": 0}, "C0": {"component": 1}},
        "xi": _jc_ansatz_xi(),
        "phi": [
            "A0(t,x,y) + (-i*e*B/2*(delta4*x - delta3*y) - i*delta2/2 + delta6 + i*delta5)*u1",
            "C0(t,x,y) + (-i*e*B/2*(delta4*x - delta3*y) + i*delta2/2 + delta6 + i*delta5)*u2",
        ],
    }
    return {
        "name": "jc",
        "family": "jc",
        "coordinates": ["t", "x", "y"],
        "dependents": [{"name": "psi1", "conjugate": "cpsi1"}, {"name": "psi2", "conjugate": "cpsi2"}],
        "parameters": [{"name": n, "positive": True} for n in ("M", "e", "B", "E")]
        + [{"name": "kappa", "conjugate": "kappabar"}],
        "definitions": dict(LANDAU_DEFS),
        "operators": dict(LANDAU_OPS),
        "substitutions": {"physical": dict(KAPPA_PHYSICAL)},
        "hamiltonian": "HL - w*sigma3 + kappa*Acal0d*sigmap + kappabar*Acal0*sigmam",
        "grading": "sigma3",
        "generators": gens,
        "products": products,
        "dictionary": ["e*B", "kappa", "kappabar", "kappa/sqrt(w)", "kappabar/sqrt(w)"],
        "tables": [{"name": "jc_kinematical", "title": "so(2) + h(2)", "rows": six, "cols": six, "cells": tk}],
        "relations": rels,
        "closures": [
            {"name": "kinematical + Q+ - Q-, physical kappa", "basis": lie, "kind": "commutator",
             "substitution": "physical", "expect_closed": True},
            {"name": "kinematical + Q+ - Q-, generic kappa", "basis": lie, "kind": "commutator",
             "expect_closed": False},
        ],
        "bracket_basis": {"names": lie, "mode": "off_shell"},
        "ansatz": ansatz,
    }


# ---------------------------------------------------------------- generalized JC


def _num_or_text(v) -> str:
    return v if isinstance(v, str) else repr(v)


def jc_generalized_doc(alpha="alpha", beta="beta", phi="0") -> dict:
    alpha, beta, phi = _num_or_text(alpha), _num_or_text(beta), _num_or_text(phi)
    params = [{"name": n, "positive": True} for n in ("M", "e", "B", "E")]
    params.append({"name": "kappa", "conjugate": "kappabar"})
    defs = dict(LANDAU_DEFS)
    for name, val in (("alpha", alpha), ("beta", beta), ("phi", phi)):
        if val == name:
            params.append({"name": name})
        else:
            defs[name] = val
    defs["wab"] = "w*(alpha - beta)"
    ops = dict(LANDAU_OPS)
    ops.update({
        "HJC": "HL - w*sigma3 + kappa*Acal0d*sigmap + kappabar*Acal0*sigmam",
        "HJCphi": "HL - w*sigma3 + kappa*exp(i*phi)*Acal0d*sigmap + kappabar*exp(-i*phi)*Acal0*sigmam",
        "Dphi": "[[1, 0], [0, exp(i*phi)]]",
        "Dphic": "[[1, 0], [0, exp(-i*phi)]]",
        "Gam": "[[sigma0, 0], [0, -sigma0]]",
        "Qup": "Acal0d*sigmap",
        "Qum": "Acal0*sigmam",
        "T0p": "[[0, Dphi], [0, 0]]",
        "T0m": "[[0, 0], [Dphic, 0]]",
    })
    gens = _gens([
        "Dt - i*wab/2*Gam",
        "-y*Dx + x*Dy + i/2*[[sigma3, 0], [0, sigma3]]",
        "Dx - i*e*B/2*y",
        "Dy + i*e*B/2*x",
        "-i",
        "-1",
        "-exp(i*wab*t)*T0p",
        "-exp(-i*wab*t)*T0m",
        "Gam",
        "i*exp(i*wab*t)*T0p",
        "i*exp(-i*wab*t)*T0m",
        "i*Gam",
    ])
    rwt = "sqrt(wt)"
    products = [
        _expr("HH", "i*X1"),
        _expr("JJ", "-i*X2"),
        _expr("AAm", "(-i*X3 - X4)/sqrt(2*e*B)"),
        _expr("AAp", "(-i*X3 + X4)/sqrt(2*e*B)"),
        _expr("II", "-X6"),
        _expr("TTp", "-i*X10"),
        _expr("TTm", "-i*X11"),
        _expr("YY", "X9"),
        _expr("HH0", "wt*(AAp*AAm + 1/2)"),
        _expr("CCm", "i/2*wt*AAm^2"),
        _expr("CCp", "i/2*wt*AAp^2"),
        _prod("SSm", ["AAp", "TTm"], rwt),
        _prod("SSp", ["AAm", "TTp"], rwt),
        _prod("UUm", ["AAm", "TTm"], rwt),
        _prod("UUp", ["AAp", "TTp"], rwt),
        _expr("HHs", "H + wab/2*Gam", symmetry=False),
        _expr("TT0p", "T0p", symmetry=False),
        _expr("TT0m", "T0m", symmetry=False),
        _expr("QQp", f"kappabar/(2*{rwt})*T0p + {rwt}*[[0, exp(i*phi)*Qup - Qum], [0, 0]]", symmetry=False),
        _expr("QQm", f"kappa/(2*{rwt})*T0m + {rwt}*[[0, 0], [exp(-i*phi)*Qum - Qup, 0]]", symmetry=False),
        _expr("QQ0", "[[Qup - Qum, 0], [0, exp(i*phi)*Qup - exp(-i*phi)*Qum]]", symmetry=False),
    ]
    osp = ["HH0", "CCm", "CCp", "YY", "SSm", "SSp", "UUm", "UUp"]
    t6 = _cells({
        "HH0": {"CCm": "-2*wt*CCm", "CCp": "2*wt*CCp", "SSm": "wt*SSm", "SSp": "-wt*SSp", "UUm": "-wt*UUm",
                "UUp": "wt*UUp"},
        "CCm": {"HH0": "2*wt*CCm", "CCp": "-wt*HH0", "SSm": "i*wt*UUm", "UUp": "i*wt*SSp"},
        "CCp": {"HH0": "-2*wt*CCp", "CCm": "wt*HH0", "SSp": "-i*wt*UUp", "UUm": "-i*wt*SSm"},
        "YY": {"SSm": "-2*SSm", "SSp": "2*SSp", "UUm": "-2*UUm", "UUp": "2*UUp"},
        "SSm": {"HH0": "-wt*SSm", "CCm": "-i*wt*UUm", "YY": "2*SSm", "SSp": "HH0 + wt*YY/2", "UUp": "-2*i*CCp"},
        "SSp": {"HH0": "wt*SSp", "CCp": "i*wt*UUp", "YY": "-2*SSp", "SSm": "HH0 + wt*YY/2", "UUm": "-2*i*CCm"},
        "UUm": {"HH0": "wt*UUm", "CCp": "i*wt*SSm", "YY": "2*UUm", "SSp": "-2*i*CCm", "UUp": "HH0 - wt*YY/2"},
        "UUp": {"HH0": "-wt*UUp", "CCm": "-i*wt*SSp", "YY": "-2*UUp", "SSm": "-2*i*CCp", "UUm": "HH0 - wt*YY/2"},
    })
    t7 = _cells({
        "JJ": {"CCm": "-2*CCm", "CCp": "2*CCp", "SSm": "SSm", "SSp": "-SSp", "UUm": "-UUm", "UUp": "UUp"},
        "AAm": {"HH0": "wt*AAm", "CCp": "i*wt*AAp", "SSm": f"{rwt}*TTm", "UUp": f"{rwt}*TTp"},
        "AAp": {"HH0": "-wt*AAp", "CCm": "-i*wt*AAm", "SSp": f"-{rwt}*TTp", "UUm": f"-{rwt}*TTm"},
        "TTm": {"YY": "2*TTm", "SSp": f"{rwt}*AAm", "UUp": f"{rwt}*AAp"},
        "TTp": {"YY": "-2*TTp", "SSm": f"{rwt}*AAp", "UUm": f"{rwt}*AAm"},
    })
    listed = ["HH0", "CCm", "CCp", "YY", "SSm", "SSp", "UUm", "UUp", "JJ", "AAm", "AAp", "II", "TTp", "TTm"]
    rels = [_rel(f"[HH,{g}] = 0", f"comm(HH, {g})", group="central") for g in listed]
    rels += [
        _rel("HH = H_T + wab/2 Y", "HH", "H + wab/2*Gam", "on_shell", "identities"),
        _rel("{SSm,SSp} = HH0 + wt/2 YY", "acomm(SSm, SSp)", "HH0 + wt/2*YY", group="osp22"),
        _rel("{SSm,SSp} = wt diag(AAm AAp)", "acomm(SSm, SSp)", "wt*[[Am0*Ap0*sigma0, 0], [0, Ap0*Am0*sigma0]]",
             group="osp22"),
        _rel("{UUm,UUp} = HH0 - wt/2 YY", "acomm(UUm, UUp)", "HH0 - wt/2*YY", group="osp22"),
        _rel("{SSm,UUp} = -2i CCp", "acomm(SSm, UUp)", "-2*i*CCp", group="osp22"),
        _rel("{SSm,UUp} = wt AAp^2", "acomm(SSm, UUp)", "wt*AAp^2", group="osp22"),
        _rel("{SSp,UUm} = wt AAm^2", "acomm(SSp, UUm)", "wt*AAm^2", group="osp22"),
        _rel("SSm = sqrt(w) e^{-i wab t}[[0,0],[A+,0]] printed", "SSm",
             "sqrt(w)*exp(-i*wab*t)*[[0, 0], [Ap0*Dphic, 0]]", group="osp22", expect_pass=False,
             note="printed middle form uses sqrt(w) instead of sqrt(wt)"),
        _rel("[JJ,AAp] = AAp", "comm(JJ, AAp)", "AAp", group="sh22"),
        _rel("[JJ,AAm] = -AAm", "comm(JJ, AAm)", "-AAm", group="sh22"),
        _rel("[AAm,AAp] = II", "comm(AAm, AAp)", "II", group="sh22"),
        _rel("{TTm,TTp} = II", "acomm(TTm, TTp)", "II", group="sh22"),
        _rel("{QQp,QQm} = HHs", "acomm(QQp, QQm)", "HHs", group="susy", substitution="@shift"),
        _rel("[HHs,QQp] = 0", "comm(HHs, QQp)", group="susy", substitution="@shift"),
        _rel("[HHs,QQm] = 0", "comm(HHs, QQm)", group="susy", substitution="@shift"),
        _rel("[YY,QQp] = 2 QQp", "comm(Gam, QQp)", "2*QQp", group="susy", substitution="@shift"),
        _rel("[YY,QQm] = -2 QQm", "comm(Gam, QQm)", "-2*QQm", group="susy", substitution="@shift"),
        _rel("{TT0p,QQm} = kappa/(2 sqrt(wt)) II - sqrt(wt) QQ0", "acomm(TT0p, QQm)",
             f"kappa/(2*{rwt})*II - {rwt}*QQ0", group="susy", substitution="@shift"),
        _rel("{TT0m,QQp} = kappabar/(2 sqrt(wt)) II + sqrt(wt) QQ0", "acomm(TT0m, QQp)",
             f"kappabar/(2*{rwt})*II + {rwt}*QQ0", group="susy", substitution="@shift"),
        _rel("QQp^2 = 0", "QQp^2", group="susy", substitution="@shift"),
        _rel("QQm^2 = 0", "QQm^2", group="susy", substitution="@shift"),
    ]
    block = "-i*e*B/2*(delta4*x - delta3*y)"
    f_exp, g_exp = "(delta9 - i*delta11)*exp(i*wab*t)", "(delta10 - i*delta12)*exp(-i*wab*t)"

    def phis(f, g):
        return [
            f"A0(t,x,y) + ({block} - i*delta2/2 + delta7 + i*delta5)*u1 + ({f})*u3",
            f"C0(t,x,y) + ({block} + i*delta2/2 + delta7 + i*delta5)*u2 + ({f})*exp(i*phi)*u4",
            f"D0(t,x,y) + ({g})*u1 + ({block} - i*delta2/2 + delta8 + i*delta6)*u3",
            f"F0(t,x,y) + ({g})*exp(-i*phi)*u2 + ({block} + i*delta2/2 + delta8 + i*delta6)*u4",
        ]

    ansatz = {
        "constants": [f"delta{k}" for k in range(1, 13)],
        "free_functions": {"A0": {"component": 0}, "C0": {"component": 1}, "D0": {"component": 2},
                           "F0": {"component": 3}},
        "xi": _jc_ansatz_xi(),
        "phi": phis(f_exp, g_exp),
        "variants": {"constant_fg": {"phi": phis("delta9 - i*delta11", "delta10 - i*delta12"),
                                     "expect_pass": beta == "alpha"}},
    }
    subs = {"physical": dict(KAPPA_PHYSICAL)}
    if beta == "beta":
        subs["printed_shift"] = dict(KAPPA_PHYSICAL, beta="-alpha - e*E/(8*M^2*B)")
        subs["derived_shift"] = dict(KAPPA_PHYSICAL, beta="-alpha - e*E^2/(8*M^2*B)")
    name = "jc_generalized"
    if (alpha, beta, phi) != ("alpha", "beta", "0"):
        name = f"jc_generalized(alpha={alpha},beta={beta},phi={phi})"
    return {
        "name": name,
        "family": "jc_generalized",
        "coordinates": ["t", "x", "y"],
        "dependents": [{"name": f"psi{k}", "conjugate": f"cpsi{k}"} for k in range(1, 5)],
        "parameters": params,
        "definitions": defs,
        "operators": ops,
        "substitutions": subs,
        "hamiltonian": "[[HJC - w*alpha*sigma0, 0], [0, HJCphi - w*beta*sigma0]]",
        "grading": "Gam",
        "generators": gens,
        "products": products,
        "dictionary": ["wt", "sqrt(wt)", "wab", "kappa/sqrt(wt)", "kappabar/sqrt(wt)", "exp(i*phi)",
                       "exp(-i*phi)"],
        "tables": [
            {"name": "osp22", "title": "osp(2/2)", "rows": osp, "cols": osp, "cells": t6},
            {"name": "so2_osp22_sh22", "title": "(so(2) + osp(2/2)) with sh(2/2)",
             "rows": ["JJ", "AAm", "AAp", "II", "TTm", "TTp"], "cols": osp, "cells": t7},
        ],
        "relations": rels,
        "closures": [{"name": "(so(2) + osp(2/2)) with sh(2/2)", "basis": listed, "expect_closed": True}],
        "ansatz": ansatz,
    }


# ---------------------------------------------------------------- standard SUSY JC


def jc_standard_susy_doc() -> dict:
    ops = dict(LANDAU_OPS)
    ops.update({
        "At": "Acal0*sigma0 + i*sigmap",
        "Atd": "Acal0d*sigma0 - i*sigmam",
        "HJCi": "HL - w*sigma3 + i*wt*Acal0d*sigmap - i*wt*Acal0*sigmam",
        "Gam": "[[sigma0, 0], [0, -sigma0]]",
    })
    rels = [
        _rel("[At,Atd] = sigma0 + sigma3", "comm(At, Atd)", "sigma0 + sigma3", group="standard"),
        _rel("{Qtp,Qtm} = h_JC", "acomm(Qtp, Qtm)", "H", group="standard"),
        _rel("Qtp^2 = 0", "Qtp^2", group="standard"),
        _rel("Qtm^2 = 0", "Qtm^2", group="standard"),
        _rel("[h_JC,Qtp] = 0", "comm(H, Qtp)", group="standard"),
        _rel("[h_JC,Qtm] = 0", "comm(H, Qtm)", group="standard"),
        _rel("h_JC block 1 = H_JC(kappa = i wt)", "H", "[[HJCi, 0], [0, At*Atd*wt]]", group="blocks"),
        _rel("h_JC = diag(H_JC, H_JC + wt(sigma0 + sigma3))", "H",
             "[[HJCi, 0], [0, HJCi + wt*(sigma0 + sigma3)]]", group="blocks"),
        _rel("h_JC = diag(H_JC, H_JC + wt diag(0,1)) printed", "H",
             "[[HJCi, 0], [0, HJCi + wt*[[0, 0], [0, 1]]]]", group="blocks", expect_pass=False,
             note="printed block 2 shift; the commutator [At,Atd] = sigma0 + sigma3 forces wt*(sigma0 + sigma3)"),
    ]
    return {
        "name": "jc_standard_susy",
        "family": "jc_standard_susy",
        "coordinates": ["t", "x", "y"],
        "dependents": [{"name": f"psi{k}", "conjugate": f"cpsi{k}"} for k in range(1, 5)],
        "parameters": [{"name": n, "positive": True} for n in ("M", "e", "B")],
        "definitions": dict(LANDAU_DEFS),
        "operators": ops,
        "hamiltonian": "wt*[[Atd*At, 0], [0, At*Atd]]",
        "grading": "Gam",
        "generators": [
            {"name": "X1", "op": "Dt"},
            {"name": "Qtp", "op": "sqrt(wt)*[[0, Atd], [0, 0]]"},
            {"name": "Qtm", "op": "sqrt(wt)*[[0, 0], [At, 0]]"},
        ],
        "products": [_expr("HJCstd", "H")],
        "dictionary": ["wt", "sqrt(wt)"],
        "relations": rels,
    }


# ---------------------------------------------------------------- registry

DOCS = {
    "susy_oscillator": oscillator_doc,
    "pauli_2d": pauli_doc,
    "jc": jc_doc,
    "jc_generalized": jc_generalized_doc,
    "jc_standard_susy": jc_standard_susy_doc,
}

BUILTIN_NAMES = tuple(DOCS)

SOLUTION_LEVELS = (0, 1)


def builtin_doc(name: str, **params) -> dict:
    """Document for a built-in model including its level 0 and 1 solutions."""
    if name not in DOCS:
        raise ModelError(f"unknown model {name!r}; built-ins: {', '.join(BUILTIN_NAMES)}")
    if params and name != "jc_generalized":
        raise ModelError(f"model {name!r} takes no parameters")
    doc = DOCS[name](**params)
    spec = load_doc(doc, validate=False)
    sols = []
    for n in SOLUTION_LEVELS:
        sols.extend(BUILDERS[doc["family"]](spec, n))
    doc["solutions"] = solution_strings(sols)
    return doc


_CACHE: dict = {}


def builtin(name: str, **params):
    """Load a built-in model; jc_generalized accepts alpha, beta and phi."""
    key = (name, tuple(sorted((k, str(v)) for k, v in params.items())))
    if key not in _CACHE:
        _CACHE[key] = load_doc(builtin_doc(name, **params))
    return _CACHE[key]
