import random
from fractions import Fraction

import pytest

from superprolong.algebra import (
    Workspace, bracket, check_relations, closure_check, expand_in_basis, supercharge_suite, verify_table,
)
from superprolong.expr import is_zero, parse
from superprolong.models import builtin
from superprolong.operator import MatrixDiffOp

CELL_KEYS = {"i", "j", "kind", "status", "expected", "computed"}


@pytest.fixture(scope="module")
def osc():
    return builtin("susy_oscillator")


def test_jc_commutator_expansion():
    m = builtin("jc")
    ws = Workspace(m)
    kind, op = bracket(ws.gens["X2"], ws.gens["X3"])
    exp = ws.expand(op, m.generator_names(), "off_shell", 42, 20)
    assert kind == "commutator"
    assert exp.combination() == "-X4"


def test_supercharge_anticommutator(osc):
    ws = Workspace(osc)
    kind, op = bracket(ws.gens["Qp"], ws.gens["Qm"])
    exp = ws.expand(op, ["H0", "Cm", "Cp", "Y", "Qm", "Qp", "Sm", "Sp"], "on_shell", 42, 20)
    assert kind == "anticommutator"
    assert exp.combination() == "H0 - w*Y"


def test_expand_zero(osc):
    exp = expand_in_basis(MatrixDiffOp.zero(2), osc.generators[:6], names=None)
    assert exp.ok
    assert all(c == parse("0") for c in exp.coefficients.values())


def test_empty_basis_rejected():
    with pytest.raises(ValueError):
        expand_in_basis(MatrixDiffOp.zero(2), [])


def test_left_inverse(osc):
    rng = random.Random(4)
    basis = osc.generators[:6]
    for _ in range(5):
        cs = [Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for _ in basis]
        A = MatrixDiffOp.zero(2)
        for c, g in zip(cs, basis):
            A = A + g.op.scale(c)
        exp = expand_in_basis(A, basis)
        assert exp.ok
        for c, g in zip(cs, basis):
            assert is_zero(exp.coefficients[g.name] - c).ok


def test_parameter_dependent_coefficients(osc):
    ws = Workspace(osc)
    A = ws.parse("w*X1 + 3/(2*w)*X3 - i*M*w*X6")
    exp = ws.expand(A, osc.generator_names(), "off_shell", 42, 20)
    assert exp.ok
    assert exp.display["X1"] == "w"
    assert is_zero(exp.coefficients["X3"] - parse("3/(2*w)")).ok


def test_outside_span(osc):
    ws = Workspace(osc)
    exp = ws.expand(ws.parse("x^3*sigma0"), osc.generator_names(), "off_shell", 42, 20)
    assert exp.status == "not_in_span"
    assert exp.span_residual > 1e-3


def test_sl2_h2_table(osc):
    rep = verify_table(osc, "sl2_h2")
    assert rep["summary"]["match"] == 36
    for c in rep["cells"]:
        assert CELL_KEYS <= set(c)
    x12 = next(c for c in rep["cells"] if (c["i"], c["j"]) == ("X1", "X2"))
    assert x12["status"] == "match"
    assert x12["computed"] == "1/(2*w)*X3"


def test_osp22_suspect_cells(osc):
    rep = verify_table(osc, "osp22")
    s = rep["summary"]
    assert s["ok"] and s["genuine_failures"] == 0
    assert s["suspect_mismatch"] == 4
    cells = {(c["i"], c["j"]): c for c in rep["cells"]}
    assert cells[("Sm", "Sp")]["status"] == "match"
    assert cells[("Qp", "H0")]["computed"] == "-w*Qp"


def test_pauli_typo_adjudicated():
    rep = verify_table(builtin("pauli_2d"), "sl2_so2_h4")
    cells = {(c["i"], c["j"]): c for c in rep["cells"]}
    assert cells[("X0", "X1")]["status"] == "mismatch"
    assert cells[("X0", "X1")]["computed"] == "2*w*X2"
    assert cells[("X1", "X0")]["status"] == "match"
    assert cells[("X1", "X0")]["computed"] == "-2*w*X2"
    assert rep["summary"]["ok"]


def test_generalized_osp_block():
    rep = verify_table(builtin("jc_generalized"), "osp22")
    cells = {(c["i"], c["j"]): c for c in rep["cells"]}
    assert cells[("SSm", "SSp")]["status"] == "match"
    assert rep["summary"]["match"] == rep["summary"]["cells"]


def test_single_central_element(osc):
    rep = closure_check(osc, ["I"])
    assert rep["summary"]["closed"]


def test_jc_closure_depends_on_kappa():
    m = builtin("jc")
    basis = ["HJC", "Am", "Ap", "I", "J", "Qd"]
    phys = closure_check(m, basis, kind="commutator", substitution="physical")
    gen = closure_check(m, basis, kind="commutator")
    assert phys["summary"]["closed"]
    assert not gen["summary"]["closed"]
    assert phys["summary"]["jacobi_failures"] == 0


def test_qd_square_not_in_span():
    m = builtin("jc")
    ws = Workspace(m)
    _, op = bracket(ws.gens["Qd"], ws.gens["Qd"], "anticommutator")
    exp = ws.expand(op, ["HJC", "Am", "Ap", "I", "J", "Qd"], "off_shell", 42, 20)
    assert exp.status == "not_in_span"


def test_supercharges_oscillator(osc):
    rep = supercharge_suite(osc)
    assert rep["summary"]["ok"]
    names = {r["name"] for r in rep["relations"]}
    assert {"Qp^2 = 0", "Qm^2 = 0", "[H_SUSY,Qp] = 0", "[H_SUSY,Qm] = 0"} <= names


def test_pauli_relations():
    rels = {r["name"]: r for r in check_relations(builtin("pauli_2d"))}
    for name in ("{Sm,Sp} = H0 + wL + wY", "[i Dt - H_P, Sp] = 0", "{Qm,Sp} = 2i Cm",
                 "[Y,Qp] = 2 Qp", "[Y,Qm] = -2 Qm"):
        assert rels[name]["ok"], name


def test_pauli_u_brackets_land_in_span():
    rels = {r["name"]: r for r in check_relations(builtin("pauli_2d"))}
    assert rels["{Um,Up}"]["computed"] == "H0 + w*L - w*Y"
    assert rels["{Vm,Vp}"]["computed"] == "H0 - w*L + w*Y"


def test_hamiltonian_central_in_generalized_model():
    rels = [r for r in check_relations(builtin("jc_generalized")) if r["name"].startswith("[HH,")]
    assert len(rels) == 14
    assert all(r["ok"] for r in rels)
