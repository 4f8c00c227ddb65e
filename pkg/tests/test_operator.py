import random

import pytest

from superprolong.algebra import Workspace
from superprolong.expr import is_zero, parse
from superprolong.models import builtin
from superprolong.operator import (
    DimensionError, GradedGenerator, MatrixDiffOp, ParityError, anticommutator, apply, classify_parity,
    commutator, compose, equals, graded_bracket, is_zero_op, on_shell, parse_op,
)


@pytest.fixture(scope="module")
def osc():
    return builtin("susy_oscillator")


@pytest.fixture(scope="module")
def ws(osc):
    return Workspace(osc)


def random_op(rng, n=2):
    terms = ["x", "t", "x^2", "1", "2/3*x*t", "-t^2"]
    derivs = ["", "*Dx", "*Dt", "*Dx^2", "*Dx*Dt"]
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            k = rng.randint(0, 2)
            parts = [f"{rng.choice(terms)}{rng.choice(derivs)}" for _ in range(k)]
            row.append(" + ".join(parts) or "0")
        rows.append("[" + ", ".join(row) + "]")
    return parse_op("[" + ", ".join(rows) + "]")


def test_leibniz_one_variable(ws):
    assert compose(ws.parse("Dx*sigma0"), ws.parse("x*sigma0")) == ws.parse("(x*Dx + 1)*sigma0")


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        compose(MatrixDiffOp.identity(2), MatrixDiffOp.identity(4))


def test_supercharge_factorisation(ws):
    assert equals(ws.parse("Tp*Axp"), ws.parse("Qp/sqrt(w)")).ok


def test_ladder_commutator(ws):
    assert equals(ws.parse("(ax*axd - axd*ax)*sigma0"), MatrixDiffOp.identity(2)).ok


def test_graded_brackets(ws, osc):
    g = {n: osc.named[n] for n in ("Axm", "Axp", "Qp", "Qm", "I", "H0")}
    assert equals(graded_bracket(g["Axm"], g["Axp"]), g["I"].op).ok
    on = on_shell(graded_bracket(g["Qp"], g["Qm"]), osc.hamiltonian)
    rhs = on_shell(ws.parse("H0 - w*Y"), osc.hamiltonian)
    assert equals(on, rhs).ok
    assert is_zero_op(graded_bracket(g["H0"], g["H0"])).ok


def test_unclassified_parity_rejected():
    g = GradedGenerator("G", MatrixDiffOp.identity(2))
    with pytest.raises(ParityError):
        graded_bracket(g, g)


def test_classify_parity(ws, osc):
    assert classify_parity(ws.parse("exp(i*w*t)*sigmap"), osc.grading) == "odd"
    assert classify_parity(ws.parse("Dt*sigma0"), osc.grading) == "even"
    assert classify_parity(ws.parse("sigma0 + sigmap"), osc.grading) == "neither"


def test_equals_witness(ws):
    assert equals(ws.parse("x*Dx*sigma3"), ws.parse("x*Dx*sigma3")).ok
    r = equals(ws.parse("sigma0"), ws.parse("sigma3"))
    assert not r.ok
    assert r.witness[:2] == (2, 2)


def test_hamiltonian_number_form(ws, osc):
    # H_SUSY = w (a^+ a + 1/2) sigma0 - w/2 sigma3
    assert equals(osc.hamiltonian, ws.parse("w*(axd*ax + 1/2)*sigma0 - w/2*sigma3")).ok


def test_apply_examples(ws, osc):
    psi = [parse("exp(t*x)"), parse("x^2")]
    assert apply(MatrixDiffOp.identity(2), psi) == psi
    ground = parse("exp(-M*w*x^2/2)")
    assert all(is_zero(c).ok for c in apply(ws.parse("ax*sigma0"), [ground, ground]))
    assert all(is_zero(c).ok for c in apply(osc.schrodinger(), [ground, parse("0")]))
    with pytest.raises(DimensionError):
        apply(MatrixDiffOp.identity(2), [ground])


def test_associativity():
    rng = random.Random(11)
    for _ in range(15):
        a, b, c = random_op(rng), random_op(rng), random_op(rng)
        assert compose(a, compose(b, c)) == compose(compose(a, b), c)


def test_apply_of_composition():
    rng = random.Random(12)
    psi = [parse("exp(t)*sin(x)"), parse("x^3*t + cos(t*x)")]
    for _ in range(10):
        a, b = random_op(rng), random_op(rng)
        lhs = apply(compose(a, b), psi)
        rhs = apply(a, apply(b, psi))
        assert all(is_zero(p - q).ok for p, q in zip(lhs, rhs))


def test_bracket_symmetries():
    rng = random.Random(13)
    for _ in range(10):
        a, b = random_op(rng), random_op(rng)
        assert commutator(a, b) == -commutator(b, a)
        assert anticommutator(a, b) == anticommutator(b, a)


def test_bracket_grading(osc):
    odd = [g for g in osc.named.values() if g.parity == "odd"]
    even = [g for g in osc.named.values() if g.parity == "even"]
    checked = 0
    for a in odd:
        for b in odd + even:
            br = graded_bracket(a, b)
            if is_zero_op(br).ok:
                continue
            want = "even" if b.parity == "odd" else "odd"
            assert classify_parity(br, osc.grading) == want, (a.name, b.name)
            checked += 1
    assert checked > 20


def test_on_shell_is_idempotent(osc):
    X = osc.op("X1")
    once = on_shell(X, osc.hamiltonian)
    assert on_shell(once, osc.hamiltonian) == once
