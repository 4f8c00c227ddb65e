import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superprolong.expr import (
    ONE, ZERO, Expr, ParseError, UnknownIdentifierError, conj, differentiate, eval_numeric, exp,
    is_zero, jet, parse, sin, sqrt, substitute, sym, to_str,
)
from superprolong.expr.core import Jet
from superprolong.operator import COORD_ATOMS

T, X = Expr.atom(COORD_ATOMS[0]), Expr.atom(COORD_ATOMS[1])
W, M = sym("w"), sym("M")


def test_parse_rational_literal():
    assert parse("1/2") == Expr.const(Fraction(1, 2))


def test_parse_merges_exponents():
    e = parse("exp(2*i*w*t)*sin(w*t)")
    assert len(e.terms) == 1
    assert e == parse("sin(w*t)*exp(2*i*w*t)")
    assert parse("exp(w*t)*exp(w*t)") == parse("exp(w*t)^2")


def test_parse_oscillator_potential():
    assert parse("M*w^2*x^2/2") == M * W * W * X * X * Fraction(1, 2)


def test_parse_errors_carry_offsets():
    with pytest.raises(ParseError) as info:
        parse("x + * 2")
    assert "byte" in str(info.value)
    with pytest.raises(UnknownIdentifierError) as info:
        parse("x + zeta")
    assert info.value.offset == 4
    assert "w" in info.value.declared


def test_differentiate_examples():
    assert differentiate(parse("M*w^2*x^2/2"), COORD_ATOMS[1]) == parse("M*w^2*x")
    d = differentiate(parse("exp(2*i*w*t)"), COORD_ATOMS[0])
    assert is_zero(d - parse("2*i*w*exp(2*i*w*t)")).ok
    u1 = Jet(1)
    assert differentiate(parse("sin(t)*x*u1"), u1) == parse("sin(t)*x")


def test_substitute_empty_is_identity():
    e = parse("x*u1 + w*sin(t)")
    assert substitute(e, {}) == e


def test_substitute_is_simultaneous():
    e = parse("x + 2*t")
    out = substitute(e, {COORD_ATOMS[1]: T, COORD_ATOMS[0]: X})
    assert out == parse("t + 2*x")


def test_conj_of_phi_matches_conjugate_form():
    phi = parse("i*w*x*u1 + exp(i*w*t)*u2")
    phibar = parse("-i*w*x*cu1 + exp(-i*w*t)*cu2")
    assert is_zero(conj(phi) - phibar).ok


def test_is_zero_examples():
    assert is_zero(parse("sin(w*t)^2 + cos(w*t)^2 - 1")).ok
    r = is_zero(parse("x*u1"))
    assert not r.ok
    assert r.witness is not None and "x" in r.witness


def test_eval_numeric_examples():
    assert eval_numeric(parse("1/2"), {}) == 0.5
    v = eval_numeric(parse("exp(i*pi)"), {})
    assert abs(v + 1) < 1e-12
    g = parse("sqrt(sqrt(M*w/pi))*exp(-M*w*x^2/2)")
    v = eval_numeric(g, {"M": 1.0, "w": 1.0, "x": 0.0, "t": 0.0})
    assert abs(v - math.pi ** -0.25) < 1e-14


# ---------------------------------------------------------------- properties

ATOMS = [T, X, W, M, jet(1), jet(1, True), jet(2), parse("u1_x"), parse("u2_t")]


@st.composite
def exprs(draw, depth=6):
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        if draw(st.booleans()):
            return draw(st.sampled_from(ATOMS))
        return Expr.const(Fraction(draw(st.integers(-9, 9)), draw(st.integers(1, 5))))
    op = draw(st.sampled_from(["add", "mul", "sub", "sin", "exp"]))
    a = draw(exprs(depth=depth - 1))
    if op == "sin":
        return sin(a)
    if op == "exp":
        return exp(a)
    b = draw(exprs(depth=depth - 1))
    return {"add": a + b, "mul": a * b, "sub": a - b}[op]


@settings(max_examples=150, deadline=None)
@given(exprs())
def test_round_trip_and_idempotence(e):
    text = to_str(e)
    back = parse(text)
    assert back == e
    assert to_str(back) == text


@settings(max_examples=100, deadline=None)
@given(exprs(depth=4))
def test_mixed_partials_commute(e):
    t, x = COORD_ATOMS[0], COORD_ATOMS[1]
    assert differentiate(differentiate(e, x), t) == differentiate(differentiate(e, t), x)


@settings(max_examples=100, deadline=None)
@given(exprs(depth=4))
def test_conj_commutes_with_coordinate_derivative(e):
    x = COORD_ATOMS[1]
    assert conj(differentiate(e, x)) == differentiate(conj(e), x)


def test_product_rule():
    rng = random.Random(3)
    for _ in range(30):
        a, b = rng.choice(ATOMS) * rng.choice(ATOMS), sin(rng.choice(ATOMS)) + rng.choice(ATOMS)
        x = COORD_ATOMS[1]
        lhs = differentiate(a * b, x)
        assert lhs == differentiate(a, x) * b + a * differentiate(b, x)


def test_nonzero_monomials_rejected():
    rng = random.Random(7)
    names = ["t", "x", "y", "w", "M", "u1", "cu1", "u2", "u1_x", "u1_t", "u2_xx", "cu2_t"]
    rejected = 0
    for _ in range(1000):
        e = Expr.const(Fraction(rng.choice([-1, 1]) * rng.randint(1, 20), rng.randint(1, 20)))
        for _ in range(rng.randint(1, 4)):
            e = e * parse(rng.choice(names)) ** rng.randint(1, 3)
        rejected += not is_zero(e).ok
    assert rejected == 1000


def test_sqrt_principal_branch():
    assert abs(eval_numeric(sqrt(parse("w")), {"w": 2.0}) - math.sqrt(2)) < 1e-15
    assert ONE - ONE == ZERO
