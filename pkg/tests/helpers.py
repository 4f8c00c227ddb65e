"""Shared generators for the property tests."""

import random
from fractions import Fraction

from superprolong.expr.core import Expr, jet
from superprolong.operator import COORD_ATOMS
from superprolong.prolong import JetVectorField, bracket, multi_indices, prolonged_commutator

# p = 2 independent variables (t, x), q = 2 dependent variables (u1, u2)
COORDS = (0, 1)
DEPS = ((1, False), (2, False))
VARS = [Expr.atom(COORD_ATOMS[0]), Expr.atom(COORD_ATOMS[1]), jet(1), jet(2)]

# criterion number -> "PASS ..." / "FAIL ..." line, printed by conftest
ACCEPTANCE: dict = {}


def random_poly(rng: random.Random, degree: int = 2, terms: int = 3) -> Expr:
    out = Expr.const(0)
    for _ in range(terms):
        m = Expr.const(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        for _ in range(rng.randint(0, degree)):
            m = m * rng.choice(VARS)
        out = out + m
    return out


def random_field(rng: random.Random) -> JetVectorField:
    return JetVectorField({k: random_poly(rng) for k in COORDS},
                          {d: random_poly(rng) for d in DEPS}, COORDS)


def prolongation_law_violations(n_fields: int = 50, order: int = 2, seed: int = 10) -> dict:
    """Count exact mismatches of linearity and bracket compatibility over random field pairs."""
    rng = random.Random(seed)
    linear = compat = 0
    for _ in range(n_fields):
        v1, v2 = random_field(rng), random_field(rng)
        a = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        b = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        lin = v1.scaled(a) + v2.scaled(b)
        w = bracket(v1, v2)
        pc = prolonged_commutator(v1, v2, order)
        for dep, conj in DEPS:
            for mi in multi_indices(COORDS, order):
                if lin.coeff(dep, conj, mi) != v1.coeff(dep, conj, mi) * a + v2.coeff(dep, conj, mi) * b:
                    linear += 1
                if w.coeff(dep, conj, mi) != pc[(dep, conj, mi)]:
                    compat += 1
        compat += sum(w.xi_of(j) != pc[("x", j)] for j in COORDS)
    return {"linearity": linear, "bracket": compat}
