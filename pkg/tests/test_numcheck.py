import dataclasses

import numpy as np
import pytest

from superprolong.algebra import Workspace
from superprolong.models import builtin
from superprolong.numcheck import (
    NumericModel, consistency_vector_field, field_of, finite_residual, generator_residual, group_law,
    identity_deviation, inverse_deviation, sample_points, transformations,
)
from superprolong.operator import MatrixDiffOp


@pytest.fixture(scope="module")
def osc():
    return builtin("susy_oscillator")


@pytest.fixture(scope="module")
def nm(osc):
    return NumericModel(osc, 42)


@pytest.fixture(scope="module")
def cat(nm):
    return transformations(nm)


def sol(m, label):
    return dict(m.solutions)[label]


def test_identity_generator_residual(osc):
    assert generator_residual(osc, MatrixDiffOp.identity(2), sol(osc, "n=0 top")).value <= 1e-9


def test_oscillator_generators(osc):
    for g in osc.generators:
        for label, s in osc.solutions:
            assert generator_residual(osc, g, s).value <= 1e-9, (g.name, label)


def test_multiplication_by_x_is_rejected(osc):
    r = generator_residual(osc, Workspace(osc).parse("x*sigma0"), sol(osc, "n=0 top"))
    assert r.value > 1e-3
    assert r.witness and "x" in r.witness


def test_floor_and_x1(osc, nm, cat):
    s0 = sol(osc, "n=0 top")
    floor = finite_residual(osc, cat["X1"], 0.0, s0, nm=nm).value
    assert floor <= 1e-5
    r = finite_residual(osc, cat["X1"], 0.3, s0, nm=nm).value
    assert r <= 1e-5
    assert r <= 10 * floor


def test_x4_translation(osc, nm, cat):
    assert finite_residual(osc, cat["X4"], 0.4, sol(osc, "n=1 top"), nm=nm).value <= 1e-5


def test_wrong_multiplier_is_detected(osc, nm, cat):
    plain = dataclasses.replace(cat["X4"], multiplier=lambda pts, lam: np.tile(np.eye(2), (len(pts["t"]), 1, 1)))
    assert finite_residual(osc, plain, 0.3, sol(osc, "n=1 top"), nm=nm).value > 1e-2


def test_outside_window(osc, nm, cat):
    with pytest.raises(ValueError):
        finite_residual(osc, cat["X1"], 0.9, sol(osc, "n=0 top"), nm=nm)


def test_group_law(cat):
    for name in ("X3", "X4", "X5"):
        assert group_law(cat[name], 0.2, 0.15) <= 1e-10
    assert group_law(cat["X1"], 0.1, 0.1) <= 1e-8
    assert group_law(cat["X2"], 0.1, 0.1) <= 1e-8
    assert group_law(cat["X1"], 0.3, 0.0) <= 1e-14


def test_identity_and_inverse(cat):
    for T in cat.values():
        assert identity_deviation(T) <= 1e-12, T.name
        assert inverse_deviation(T, 0.3) <= 1e-10, T.name


def test_vector_fields(osc, nm, cat):
    for name, T in cat.items():
        assert consistency_vector_field(T, field_of(osc, T.generator), nm) <= 1e-6, name


def test_time_translation_field(cat):
    p = sample_points(("t", "x"), np.random.default_rng(0), 20)
    step = 1e-4
    dt = (cat["X3"].forward(p, step)["t"] - cat["X3"].forward(p, -step)["t"]) / (2 * step)
    assert np.allclose(dt, 1.0, atol=1e-10)


def test_x1_recovers_xi(nm, cat):
    w = nm.val("w").real
    p = sample_points(("t", "x"), np.random.default_rng(1), 20)
    step = 1e-4
    dt = (cat["X1"].forward(p, step)["t"] - cat["X1"].forward(p, -step)["t"]) / (2 * step)
    assert np.max(np.abs(dt - np.sin(2 * w * p["t"]) / (2 * w))) <= 1e-6


def test_phase_field(cat):
    p = sample_points(("t", "x"), np.random.default_rng(2), 20)
    step = 1e-4
    dU = (cat["X6"].multiplier(p, step) - cat["X6"].multiplier(p, -step)) / (2 * step)
    assert np.allclose(dU, 1j * np.eye(2)[None], atol=1e-8)


@pytest.mark.parametrize("name", ["jc", "jc_generalized"])
def test_landau_families(name):
    m = builtin(name)
    nm = NumericModel(m, 42)
    for tname, T in transformations(nm).items():
        for label, s in m.solutions[:2]:
            floor = finite_residual(m, T, 0.0, s, nm=nm).value
            r = finite_residual(m, T, 0.3, s, nm=nm).value
            assert r <= 1e-5 and r <= 10 * floor, (tname, label)
        assert consistency_vector_field(T, field_of(m, T.generator), nm) <= 1e-6, tname
        assert group_law(T, 0.1, 0.1) <= 1e-8, tname
