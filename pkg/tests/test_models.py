import json

import pytest

from superprolong.algebra import check_relations
from superprolong.expr import is_zero, parse
from superprolong.models import (
    BUILTIN_NAMES, ModelError, builtin, builtin_doc, exact_solutions, export_model, load_doc, load_model,
)
from superprolong.operator import MI0, apply


@pytest.mark.parametrize("name,count", [("susy_oscillator", 13), ("pauli_2d", 16), ("jc", 6)])
def test_generator_counts(name, count):
    assert len(builtin(name).generators) == count


def test_unknown_builtin():
    with pytest.raises(ModelError):
        builtin("missing_model")


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_solutions_solve_the_equation(name):
    m = builtin(name)
    S = m.schrodinger()
    assert m.solutions
    for label, sol in m.solutions:
        assert all(is_zero(c).ok for c in apply(S, sol)), label


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_grading_squares_to_identity(name):
    from superprolong.operator import MatrixDiffOp, compose, equals
    m = builtin(name)
    assert equals(compose(m.grading, m.grading), MatrixDiffOp.identity(m.n)).ok


def test_oscillator_ground_state():
    m = builtin("susy_oscillator")
    (label, top), = [s for s in exact_solutions(m, 0) if s[0] == "n=0 top"]
    assert "t" not in {a.name for a in top[0].free}
    assert is_zero(top[0] - parse("sqrt(sqrt(M*w/pi))*exp(-M*w*x^2/2)")).ok
    assert top[1] == parse("0")


def test_higher_excitations_solve():
    m = builtin("susy_oscillator")
    S = m.schrodinger()
    for n in (2, 3):
        for label, sol in exact_solutions(m, n):
            assert all(is_zero(c).ok for c in apply(S, sol)), label
    with pytest.raises(ValueError):
        exact_solutions(m, 4)


def test_pauli_ground_annihilated():
    m = builtin("pauli_2d")
    from superprolong.algebra import Workspace
    ws = Workspace(m)
    g = parse("exp(-e*B*(x^2 + y^2)/4)")
    for op in ("Am0*sigma0", "Acal0*sigma0"):
        assert all(is_zero(c).ok for c in apply(ws.parse(op), [g, g])), op


def test_round_trip_jc(tmp_path):
    m = builtin("jc")
    path = tmp_path / "jc.json"
    path.write_text(export_model(m))
    assert load_model(path) == m


def test_grading_must_square_to_identity():
    doc = builtin_doc("susy_oscillator")
    doc["grading"] = "2*sigma3"
    with pytest.raises(ModelError, match="grading"):
        load_doc(doc)


def test_schema_errors_carry_a_path():
    doc = builtin_doc("susy_oscillator")
    doc["generators"][2]["op"] = "Dt + zeta"
    with pytest.raises(ModelError, match=r"generators\[2\]"):
        load_doc(doc)
    doc = builtin_doc("susy_oscillator")
    del doc["hamiltonian"]
    with pytest.raises(ModelError, match="hamiltonian"):
        load_doc(doc)


def test_phase_deformed_user_file(tmp_path):
    path = tmp_path / "jcg.json"
    path.write_text(export_model(builtin("jc_generalized", phi="pi/2")))
    m = load_model(path)
    base = builtin("jc_generalized")
    for name, sign in (("TTp", 1), ("TTm", -1)):
        r, c = (1, 3) if sign > 0 else (3, 1)
        deformed = m.op(name).entries[r][c][MI0]
        plain = base.op(name).entries[r][c][MI0]
        assert is_zero(deformed - parse(f"exp({sign}*i*pi/2)") * plain).ok
        assert not is_zero(deformed - plain).ok


def test_export_is_json():
    doc = json.loads(export_model(builtin("pauli_2d")))
    for key in ("coordinates", "dependents", "parameters", "hamiltonian", "grading", "generators", "tables"):
        assert key in doc


def test_hamiltonian_identities():
    jc = [r for r in check_relations(builtin("jc")) if r["name"].startswith("H_JC =")]
    assert len(jc) == 2 and all(r["ok"] for r in jc)
    gen = check_relations(builtin("jc_generalized"))
    assert [r["ok"] for r in gen if r["name"].startswith("HH = H_T")] == [True]
    std = [r for r in check_relations(builtin("jc_standard_susy")) if "block" in r["name"]]
    assert len(std) == 1 and all(r["ok"] for r in std)


def test_omega_is_a_definition():
    m = builtin("pauli_2d")
    assert "w" not in {s.name for s in m.ctx.symbols.values()}
