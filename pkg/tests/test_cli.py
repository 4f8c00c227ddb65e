import json

import pytest

from superprolong.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_models(capsys):
    code, out, _ = run(capsys, "models")
    assert code == 0
    assert out.split() == ["susy_oscillator", "pauli_2d", "jc", "jc_generalized", "jc_standard_susy"]


def test_derive_text(capsys):
    code, out, _ = run(capsys, "derive", "susy_oscillator", "--order", "2")
    assert code == 0
    count = int(out.split(":")[1].split()[0])
    assert count > 0
    assert len(out.strip().splitlines()) == count + 1


def test_derive_json(capsys):
    code, out, _ = run(capsys, "derive", "jc", "--order", "2", "--json")
    assert code == 0
    eqs = json.loads(out)
    assert isinstance(eqs, list) and eqs and all(isinstance(e, str) for e in eqs)


def test_derive_missing_model(capsys):
    code, _, err = run(capsys, "derive", "missing_model")
    assert code == 2
    assert "unknown model" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify", "jc", "nonsense")[0] == 2
    assert run(capsys, "bracket", "jc", "X1", "Nope")[0] == 2
    assert run(capsys, "bracket", "jc", "X1", "X2", "--alpha", "1")[0] == 2
    assert run(capsys, "derive", "jc", "--order", "1")[0] == 2


def test_verify_oscillator_all(capsys):
    code, out, _ = run(capsys, "verify", "susy_oscillator", "all")
    assert code == 0
    assert "WARN  printed cell (Qp,H0)" in out
    assert out.strip().endswith("susy_oscillator all: PASS")


def test_verify_jc_supercharges(capsys):
    code, out, _ = run(capsys, "verify", "jc", "supercharges")
    assert code == 0
    assert "PASS  (Qp - Qm)^2 outside span: not in span" in out


def test_shift_flag(capsys):
    assert run(capsys, "verify", "jc_generalized", "supercharges")[0] == 1
    code, out, _ = run(capsys, "verify", "jc_generalized", "supercharges", "--alpha-beta-shift", "derived")
    assert code == 0
    assert "PASS  {QQp,QQm} = HHs [derived_shift]" in out
    code, out, _ = run(capsys, "verify", "jc_generalized", "supercharges", "--alpha-beta-shift")
    assert code == 1
    assert "FAIL  {QQp,QQm} = HHs [printed_shift]" in out


def test_shift_needs_symbolic_beta(capsys):
    code, _, err = run(capsys, "verify", "jc_generalized", "supercharges", "--alpha-beta-shift", "--beta", "1")
    assert code == 2
    assert "symbolic beta" in err


def test_bracket_outputs(capsys):
    code, out, _ = run(capsys, "bracket", "susy_oscillator", "Q+", "Q-")
    assert code == 0
    assert out.splitlines()[0] == "anticommutator = H0 - w*Y"
    assert run(capsys, "bracket", "susy_oscillator", "X6", "X6")[1].splitlines()[0] == "commutator = 0"
    out = run(capsys, "bracket", "pauli_2d", "U-", "U+")[1]
    assert out.splitlines()[0] == "anticommutator = H0 + w*L - w*Y"


def test_bracket_not_in_span(capsys):
    code, out, _ = run(capsys, "bracket", "jc", "Qd", "Qd")
    assert code == 0
    assert out.startswith("anticommutator: not in span")


def test_json_is_deterministic(capsys):
    a = run(capsys, "--json", "verify", "pauli_2d", "supercharges")[1]
    b = run(capsys, "verify", "pauli_2d", "supercharges", "--json")[1]
    assert a == b
    assert json.loads(a)["summary"]["ok"] is True


def test_text_and_json_agree(capsys):
    code_t, text, _ = run(capsys, "verify", "jc_generalized", "supercharges")
    code_j, js, _ = run(capsys, "verify", "jc_generalized", "supercharges", "--json")
    assert code_t == code_j == 1
    rep = json.loads(js)
    assert text.count("FAIL  ") == sum(not r["ok"] for r in rep["relations"])


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SUPERPROLONG_SEED", "7")
    a = run(capsys, "--json", "bracket", "jc", "X2", "X3")[1]
    monkeypatch.setenv("SUPERPROLONG_SEED", "not-a-number")
    assert run(capsys, "models")[0] == 2
    monkeypatch.delenv("SUPERPROLONG_SEED")
    b = run(capsys, "--json", "--seed", "7", "bracket", "jc", "X2", "X3")[1]
    assert a == b


def test_export_and_load(capsys, tmp_path):
    path = tmp_path / "osc.json"
    assert run(capsys, "export", "susy_oscillator", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "bracket", str(path), "Q+", "S-")
    assert code == 0
    assert out.splitlines()[0] == "anticommutator = -2*i*Cp"
    code, out, _ = run(capsys, "verify", str(path), "solutions")
    assert code == 0


def test_bad_model_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "broken"}')
    code, _, err = run(capsys, "verify", str(path), "algebra")
    assert code == 2
    assert err.startswith("error:")


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
