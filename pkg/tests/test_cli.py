import json
import subprocess
import sys

import pytest

from sfcfa.cli import main
from sfcfa.fixtures import SF_IDENTITY_TABLE, SF_IDENTITY_TERM, SK_IDENTITY_TABLE, SK_IDENTITY_TERM


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("term, calculus, table", [
    (SK_IDENTITY_TERM, "sk", SK_IDENTITY_TABLE),
    (SF_IDENTITY_TERM, "sf", SF_IDENTITY_TABLE),
])
def test_analyze_json(capsys, term, calculus, table):
    code, out, _ = run(capsys, "analyze", term, "--calculus", calculus, "--format", "json")
    gamma = json.loads(out)["gamma"]
    assert code == 0
    assert {k: set(v) for k, v in gamma.items()} == {k: set(v) for k, v in table.items()}


def test_analyze_lambda(capsys):
    code, out, _ = run(capsys, "analyze", r"(\x.x) (\y.y)", "--calculus", "lambda",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["gamma"]["4"] == ["FUN(y,2)"]
    assert data["term"] == r"(\^1 x. x^0) @^4 (\^3 y. y^2)"


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "S K K (S K K)")
    assert code == 0 and "G(10) = { S_2^2 }" in out and "phi(7) = true" in out


def test_analyze_output_is_stable(capsys):
    first = run(capsys, "analyze", SF_IDENTITY_TERM, "--calculus", "sf", "--format", "json")
    second = run(capsys, "analyze", SF_IDENTITY_TERM, "--calculus", "sf", "--format", "json")
    assert first == second


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "S K K K")
    assert code == 0 and out.splitlines() == ["K", "steps: 2 (normal form)"]
    code, out, _ = run(capsys, "eval", "S (F F) (F F) S", "--calculus", "sf", "--trace")
    assert out.splitlines() == [
        ". S: F F S (F F S)", ". F-atom: S", "S", "steps: 2 (normal form)"]


def test_eval_fuel(capsys):
    omega = "S (S K K) (S K K) (S (S K K) (S K K))"
    code, out, _ = run(capsys, "eval", omega, "--fuel", "10")
    assert code == 0 and out.splitlines()[-1] == "steps: 10 (fuel exhausted)"


@pytest.mark.parametrize("src, direction, first_line", [
    ("K", "sk-to-sf", "F F"),
    (r"\x.x", "lambda-to-sk", "S K K"),
    ("K", "sk-to-lambda", r"\x.\y.x"),
])
def test_translate(capsys, src, direction, first_line):
    code, out, _ = run(capsys, "translate", src, "--direction", direction)
    assert code == 0 and out.splitlines()[0] == first_line


def test_translate_prints_mapping(capsys):
    _, out, _ = run(capsys, "translate", "S K K", "--direction", "sk-to-sf")
    assert out.splitlines()[2:] == ["K^0 -> F^9 @^8 F^10", "K^1 -> F^6 @^5 F^7"]


@pytest.mark.parametrize("argv", [
    ["eval", "S (K"],
    ["eval", "S F", "--calculus", "sk"],
    ["translate", "S F", "--direction", "sk-to-lambda"],
    ["translate", r"\x.y", "--direction", "lambda-to-sk"],
    ["analyze", "K", "--calculus", "sf"],
])
def test_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["eval"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["check-coherence", "--trials", "0"])
    assert info.value.code == 1


def test_check_coherence(capsys):
    code, out, _ = run(capsys, "check-coherence", "--calculus", "sk", "--trials", "40")
    assert code == 0 and "failures=0" in out


def test_check_coherence_mutation_fails(capsys):
    code, out, _ = run(capsys, "check-coherence", "--calculus", "sf", "--trials", "60",
                       "--drop", "witness")
    assert code == 2 and "failures=0" not in out.splitlines()[0]


def test_mutation_family_must_match_calculus(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check-coherence", "--calculus", "sk", "--drop", "F-atom"])
    assert info.value.code == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sfcfa", "eval", "S K K S"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.splitlines()[0] == "S"
