import json
import subprocess
import sys

import pytest

from preludec.cli import main

from corpus import DATA, MUTANTS, PROGRAMS


@pytest.fixture
def write(tmp_path):
    def _write(text, name="prog.plu"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def test_check_accepts_reference(capsys):
    assert main(["check", str(PROGRAMS / "sampling.plu")]) == 0
    assert capsys.readouterr().err == ""


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_check_mutants_exit_nonzero(name, write, capsys):
    src, code = MUTANTS[name]
    assert main(["check", write(src), "--json"]) == 1
    ds = json.loads(capsys.readouterr().out)
    assert {d["code"] for d in ds} == {code}


def test_human_diagnostic_format(write, capsys):
    path = write(MUTANTS["div_7"][0])
    assert main(["check", path]) == 1
    err = capsys.readouterr().err
    assert err.startswith(f"{path}:17:")
    assert "error[E_DIVISIBILITY]" in err


def test_mismatch_json_fields(write, capsys):
    main(["check", write(MUTANTS["command_rate"][0]), "--json"])
    first = json.loads(capsys.readouterr().out)[0]
    assert first["expected"] == "(10, 0)" and first["actual"] == "(100, 0)"
    assert first["severity"] == "error" and first["line"] == 17


def test_syntax_error(write, capsys):
    assert main(["check", write("node n ( returns"), "--json"]) == 1
    assert json.loads(capsys.readouterr().out)[0]["code"] == "E_SYNTAX"


def test_missing_file(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nope.plu")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_strict_start_dates(write, capsys):
    path = write("node n (a: rate (10, 0)) returns (b: rate (10, -1)) let b = cons(0, a) tel")
    assert main(["check", path]) == 0
    assert "warning[W_NEGATIVE_START]" in capsys.readouterr().err
    assert main(["check", path, "--strict-start-dates"]) == 1
    assert "error[W_NEGATIVE_START]" in capsys.readouterr().err


def test_emit_to_file(tmp_path):
    out = tmp_path / "out.ir"
    assert main(["emit", str(PROGRAMS / "sampling.plu"), "-o", str(out)]) == 0
    assert out.read_text() == (DATA / "sampling.ir").read_text()


def test_emit_refuses_errors(write, capsys):
    assert main(["emit", write(MUTANTS["no_fby"][0])]) == 1
    assert "E_CAUSALITY_CYCLE" in capsys.readouterr().err


def test_simulate_dump(capsys):
    assert main(["simulate", str(PROGRAMS / "sampling.plu"), "--node", "sampling", "--hyperperiods", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    response = [l.split() for l in lines if l.startswith("response ")]
    assert [int(t) for _, t, _ in response] == list(range(0, 200, 10))
    command = [l.split() for l in lines if l.startswith("command ")]
    assert [int(t) for _, t, _ in command] == [0, 100]


def test_simulate_strict_stubs(capsys):
    assert main(["simulate", str(PROGRAMS / "sampling.plu"), "--node", "sampling", "--strict-stubs"]) == 1
    assert "controller" in capsys.readouterr().err


def test_simulate_bad_horizon(capsys):
    assert main(["simulate", str(PROGRAMS / "monitor.plu"), "--node", "monitor", "--hyperperiods", "0"]) == 2


def test_simulate_unknown_node(capsys):
    assert main(["simulate", str(PROGRAMS / "monitor.plu"), "--node", "ghost"]) == 1


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "preludec", "check", "--json", str(PROGRAMS / "monitor.plu")],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and json.loads(r.stdout) == []
