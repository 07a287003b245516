import json
import subprocess
import sys

import pytest

from nielsenlab.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_invariants(capsys):
    code, rep = call(capsys, "invariants", "--group", "sym:4")
    assert code == 0 and rep["schema_version"] == 1 and rep["command"] == "invariants"
    assert rep["result"]["ic"] == 3 and rep["result"]["cl"] == 4
    assert rep["budgets"]["seed"] == 0 and "max_order" in rep["budgets"]


def test_constants(capsys):
    code, rep = call(capsys, "constants", "--m", "1")
    assert code == 0
    assert rep["result"]["N"]["rational"] == "7" and rep["result"]["N"]["log2_coeff"] == "0"


def test_constants_user_table(capsys, tmp_path):
    path = tmp_path / "j.json"
    path.write_text(json.dumps({"2": 12}))
    code, rep = call(capsys, "constants", "--m", "2", "--jordan", str(path))
    assert code == 0 and rep["result"]["J"] == 12 and rep["result"]["J_exact"]
    path.write_text(json.dumps({"2": 5}))
    code, rep = call(capsys, "constants", "--m", "2", "--jordan", str(path))
    assert code == 2


def test_orbits(capsys):
    code, rep = call(capsys, "orbits", "--group", "cyc:2", "--n", "2")
    assert code == 0 and rep["result"]["num_orbits"] == 2
    code, rep = call(capsys, "orbits", "--group", "sym:4", "--n", "6", "--cap", "1000")
    assert code == 3 and rep["error"]["kind"] == "budget"


def test_lattice_and_budget(capsys):
    code, rep = call(capsys, "lattice", "--group", "sym:3")
    assert code == 0 and len(rep["result"]["subgroups"]) == 6
    code, rep = call(capsys, "lattice", "--group", "sym:4", "--cap", "5")
    assert code == 3 and len(rep["partial"]) > 5
    code, rep = call(capsys, "invariants", "--group", "sym:5", "--max-order", "100")
    assert code == 3


def test_invalid_inputs(capsys):
    code, rep = call(capsys, "invariants", "--group", "gl:2,6")
    assert code == 2 and rep["error"]["field"] == "q"
    with pytest.raises(SystemExit) as exc:
        run(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["orbits", "--group", "cyc:2"])
    assert exc.value.code == 2
    code, _ = call(capsys, "redundant", "--group", "cyc:6", "--tuple", "1,9")
    assert code == 2


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.mark.parametrize("group,tup,extra", [
    ("cyc:6", "2,3,0", ["--mode", "epi", "--targets", "1"]),
    ("sym:3", "(12),(13),(23),(123)", ["--mode", "epi"]),
    ("ab:3,3", "3,1,4", ["--mode", "abelian"]),
    ("sym:3", "1,2,3", ["--mode", "exseq"]),
    ("sym:3", "1,2,3,4,5", ["--mode", "jordan"]),
    ("lamp:3,2", "1,7,13,19,5,11", ["--mode", "jordan"]),
])
def test_normalize_then_verify(capsys, tmp_path, group, tup, extra):
    code, rep = call(capsys, "normalize", "--group", group, "--tuple", tup, *extra)
    assert code == 0 and rep["result"]["verified"]
    path = _write(tmp_path, "w.json", rep)
    code, ver = call(capsys, "verify-witness", "--group", group, "--witness", path)
    assert code == 0 and ver["result"]["valid"]
    assert ver["result"]["endpoint"] == rep["result"]["target"]


def test_redundant_then_verify(capsys, tmp_path):
    code, rep = call(capsys, "redundant", "--group", "sym:3", "--tuple", "(12),(13),(23)")
    assert code == 0 and rep["result"]["result"] is True
    path = _write(tmp_path, "w.json", rep)
    code, ver = call(capsys, "verify-witness", "--group", "sym:3", "--witness", path,
                     "--tuple", "(12),(13),(23)")
    assert code == 0 and ver["result"]["valid"]


def test_verify_witness_rejects_wrong_endpoint(capsys, tmp_path):
    path = _write(tmp_path, "w.json", [{"op": "rmul", "i": 2, "j": 1, "inv": True}])
    code, ver = call(capsys, "verify-witness", "--group", "cyc:6", "--tuple", "2,3",
                     "--witness", path, "--endpoint", "2,1")
    assert code == 0 and ver["result"]["valid"]
    code, ver = call(capsys, "verify-witness", "--group", "cyc:6", "--tuple", "2,3",
                     "--witness", path, "--endpoint", "2,5")
    assert not ver["result"]["valid"]


def test_symplectic_commands(capsys):
    code, rep = call(capsys, "sp-reduce", "--g", "3", "--w", "1,2,3,4,5,6")
    assert code == 0 and rep["result"]["check"]
    code, rep = call(capsys, "stabilize", "--g", "3", "--moduli", "2,3",
                     "--v", "1,2;0,1;1,0;1,1;0,2;1,2")
    assert code == 0 and rep["result"]["check"]
    assert rep["result"]["stabilized"][-2:] == [[0, 0], [0, 0]]
    code, rep = call(capsys, "stabilize", "--g", "2", "--moduli", "2,3", "--v", "1,2;0,1;1,0;1,1")
    assert code == 2


def test_walk(capsys):
    code, rep = call(capsys, "walk", "--group", "sym:3", "--n", "3", "--steps", "1e5",
                     "--seed", "42", "--start", "1,2,0")
    assert code == 0 and rep["result"]["orbit_size"] == 168 and rep["budgets"]["seed"] == 42


@pytest.mark.parametrize("argv", [
    ["invariants", "--group", "sym:3"],
    ["orbits", "--group", "ab:3,3", "--n", "2"],
    ["constants", "--m", "2"],
    ["normalize", "--group", "sym:3", "--tuple", "1,2,3,4", "--mode", "jordan"],
    ["walk", "--group", "cyc:2", "--n", "2", "--steps", "1000", "--start", "1,0", "--counts"],
])
def test_json_round_trip_is_byte_identical(capsys, argv):
    run(argv)
    text = capsys.readouterr().out.strip()
    assert json.dumps(json.loads(text), sort_keys=True) == text


def test_table_format(capsys):
    code = run(["invariants", "--group", "cyc:6", "--format", "table"])
    out = capsys.readouterr().out
    assert code == 0 and "ic" in out and not out.startswith("{")


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "nielsenlab.cli", "orbits", "--group", "cyc:2",
                           "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["num_orbits"] == 2
