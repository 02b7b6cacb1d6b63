import io
import json

import pytest

from sphere import catalog
from sphere.cli import AMBIGUOUS, INVALID, MALFORMED, OK, main
from sphere.sphsys import SphericalSystem


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_validate_g2(capsys):
    code, data = run_json(capsys, "validate", "-d", "G2", "-w", "1,0", "-w", "0,1")
    assert code == OK and data["saturated"] and data["sp"] == []


def test_validate_unsaturated(capsys):
    code, data = run_json(capsys, "validate", "-d", "A2", "-w", "1,1", "-w", "1,0")
    assert code == INVALID and not data["saturated"]
    assert data["oracle"]["counterexample"] == [0, 1]


def test_validate_not_free(capsys):
    code, data = run_json(capsys, "validate", "-d", "A2", "-w", "1,0", "-w", "2,0")
    assert code == INVALID and data["free"] is False


def test_sigma_g2(capsys):
    code, data = run_json(capsys, "sigma", "-d", "G2", "-w", "1,0", "-w", "0,1")
    assert code == OK and data["dimension"] == 1
    assert [s["root"] for s in data["sigma"]] == [[1, 1]]


def test_sigma_b3_text(capsys):
    code, out, _ = run(capsys, "sigma", "-d", "B3", "-w", "1,0,0")
    assert code == OK
    assert "Sigma = {2a1+2a2+2a3}" in out and "dimension: 1" in out


def test_sigma_trace(capsys):
    code, data = run_json(capsys, "sigma", "-d", "B3", "-w", "1,0,0", "--trace")
    rows = {r["label"]: r for r in data["trace"]}
    assert not rows["a1+a2+a3"]["pass"]
    assert [x["rule"] for x in rows["a1+a2+a3"]["rules"] if not x["pass"]] == ["f"]


@pytest.mark.parametrize("argv", [
    ["sigma", "-d", "A2", "-w", "1,x"],
    ["sigma", "-d", "A2", "-w", "1,0,0"],
    ["sigma", "-d", "Q7", "-w", "1"],
    ["sigma", "-d", "A2", "-w", "-1,0"],
    ["frobnicate"],
    ["catalog", "show", "Z.9"],
])
def test_malformed_input(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == MALFORMED and err


def test_root_coordinates_are_rejected_with_a_hint(capsys):
    code, _, err = run(capsys, "sigma", "-d", "A2", "-w", "a1+a2")
    assert code == MALFORMED and "fundamental" in err


def _system_file(tmp_path, system):
    path = tmp_path / "system.json"
    path.write_text(json.dumps(system.to_json()))
    return str(path)


def _minimal(entry_id):
    e = catalog.get(entry_id)
    return catalog.instantiate(e, e.minimal_params()).system


def test_decompose_catalog_file(capsys, tmp_path):
    code, data = run_json(capsys, "decompose", _system_file(tmp_path, _minimal("A.2")))
    assert code == OK and data["leaves"] == ["A.2"]


def test_decompose_padded_system_from_stdin(capsys, monkeypatch):
    from sphere.root_engine import root_system
    base = _minimal("A.2")
    padded = SphericalSystem(root_system(f"{base.rs.diagram}xA1"), base.sp | {base.rs.rank},
                             tuple(tuple(g) + (0,) for g in base.sigma))
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"system": padded.to_json()})))
    code, data = run_json(capsys, "decompose", "-")
    assert code == OK and data["tree"]["edge"]["kind"] == "parabolic" and data["leaves"] == ["A.2"]


def test_decompose_product_file(capsys, tmp_path):
    sys = SphericalSystem.from_json({"diagram": "B2xA2", "sp": [], "sigma": [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 1]]})
    code, data = run_json(capsys, "decompose", _system_file(tmp_path, sys))
    assert code == OK and data["tree"]["edge"]["kind"] == "product" and len(data["leaves"]) == 2


def test_decompose_rejects_bad_systems(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"diagram": "A2", "sp": [], "sigma": [[1, 0]]}))
    assert run(capsys, "decompose", str(bad))[0] == INVALID
    bad.write_text("{not json")
    assert run(capsys, "decompose", str(bad))[0] == MALFORMED
    assert run(capsys, "decompose", str(tmp_path / "missing.json"))[0] == MALFORMED


def test_catalog_family_and_show(capsys):
    code, data = run_json(capsys, "catalog", "--family", "D")
    assert code == OK and len(data["entries"]) == 8
    code, data = run_json(capsys, "catalog", "show", "A.2", "--n1", "3", "--n2", "3")
    assert code == OK
    assert SphericalSystem.from_json(data["system"]) == _minimal("A.2")


def test_catalog_self_test_reports_every_entry(capsys):
    code, data = run_json(capsys, "catalog", "--self-test")
    assert data["entries"] == 40
    # exit status follows the report honestly
    assert code == (OK if not data["failures"] else INVALID)


def test_exit_code_constants():
    assert (OK, INVALID, MALFORMED, AMBIGUOUS) == (0, 1, 2, 3)


@pytest.mark.parametrize("argv", [
    ["sigma", "-d", "C3", "-w", "0,1,0", "-w", "2,0,0", "--trace"],
    ["validate", "-d", "B3", "-w", "1,0,1"],
    ["catalog", "show", "E.4"],
])
def test_json_output_is_byte_identical(capsys, argv):
    first = run(capsys, *argv, "--format", "json")
    second = run(capsys, *argv, "--format", "json")
    assert first == second


def test_emitted_systems_round_trip(capsys):
    for argv in (["sigma", "-d", "F4", "-w", "0,0,0,1", "-w", "1,0,0,0"],
                 ["sigma", "-d", "A3xB2", "-w", "1,0,1,0,0", "-w", "0,0,0,0,2"]):
        code, data = run_json(capsys, *argv)
        assert code == OK
        sys = SphericalSystem.from_json(data["system"])
        assert sys.to_json() == data["system"]


def test_c2_and_d3_inputs_are_renumbered(capsys):
    # Sp4 on C^4 is the spinor module of B2; SO6 on C^6 is the second fundamental of A3
    code, data = run_json(capsys, "sigma", "-d", "C2", "-w", "1,0")
    assert data["system"] == {"diagram": "B2", "sp": [1], "sigma": []}
    code, data = run_json(capsys, "sigma", "-d", "D3", "-w", "1,0,0")
    assert data["system"] == {"diagram": "A3", "sp": [1, 3], "sigma": [[1, 2, 1]]}


def test_system_file_node_out_of_range(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    for sp in ([0], [3]):
        bad.write_text(json.dumps({"diagram": "A2", "sp": sp, "sigma": []}))
        assert run(capsys, "decompose", str(bad))[0] == MALFORMED
