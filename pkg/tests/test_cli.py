"""Tests for the command-line interface and the file formats."""

import json
import math
import subprocess
import sys

import numpy as np

from seqdecomp import build_plan, ghz_state, shor_encoder
from seqdecomp import formats
from seqdecomp.cli import main


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_check_cnot_rejected(capsys):
    code, out, err = run_cli(["check", "cnot"], capsys)
    assert code == 1
    doc = json.loads(out)
    assert doc["implementable"] is False
    assert doc["per_site_residuals"][1] > 0.1


def test_check_shor_accepted(capsys):
    code, out, _ = run_cli(["check", "shor"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["implementable"] is True
    assert doc["ancilla_dim_if_yes"] == 4


def test_check_ghz3(capsys):
    code, out, _ = run_cli(["check", "ghz:3"], capsys)
    assert code == 0
    assert json.loads(out)["ancilla_dim_if_yes"] == 2


def test_decompose_shor_writes_plan(tmp_path, capsys):
    path = tmp_path / "plan.json"
    code, out, _ = run_cli(["decompose", "shor", "-o", str(path)], capsys)
    assert code == 0
    summary = json.loads(out)
    assert summary["ancilla_dim"] == 4
    assert summary["verification_error"] < 1e-9
    doc = json.loads(path.read_text())
    assert len(doc["steps"]) == 9
    assert all(len(step) == 8 and len(step[0]) == 8 for step in doc["steps"])
    assert doc["report"]["decoupling_residual"] < 1e-10


def test_decompose_cloner_ancilla_bound(tmp_path, capsys):
    path = tmp_path / "plan.json"
    code, out, _ = run_cli(["decompose", "cloner:2", "-o", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["ancilla_dim"] <= 4


def test_decompose_cnot_fails_without_file(tmp_path, capsys):
    path = tmp_path / "plan.json"
    code, out, _ = run_cli(["decompose", "cnot", "-o", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["implementable"] is False
    assert not path.exists()


def test_simulate_shor_plus(tmp_path, capsys):
    path = tmp_path / "plan.json"
    run_cli(["decompose", "shor", "-o", str(path)], capsys)
    code, out, _ = run_cli(["simulate", str(path), "--input-state", "+"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["decoupling_residual"] < 1e-10
    amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
    gp, gm = ghz_state(3, +1), ghz_state(3, -1)
    target = (
        np.kron(np.kron(gp, gp), gp) + np.kron(np.kron(gm, gm), gm)
    ) / math.sqrt(2.0)
    assert np.linalg.norm(amps - target) < 1e-10


def test_simulate_identity_plan(tmp_path, capsys):
    # 1 -> 1 identity loaded from an operator file
    op_path = tmp_path / "identity.json"
    op_path.write_text(
        formats.dumps(
            {
                "m_qubits": 1,
                "n_qubits": 1,
                "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
            }
        )
    )
    plan_path = tmp_path / "plan.json"
    code, _, _ = run_cli(["decompose", str(op_path), "-o", str(plan_path)], capsys)
    assert code == 0
    code, out, _ = run_cli(["simulate", str(plan_path), "--input-state", "0"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["amplitudes"][0] == [1.0, 0.0]


def test_simulate_cloner_reduced(tmp_path, capsys):
    path = tmp_path / "plan.json"
    run_cli(["decompose", "cloner:2", "-o", str(path)], capsys)
    code, out, _ = run_cli(
        ["simulate", str(path), "--input-state", "0", "--reduce", "1"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    rho = np.array(
        [[complex(re, im) for re, im in row] for row in doc["reduced_density_matrix"]]
    )
    assert np.allclose(rho, np.diag([5.0 / 6.0, 1.0 / 6.0]), atol=1e-10)


def test_simulate_amplitude_list_input(tmp_path, capsys):
    path = tmp_path / "plan.json"
    run_cli(["decompose", "ghz:2", "-o", str(path)], capsys)
    code, out, _ = run_cli(
        ["simulate", str(path), "--input-state", "[[1,0],[0,0]]"], capsys
    )
    assert code == 0
    amps = json.loads(out)["amplitudes"]
    assert np.isclose(amps[0][0], 1 / math.sqrt(2))


def test_info_cnot(capsys):
    code, out, _ = run_cli(["info", "cnot"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schmidt_ranks"] == [2]
    assert doc["bond_dims"] == [1, 2, 1]


def test_info_shor(capsys):
    code, out, _ = run_cli(["info", "shor"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["max_bond_dim"] == 4
    assert doc["schmidt_ranks"] is None
    assert doc["canonical_residuals"]["left_normalization"] < 1e-10


def test_info_product_defaults_to_identity_factors(capsys):
    code, out, _ = run_cli(["info", "product"], capsys)
    assert code == 0
    assert json.loads(out)["schmidt_ranks"] == [1]


def test_info_product_with_factor_file(tmp_path, capsys):
    x = [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
    h = [
        [[1 / math.sqrt(2), 0.0], [1 / math.sqrt(2), 0.0]],
        [[1 / math.sqrt(2), 0.0], [-1 / math.sqrt(2), 0.0]],
    ]
    path = tmp_path / "factors.json"
    path.write_text(json.dumps([x, h, x]))
    code, out, _ = run_cli(["info", "product", "--factors", str(path)], capsys)
    assert code == 0
    assert json.loads(out)["schmidt_ranks"] == [1, 1]


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"m_qubits": 1,')
    code, out, err = run_cli(["check", str(path)], capsys)
    assert code == 2
    assert out == ""
    assert "line" in err


def test_wrong_field_exits_2_with_diagnostic(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"m_qubits": 1, "n_qubits": 1, "matrix": [[1, 2]]}))
    code, _, err = run_cli(["check", str(path)], capsys)
    assert code == 2
    assert "matrix" in err


def test_non_isometry_exits_2(tmp_path, capsys):
    path = tmp_path / "notiso.json"
    path.write_text(
        formats.dumps(
            {
                "m_qubits": 1,
                "n_qubits": 1,
                "matrix": [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            }
        )
    )
    code, _, err = run_cli(["check", str(path)], capsys)
    assert code == 2
    assert "isometry" in err


def test_unknown_builtin_exits_2(capsys):
    code, _, err = run_cli(["check", "cloner:x"], capsys)
    assert code == 2
    assert "malformed" in err


def test_operator_file_round_trip_is_bitwise():
    u = shor_encoder()
    text = formats.dumps(formats.isometry_to_doc(u))
    back = formats.doc_to_isometry(json.loads(text))
    assert np.array_equal(back.matrix, u.matrix)


def test_plan_file_round_trip_is_bitwise(tmp_path):
    u = shor_encoder()
    plan = build_plan(u)
    from seqdecomp import sequentiality_test, verify_plan

    doc = formats.plan_to_doc(plan, sequentiality_test(u), verify_plan(plan, u))
    text = formats.dumps(doc)
    back = formats.doc_to_plan(json.loads(text))
    assert back.ancilla_dim == plan.ancilla_dim
    assert back.bond_dims == plan.bond_dims
    for a, b in zip(back.steps, plan.steps):
        assert np.array_equal(a, b)


def test_output_is_deterministic(capsys):
    _, first, _ = run_cli(["check", "shor"], capsys)
    _, second, _ = run_cli(["check", "shor"], capsys)
    assert first == second


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "seqdecomp", "check", "cnot"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["implementable"] is False
