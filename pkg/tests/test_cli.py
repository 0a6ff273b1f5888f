from __future__ import annotations

import json

import numpy as np
import pytest

from chancomp.channels import channel_to_json, depolarizing, identity_channel
from chancomp.cli import EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from chancomp.linalg import PAULI_X, PAULI_Y, PAULI_Z
from chancomp.resources import make_resource, resource_to_json

FAST = ["--restarts", "1", "--max-iter", "10"]


@pytest.fixture
def inputs(tmp_path):
    paths = {}
    for name, ch in [("id2", identity_channel(2)), ("dep2", depolarizing(2))]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(channel_to_json(ch)))
        paths[name] = str(p)
    p = tmp_path / "pauli.json"
    p.write_text(json.dumps(resource_to_json(make_resource("discrete", [PAULI_X, PAULI_Y, PAULI_Z]))))
    paths["pauli"] = str(p)
    return paths


def test_identity_channel_complexity(tmp_path, inputs, capsys):
    out = tmp_path / "run"
    code = main(["complexity", "--channel", inputs["id2"], "--resource", inputs["pauli"], "--seed", "0",
                 "--out", str(out), *FAST])
    assert code == EXIT_OK
    est = json.loads((out / "estimate.json").read_text())
    assert est["lower"] == 0.0 and est["upper"] == 0.0
    man = json.loads((out / "manifest.json").read_text())
    assert man["status"] == "ok" and man["exit_code"] == 0 and man["seed"] == 0
    assert set(man["inputs"]) == {"channel", "resource"}
    assert len(man["inputs"]["channel"]["sha256"]) == 64
    assert "estimate.csv" in man["outputs"] and "estimate.json" in man["outputs"]
    assert man["options"]["restarts"] == 1
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert summary["upper"] == 0.0


def test_repeat_runs_are_byte_identical(tmp_path, inputs):
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}"
        assert main(["complexity", "--channel", inputs["dep2"], "--resource", inputs["pauli"], "--seed", "3",
                     "--out", str(out), *FAST]) == EXIT_OK
        texts.append((out / "estimate.csv").read_bytes())
    assert texts[0] == texts[1]


def test_diamond_command(tmp_path, inputs):
    out = tmp_path / "d"
    assert main(["diamond", "--channel", inputs["dep2"], "--seed", "0", "--out", str(out)]) == EXIT_OK
    rep = json.loads((out / "diamond.json").read_text())
    assert abs(rep["value"] - 1.5) < 1e-6


def test_missing_input_file(tmp_path, inputs):
    out = tmp_path / "m"
    code = main(["complexity", "--channel", str(tmp_path / "nope.json"), "--resource", inputs["pauli"],
                 "--seed", "0", "--out", str(out)])
    assert code == EXIT_INPUT
    man = json.loads((out / "manifest.json").read_text())
    assert man["status"] == "input-error" and man["exit_code"] == EXIT_INPUT


def test_usage_errors(tmp_path, inputs):
    assert main(["complexity", "--channel", inputs["id2"], "--resource", inputs["pauli"]]) == EXIT_USAGE
    assert main(["no-such-command", "--seed", "0"]) == EXIT_USAGE
    assert main(["diamond", "--channel", inputs["id2"], "--seed", "0", "--bogus"]) == EXIT_USAGE


def test_bad_thread_environment(tmp_path, inputs, monkeypatch):
    monkeypatch.setenv("CHANCOMP_THREADS", "zero")
    code = main(["diamond", "--channel", inputs["dep2"], "--seed", "0", "--out", str(tmp_path / "t")])
    assert code == EXIT_INPUT


def test_verify_pauli(tmp_path):
    out = tmp_path / "v"
    assert main(["verify", "pauli", "--qubits", "1", "--samples", "50", "--seed", "1", "--out", str(out)]) == EXIT_OK
    lines = (out / "verify_pauli.csv").read_text().splitlines()
    assert len(lines) >= 2


def test_return_time_preset(tmp_path):
    out = tmp_path / "rt"
    assert main(["return-time", "--semigroup", "pauli-mixture", "--eps", "0.5", "--seed", "0",
                 "--out", str(out)]) == EXIT_OK
    header, row = (out / "return_time.csv").read_text().splitlines()[:2]
    value = float(dict(zip(header.split(","), row.split(",")))["return_time"])
    assert abs(value - np.log(3)) < 1e-3
