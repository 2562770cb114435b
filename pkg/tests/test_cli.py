import json

import numpy as np
import pytest

from tncode.cli import main
from tncode.formats import code_to_dict, load, save_json
from tncode.holographic import build_code
from tncode.stabilizer import steane

from test_threshold import synthetic


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_build_then_validate(tmp_path, capsys):
    path = tmp_path / "net.json"
    code, out = run(capsys, "build", "--radius", "2", "--out", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["census"]["n"] == 42 and len(data["nodes"]) == 8
    code, out = run(capsys, "validate", str(path))
    assert code == 0 and "n=42 k=8" in out
    net = load(path)
    assert net.flat == build_code(2)[0].flat


def test_validate_code_files(tmp_path, capsys):
    good = tmp_path / "steane.json"
    save_json(code_to_dict(steane()), good)
    assert run(capsys, "validate", str(good))[0] == 0
    d = code_to_dict(steane())
    d["stabilizers"][0] = "XIIIIII"
    bad = tmp_path / "bad.json"
    save_json(d, bad)
    code, out = run(capsys, "validate", str(bad))
    assert code == 3 and "anticommute" in out
    d = code_to_dict(steane())
    d["n"] = 8
    save_json(d, bad)
    assert run(capsys, "validate", str(bad))[0] == 3


def test_sample_noiseless(tmp_path, capsys):
    out_csv = tmp_path / "r.csv"
    code, out = run(capsys, "sample", "--radius", "1", "--p", "0", "--samples", "100", "--seed", "7",
                    "--qubits", "1", "--method", "coset", "--out", str(out_csv))
    assert code == 0 and "p_fail=0.000000" in out
    assert out_csv.read_text().splitlines()[1].split(",")[8] == "0.0"


def test_sample_output_is_reproducible(tmp_path, capsys, monkeypatch):
    outs = []
    for threads in ("1", "3", "1"):
        monkeypatch.setenv("TNCODE_THREADS", threads)
        path = tmp_path / f"r{len(outs)}.csv"
        assert run(capsys, "sample", "--radius", "1,2", "--p", "0.05,0.1", "--samples", "40", "--seed", "3",
                   "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_trials_out(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, _ = run(capsys, "sample", "--radius", "2", "--p", "0.1", "--samples", "10", "--seed", "1",
                  "--trials-out", str(path))
    assert code == 0 and len(path.read_text().splitlines()) == 11
    assert run(capsys, "sample", "--radius", "2", "--p", "0.1,0.2", "--samples", "10", "--seed", "1",
               "--trials-out", str(path))[0] == 2


def test_qfrac_and_word(tmp_path, capsys):
    path = tmp_path / "q.csv"
    code, out = run(capsys, "qfrac", "--radius", "2", "--p", "0.03", "--samples", "20", "--seed", "2",
                    "--out", str(path))
    assert code == 0 and "q_frac=" in out
    assert path.read_text().splitlines()[1].split(",")[3] == "0 1 2 3 4 5 6 7"
    code, out = run(capsys, "word", "--radius", "2", "--p", "0.03", "--samples", "20", "--seed", "2",
                    "--method", "coset", "--qubits", "radius2")
    assert code == 0 and "method=coset" in out


def test_decode(capsys):
    code, out = run(capsys, "decode", "--radius", "1", "--error", "IIXIIII", "--p", "0.1", "--joint")
    assert code == 0
    assert "parallel word X" in out and "joint word X" in out
    code, out = run(capsys, "decode", "--radius", "2", "--syndrome", "0" * 34, "--p", "0.05",
                    "--qubits", "1,2,8")
    assert code == 0 and "parallel word III" in out
    assert run(capsys, "decode", "--radius", "1", "--syndrome", "01", "--p", "0.1")[0] == 2


def test_fit_recovers_planted_threshold(tmp_path, capsys):
    from tncode.experiments import EstimateResult, write_results

    rows = synthetic([1.0, 0.9, 0.3])
    results = [EstimateResult(r["radius"], r["n"], 1, (0,), r["p"], "counting", 1000, 0, r["p_fail"], r["stderr"])
               for r in rows]
    path = tmp_path / "results.csv"
    write_results(results, path)
    report = tmp_path / "fit.json"
    code, out = run(capsys, "fit", "--in", str(path), "--reference-radius", "4", "--out", str(report))
    assert code == 0
    rep = json.loads(report.read_text())
    assert abs(rep["p_th"] - 0.09) < 1e-4 and abs(rep["nu"] - 3) < 1e-2
    assert len(rep["rescaled"]) == len(rows)
    assert run(capsys, "fit", "--in", str(path), "--max-iter", "3")[0] == 5


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, "sample", "--radius", "1", "--p", "0.1")[0] == 2  # seed is mandatory
    assert run(capsys, "sample", "--radius", "1", "--net", "x.json", "--p", "0.1", "--seed", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "build", "--radius", "7", "--out", str(tmp_path / "n.json"))[0] == 4
    assert run(capsys, "sample", "--radius", "3", "--max-radius-flat", "2", "--p", "0.1", "--seed", "1")[0] == 4
    assert run(capsys, "sample", "--radius", "1", "--p", "0.1", "--seed", "1", "--qubits", "2")[0] == 2
