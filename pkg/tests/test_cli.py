"""End-to-end CLI runs: artifacts, exit codes, reproducibility."""
from __future__ import annotations

import json
import subprocess
import sys

import pytest

from abelift import serial
from abelift.cli import main
from abelift.graphs import Signing, complete_graph, cycle_graph
from abelift.groups import AbelianGroup


def _write_graph(path, g):
    serial.dump_json({"graph": g.to_json()}, str(path))
    return str(path)


def _write_signing(path, signing):
    serial.dump_json(signing.to_json(), str(path))
    return str(path)


def test_gen_base_writes_reproducible_artifact(tmp_path):
    out = tmp_path / "k4.json"
    argv = ["gen-base", "--kind", "complete", "--n", "4",
            "--out", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    payload = json.loads(first)
    assert payload["graph"]["n"] == 4
    assert set(payload["meta"]) == {"tool", "config_hash", "inputs"}
    assert payload["graph_hash"]
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_spectrum_union_roundtrip(tmp_path):
    base = cycle_graph(3)
    gp = _write_graph(tmp_path / "c3.json", base)
    sg = Signing.identity(base, AbelianGroup.cyclic(2))
    sg.values[0] = [1]
    sp = _write_signing(tmp_path / "sg.json", sg)
    out = tmp_path / "union.json"
    argv = ["spectrum", "--graph", gp, "--signing", sp,
            "--check", "union", "--out", str(out)]
    assert main(argv) == 0
    payload = json.loads(out.read_bytes())
    assert payload["passed"] and payload["adjacency_distance"] <= 1e-8
    assert payload["lambda_modulus"] == pytest.approx(2.0, abs=1e-9)
    assert len(payload["eigenvalues"]) == 6
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_spectrum_timing_is_opt_in(tmp_path):
    gp = _write_graph(tmp_path / "k4.json", complete_graph(4))
    sg = Signing.identity(complete_graph(4), AbelianGroup.cyclic(2))
    sp = _write_signing(tmp_path / "sg.json", sg)
    out = tmp_path / "ihara.json"
    assert main(["spectrum", "--graph", gp, "--signing", sp,
                 "--check", "ihara", "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())
    assert "runtime" not in payload
    assert payload["trivial"] and payload["passed"]
    assert main(["spectrum", "--graph", gp, "--signing", sp,
                 "--check", "ihara", "--out", str(out), "--timing"]) == 0
    assert "runtime" in json.loads(out.read_bytes())


def test_spectrum_mixing(tmp_path):
    gp = _write_graph(tmp_path / "k4.json", complete_graph(4))
    out = tmp_path / "mix.json"
    assert main(["spectrum", "--graph", gp, "--check", "mixing",
                 "--set-s", "1", "--set-t", "2", "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())
    assert payload["lhs"] == pytest.approx(0.25)
    assert payload["passed"]


def test_lift_search_walk_mode(tmp_path):
    gp = _write_graph(tmp_path / "c10.json", cycle_graph(10))
    out = tmp_path / "cert.json"
    argv = ["lift-search", "--graph", gp, "--mode", "walk", "--ell", "8",
            "--seeds", "4", "--master-seed", "7", "--out", str(out)]
    assert main(argv) == 0
    first = out.read_bytes()
    cert = json.loads(first)["certificate"]
    assert cert["mode"] == "walk"
    assert cert["candidates_evaluated"] == 4
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_lift_search_impossible_target_exits_one(tmp_path):
    gp = _write_graph(tmp_path / "c10.json", cycle_graph(10))
    out = tmp_path / "cert.json"
    code = main(["lift-search", "--graph", gp, "--mode", "walk",
                 "--ell", "8", "--seeds", "3", "--target", "0.1",
                 "--out", str(out)])
    assert code == 1
    payload = json.loads(out.read_bytes())
    assert payload["failed"] is True
    assert payload["certificate"]["met_target"] is False
    assert payload["certificate"]["lambda_lift"] > 0.1  # best effort kept


def test_lift_search_support_mode_chains_artifacts(tmp_path):
    bs_out = tmp_path / "bias.json"
    assert main(["pseudorandom", "biased-set", "--ellp", "2", "--m", "3",
                 "--nu", "1.0", "--size-budget", "8",
                 "--out", str(bs_out)]) == 0
    bs = json.loads(bs_out.read_bytes())["biased_set"]
    assert bs["support"] == [[0, 0, 0]]
    gp = _write_graph(tmp_path / "c3.json", cycle_graph(3))
    cert_out = tmp_path / "cert.json"
    assert main(["lift-search", "--graph", gp, "--mode", "support",
                 "--ell", "2", "--support", str(bs_out),
                 "--out", str(cert_out)]) == 0
    cert = json.loads(cert_out.read_bytes())["certificate"]
    assert cert["mode"] == "derandomized"
    assert cert["lambda_lift"] == pytest.approx(2.0, abs=1e-9)


def test_hikes_count_and_bounds(tmp_path):
    gp = _write_graph(tmp_path / "k4.json", complete_graph(4))
    out = tmp_path / "h.json"
    assert main(["hikes", "count", "--graph", gp, "--k", "1",
                 "--out", str(out)]) == 0
    assert json.loads(out.read_bytes())["count"] == 12
    assert main(["hikes", "check-bound", "--graph", gp, "--k", "2",
                 "--r", "1", "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())
    assert payload["passed"] and payload["count"] <= payload["bound1"]
    assert main(["hikes", "bounds", "--graph", gp, "--k", "3",
                 "--r", "1", "--out", str(out)]) == 0
    assert json.loads(out.read_bytes())["bound1"] == pytest.approx(4478976.0)


def test_hikes_mop(tmp_path):
    gp = _write_graph(tmp_path / "c100.json", cycle_graph(100))
    out = tmp_path / "mop.json"
    assert main(["hikes", "mop", "--graph", gp, "--r", "50",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())
    assert payload["hypothesis_ok"] and payload["passed"]
    assert payload["bound"] == pytest.approx(11.210340371976182)


def test_pseudorandom_hoeffding(tmp_path):
    gp = _write_graph(tmp_path / "c10.json", cycle_graph(10))
    out = tmp_path / "tail.json"
    assert main(["pseudorandom", "hoeffding", "--graph", gp, "--ell", "16",
                 "--threshold", "8", "--trials", "500",
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())
    assert payload["passed"]
    assert payload["trials"] == 500


def test_codes_toric_with_distance(tmp_path):
    out = tmp_path / "toric.json"
    assert main(["codes", "toric", "--ell", "2", "--distance", "exact",
                 "--out", str(out)]) == 0
    css = json.loads(out.read_bytes())["css"]
    assert css["n"] == 8 and css["k"] == 2
    assert css["distance"]["value"] == 2 and css["distance"]["certified"]


def test_codes_css_valid_failure_path(tmp_path):
    hx = tmp_path / "hx.json"
    hz = tmp_path / "hz.json"
    serial.dump_json([[1, 0]], str(hx))
    serial.dump_json([[1, 0]], str(hz))
    out = tmp_path / "check.json"
    code = main(["codes", "css-valid", "--hx", str(hx), "--hz", str(hz),
                 "--out", str(out)])
    assert code == 1
    payload = json.loads(out.read_bytes())
    assert payload["failed"] is True and payload["css_valid"] is False
    serial.dump_json([[1, 1]], str(hx))
    serial.dump_json([[1, 1]], str(hz))
    assert main(["codes", "css-valid", "--hx", str(hx), "--hz", str(hz),
                 "--out", str(out)]) == 0


def test_codes_tanner_from_certificate(tmp_path):
    gp = _write_graph(tmp_path / "k4.json", complete_graph(4))
    cert_out = tmp_path / "cert.json"
    assert main(["lift-search", "--graph", gp, "--mode", "walk",
                 "--ell", "3", "--seeds", "2", "--out", str(cert_out)]) == 0
    out = tmp_path / "tanner.json"
    alist = tmp_path / "tanner.alist"
    assert main(["codes", "tanner", "--cert", str(cert_out),
                 "--local", "even-weight", "--alist", str(alist),
                 "--out", str(out)]) == 0
    payload = json.loads(out.read_bytes())["tanner"]
    assert payload["circulant"] is True
    assert (payload["rows"], payload["cols"]) == (12, 18)
    assert alist.read_text().splitlines()[0] == "18 12"


def test_usage_errors_exit_two(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--graph"])  # missing value
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--graph", str(tmp_path / "absent.json"),
              "--check", "mixing", "--set-s", "0", "--set-t", "1"])
    assert exc.value.code == 2
    assert "missing input file" in capsys.readouterr().err


def test_json_flag_prints_payload(tmp_path, capsys):
    out = tmp_path / "k4.json"
    assert main(["gen-base", "--kind", "complete", "--n", "4",
                 "--out", str(out), "--json"]) == 0
    printed = capsys.readouterr().out.strip()
    assert printed == out.read_text().strip()


def test_console_script_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "abelift.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_bad_semantic_input_exits_one(tmp_path, capsys):
    gp = _write_graph(tmp_path / "k4.json", complete_graph(4))
    code = main(["spectrum", "--graph", gp, "--check", "mixing",
                 "--set-s", "", "--set-t", "1"])
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["failed"] is True and "error" in payload
