"""CLI subcommands: reports, determinism, schemas."""

import json

import numpy as np
import pytest

from surfcode.cli import main


@pytest.fixture()
def two_hole_config(tmp_path):
    cfg = {
        "width": 4, "height": 5, "boundary": "open",
        "holes": [{"x0": 1, "y0": 1, "x1": 2, "y1": 1},
                  {"x0": 1, "y0": 3, "x1": 2, "y1": 3}],
    }
    path = tmp_path / "two_hole.json"
    path.write_text(json.dumps(cfg))
    return str(path)


@pytest.fixture()
def torus_config(tmp_path):
    path = tmp_path / "torus.json"
    path.write_text(json.dumps({"width": 4, "height": 3,
                                "boundary": "torus", "holes": []}))
    return str(path)


def run(args, out_path):
    rc = main(args + ["--output", str(out_path)])
    assert rc == 0
    return out_path.read_text()


def test_degeneracy_two_holes(two_hole_config, tmp_path):
    text = run(["degeneracy", "--config", two_hole_config],
               tmp_path / "r.json")
    rep = json.loads(text)
    assert rep["Q"] == 4
    assert rep["N_active"] == 20
    assert rep["config_hash"]
    assert rep["artifact_version"]


def test_report_bytes_deterministic(two_hole_config, tmp_path):
    a = run(["degeneracy", "--config", two_hole_config], tmp_path / "a.json")
    b = run(["degeneracy", "--config", two_hole_config], tmp_path / "b.json")
    assert a == b


def test_gates_pi8_schedule(tmp_path):
    text = run(["gates", "--gate", "pi8", "--hx-tilde", "1e-3",
                "--hz-tilde", "1e-3"], tmp_path / "g.json")
    rep = json.loads(text)
    assert rep["pulse_product_error"] <= 1e-12
    assert [p["axis"] for p in rep["pulses"]] == ["x", "z"]
    assert rep["pulses"][0]["duration"] == pytest.approx(np.pi / 8 / 1e-3)
    U = np.array(rep["unitary_re"]) + 1j * np.array(rep["unitary_im"])
    assert np.max(np.abs(U @ U.conj().T - np.eye(2))) < 1e-12


def strip_comments(text):
    return [ln for ln in text.strip().splitlines() if not ln.startswith("#")]


def test_dispersion_csv(tmp_path):
    text = run(["dispersion", "--kind", "vortex", "--hx", "0.1",
                "--npts", "64", "--sample", "8"], tmp_path / "d.csv")
    assert "# artifact_version=" in text
    lines = strip_comments(text)
    assert lines[0] == "kx,ky,energy"
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    energies = [r[2] for r in rows]
    assert min(energies) >= 2 * np.sqrt(1 - 0.4) - 1e-9


def test_spectrum_on_torus(torus_config, tmp_path):
    text = run(["spectrum", "--config", torus_config, "--k-count", "3",
                "--tol", "1e-9"], tmp_path / "s.json")
    rep = json.loads(text)
    vals = rep["eigenvalues"]
    assert vals[1] - vals[0] < 1e-8       # Q=2 torus
    assert vals[2] - vals[0] > 1.5


def test_tomography_roundtrip_cli(tmp_path):
    text = run(["tomography", "--n", "1", "--state", "random",
                "--seed", "5"], tmp_path / "t.json")
    rep = json.loads(text)
    assert rep["parameter_count"] == 2
    assert rep["residual"] <= 1e-6
    assert len(rep["plan"]) == 3


def test_decoherence_sweep_csv(tmp_path):
    text = run(["decoherence", "--sweep", "hx=0.005:0.05:6", "--Lp", "10"],
               tmp_path / "c.csv")
    lines = strip_comments(text)
    assert lines[0] == "hx,B,T_star,t_de"
    tstars = [float(ln.split(",")[2]) for ln in lines[1:]]
    assert all(a < b for a, b in zip(tstars, tstars[1:]))


def test_init_trace_csv(tmp_path):
    text = run(["init", "--n", "2", "--T", "600", "--steps", "120",
                "--trace", "10", "--jxx", "1e-5", "--hx-tilde", "2e-5"],
               tmp_path / "i.csv")
    lines = strip_comments(text)
    assert lines[0] == "t,h,fidelity"
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    assert rows[0][0] < rows[-1][0] <= 0.0     # times run up to zero
    hs = [r[1] for r in rows]
    assert all(a >= b for a, b in zip(hs, hs[1:]))   # field ramps off
    assert rows[-1][2] > 0.99


@pytest.fixture()
def one_hole_config(tmp_path):
    cfg = {"width": 4, "height": 4, "boundary": "open",
           "holes": [{"x0": 1, "y0": 1, "x1": 1, "y1": 2}]}
    path = tmp_path / "one_hole.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_compare_splitting_cli(one_hole_config, tmp_path):
    text = run(["compare-splitting", "--config", one_hole_config,
                "--axis", "y", "--h-values", "0.1", "--tol", "1e-9"],
               tmp_path / "cmp.json")
    rep = json.loads(text)
    assert rep["path_length"] == 2
    row = rep["table"][0]
    assert row["ed_splitting"] > 0 and row["closed_form"] > 0
    assert rep["fitted_constant"] == pytest.approx(row["ratio"])


def test_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"width": 2, "height": 2,
                               "boundary": "open", "holes": []}))
    rc = main(["degeneracy", "--config", str(bad),
               "--output", str(tmp_path / "x.json")])
    assert rc == 1
