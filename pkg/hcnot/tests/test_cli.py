import os
import json

import numpy as np
import pytest

import hcnot.config as config_module

from hcnot import __version__
from hcnot.cli import main, build_parser, overrides_from_args
from hcnot.optics.utilities.qubits import BELL_STATES, density, pairs_to_matrix
from hcnot.analysis.utilities.tomography import trace_distance

FIXTURE = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "analysis",
    "tests",
    "test_files",
    "phi_plus_counts.csv",
)


@pytest.fixture(autouse=True)
def empty_config_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(config_module, "CONFIG_FILE_DIR", str(tmp_path / "fw_config"))


def run(tmp_path, *args):
    out = str(tmp_path / "out")
    code = main(list(args) + ["--out", out, "--quiet"])
    return code, out


def read_document(out, name):
    with open(os.path.join(out, name)) as f:
        return json.load(f)


def test_flags_become_overrides():
    args = build_parser().parse_args(
        ["bell-tomo", "--seed", "3", "--cross-overlap", "0.9", "--ideal", "--compensate"]
    )
    overrides = overrides_from_args(args)
    assert overrides["experiment"] == "bell-tomo"
    assert overrides["preset"] == "ideal"
    assert overrides["statistics"] == {"seed": 3}
    assert overrides["noise"] == {"cross_overlap": 0.9}
    assert overrides["tomography"] == {"compensate": True}


def test_ideal_truth_table(tmp_path):
    code, out = run(
        tmp_path,
        "truth-table",
        "--ideal",
        "--mc-samples",
        "20",
        "--expected-counts",
        "--integration-time",
        "1e6",
    )
    assert code == 0
    document = read_document(out, "truth_table.json")
    assert document["version"] == __version__
    assert document["config"]["preset"] == "ideal"
    simulated = document["results"]["simulated_truth_table"]
    assert simulated["overlap"] == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(
        simulated["table"],
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
        atol=1e-9,
    )
    measured = document["results"]["truth_table"]
    assert measured["overlap"] == pytest.approx(1.0, abs=1e-3)
    assert measured["mc_samples"] == 20
    assert os.path.isfile(os.path.join(out, "truth_table_counts.csv"))


def test_fixed_seed_gives_identical_files(tmp_path):
    contents = []
    for _ in range(2):
        code, out = run(
            tmp_path,
            "truth-table",
            "--seed",
            "11",
            "--mc-samples",
            "10",
            "--integration-time",
            "36000",
        )
        assert code == 0
        with open(os.path.join(out, "truth_table.json")) as f:
            contents.append(f.read())
    assert contents[0] == contents[1]


def test_coupling_numbers(tmp_path):
    code, out = run(tmp_path, "coupling")
    assert code == 0
    coupling = read_document(out, "coupling.json")["results"]["coupling"]
    assert coupling["eta_old"] == pytest.approx(0.677, abs=2e-3)
    assert coupling["eta_new"] == pytest.approx(0.971, abs=2e-3)
    assert coupling["ratio"] == pytest.approx(0.434, abs=2e-3)


def test_csv_tables(tmp_path):
    code, out = run(tmp_path, "hom-scan", "--format", "csv")
    assert code == 0
    with open(os.path.join(out, "hom_scan_hom_scan.csv")) as f:
        lines = f.read().splitlines()
    assert lines[0] == f"# hcnot {__version__} hom-scan"
    assert lines[1].startswith("# config ")
    assert os.path.isfile(os.path.join(out, "hom_scan_hom_scan_summary.csv"))


def test_tomo_fit_on_bundled_table(tmp_path):
    code, out = run(
        tmp_path,
        "tomo-fit",
        "--input-csv",
        FIXTURE,
        "--target",
        "phi+",
        "--mc-samples",
        "0",
    )
    assert code == 0
    (state,) = read_document(out, "tomo_fit.json")["results"]["tomography"]
    rho = pairs_to_matrix(state["rho"])
    assert trace_distance(rho, density(BELL_STATES["phi+"])) < 0.01
    assert state["fidelity"] > 0.99
    assert not os.path.exists(os.path.join(out, "tomo_fit_counts.csv"))


def test_malformed_table_fails_with_line(tmp_path, caplog):
    path = tmp_path / "bad.csv"
    path.write_text(
        "setting_q1,setting_q2,outcome,raw,blocked_ct,blocked_anc\n"
        "H,H,00,10,1,1\nH,H,01,x,1,1\n"
    )
    code, _ = run(tmp_path, "tomo-fit", "--input-csv", str(path))
    assert code == 2
    assert "line 3" in caplog.text


def test_invalid_config_is_reported_at_once(tmp_path, caplog):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps({"noise": {"cross_overlap": 2.0}, "statistics": {"mc_samples": -5}})
    )
    code, out = run(
        tmp_path, "truth-table", "--config", str(path), "--ancilla-fidelity", "0.1"
    )
    assert code == 1
    for word in ("cross_overlap", "ancilla_fidelity", "mc_samples"):
        assert word in caplog.text
    assert not os.path.exists(out)


def test_unknown_subcommand_exits():
    with pytest.raises(SystemExit):
        main(["teleport"])
