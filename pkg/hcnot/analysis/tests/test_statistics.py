import os

import numpy as np
import pytest

from hcnot.analysis.utilities.counting import CountRecord
from hcnot.analysis.firetasks.statistics import (
    LoadCountTable,
    ReconstructStates,
    EstimateTruthTable,
    group_records,
    measured_truth_table,
)

TEST_FILES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_files")

CNOT_ROWS = {"HH": "00", "HV": "01", "VH": "11", "VV": "10"}


def cnot_records(signal=900, leak=30, background=5):
    records = []
    for label, right in CNOT_ROWS.items():
        for outcome in ("00", "01", "10", "11"):
            counts = signal if outcome == right else leak
            records.append(
                CountRecord(
                    "HH", outcome, counts + 2 * background, background, background,
                    label=label,
                )
            )
    return records


def test_measured_truth_table():
    table = measured_truth_table(cnot_records())
    assert np.allclose(table.sum(axis=1), 1)
    assert table[2, 3] == pytest.approx(900 / 990)
    raw = measured_truth_table(cnot_records(), subtract_noise=False)
    assert raw[2, 3] == pytest.approx(910 / 1030)


def test_measured_truth_table_needs_every_input():
    records = [r for r in cnot_records() if r.label != "VV"]
    with pytest.raises(ValueError):
        measured_truth_table(records)


def test_group_records_by_label():
    groups = group_records(cnot_records())
    assert list(groups) == ["HH", "HV", "VH", "VV"]
    assert all(len(g) == 4 for g in groups.values())


def test_estimate_truth_table_task():
    spec = {"count_records": [r.as_dict() for r in cnot_records()]}
    action = EstimateTruthTable(mc_samples=50, seed=4).run_task(spec)
    result = action.mod_spec[0]["_set"]["results->truth_table"]
    assert result["overlap"] == pytest.approx(900 / 990)
    assert 0 < result["overlap_std"] < 0.02
    assert np.array(result["table_std"]).shape == (4, 4)
    assert action.propagate


def test_estimate_without_records():
    with pytest.raises(ValueError):
        EstimateTruthTable().run_task({})


def test_fit_bundled_table_in_one_firework():
    spec = {}
    load = LoadCountTable(input_csv=os.path.join(TEST_FILES, "phi_plus_counts.csv"))
    spec.update(load.run_task(spec).update_spec)
    assert len(spec["count_records"]) == 36
    action = ReconstructStates(target="phi+", compensate=True, mc_samples=0).run_task(
        spec
    )
    (state,) = action.mod_spec[0]["_set"]["results->tomography"]
    assert state["label"] is None
    assert state["fidelity"] > 0.99
    assert state["fidelity_compensated"] >= state["fidelity"] - 1e-9


def test_targets_follow_labels():
    spec = {}
    load = LoadCountTable(input_csv=os.path.join(TEST_FILES, "phi_plus_counts.csv"))
    spec.update(load.run_task(spec).update_spec)
    for record in spec["count_records"]:
        record["label"] = "D,H"
    spec["tomography_targets"] = {"D,H": "psi+"}
    action = ReconstructStates(mc_samples=0).run_task(spec)
    (state,) = action.mod_spec[0]["_set"]["results->tomography"]
    assert state["target"] == "psi+"
    assert state["fidelity"] < 0.01
