import os

from hcnot.common.fireworks.core import WriteOutputFW, task_kwargs
from hcnot.common.firetasks.write_outputs import WriteExperimentOutput
from hcnot.optics.defaults import IDEAL_NOISE
from hcnot.optics.fireworks.core import SimulateBellStatesFW
from hcnot.analysis.fireworks.core import ReconstructStatesFW
from hcnot.analysis.firetasks.statistics import LoadCountTable, ReconstructStates
from hcnot.photonics.fireworks.core import CouplerDesignFW

TEST_FILES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))),
    "analysis",
    "tests",
    "test_files",
)


def test_task_kwargs_keeps_task_parameters():
    kwargs = {"fmt": "csv", "output_dir": "out", "priority": 3, "mc_samples": 10}
    assert task_kwargs(WriteExperimentOutput, kwargs) == {
        "fmt": "csv",
        "output_dir": "out",
    }


def test_fireworks_split_task_and_firework_kwargs():
    fw = WriteOutputFW("hom-scan", fmt="csv", config={"seed": 1}, spec={"_priority": 2})
    (task,) = fw.tasks
    assert task["experiment"] == "hom-scan"
    assert task["fmt"] == "csv"
    assert fw.spec["_priority"] == 2
    assert fw.name == "hom-scan-output"

    fw = SimulateBellStatesFW(IDEAL_NOISE, input_label="DH", fmt="csv", seed=5)
    (task,) = fw.tasks
    assert task["seed"] == 5
    assert "fmt" not in task

    fw = CouplerDesignFW(kind="BS", kappa_h=1.2, kappa_v=0.4, seed=5)
    (task,) = fw.tasks
    assert task["kind"] == "BS"
    assert "seed" not in task


def test_reconstruct_firework_loads_table_first():
    path = os.path.join(TEST_FILES, "phi_plus_counts.csv")
    fw = ReconstructStatesFW(input_csv=path, target="phi+", mc_samples=0)
    load, reconstruct = fw.tasks
    assert isinstance(load, LoadCountTable)
    assert isinstance(reconstruct, ReconstructStates)
    assert load["input_csv"] == path
    assert reconstruct["target"] == "phi+"
    assert len(ReconstructStatesFW(target="phi+").tasks) == 1
