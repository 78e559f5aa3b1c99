"""Define one workflow per experiment and run workflows in-process."""

import copy
import logging

from fireworks import Workflow
from fireworks.utilities.dict_mods import apply_mod

from hcnot.config import ExperimentConfig
from hcnot.common.fireworks.core import WriteOutputFW
from hcnot.optics.fireworks.core import (
    SimulateHomScanFW,
    SimulateTruthTableFW,
    SimulateBellStatesFW,
)
from hcnot.analysis.fireworks.core import EstimateTruthTableFW, ReconstructStatesFW
from hcnot.photonics.fireworks.core import CouplingFW, CouplerDesignFW

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

WORKFLOW_KWARGS = Workflow.__init__.__code__.co_varnames


def _config_echo(config):
    return {k: v for k, v in config.as_dict().items() if not k.startswith("@")}


def _output_fw(config, parents, **kwargs):
    return WriteOutputFW(
        config.experiment,
        parents=parents,
        output_dir=config.io["output_dir"],
        fmt=config.io["format"],
        config=_config_echo(config),
        **kwargs,
    )


def _statistics(config):
    stats = config.statistics
    return {
        "integration_time": stats["integration_time_s"],
        "seed": stats["seed"],
        "sample_counts": stats["sample_counts"],
        "mc_samples": stats["mc_samples"],
    }


def truth_table_workflow(config, **kwargs):
    """
    Simulate the computational-basis counts of the corrected gate and estimate
    its truth table with Monte-Carlo errors.

    Args:
        config (ExperimentConfig): Validated configuration.
        kwargs (keyword arguments): Additional kwargs passed to the workflow.

    Returns:
        Workflow
    """
    fws = [SimulateTruthTableFW(config.noise, **_statistics(config))]
    fws.append(EstimateTruthTableFW(parents=fws[:], **_statistics(config)))
    fws.append(_output_fw(config, fws[-1:]))
    return Workflow(
        fws,
        name="hcnot-truth-table",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


def bell_tomo_workflow(config, **kwargs):
    """
    Simulate the herald-resolved output states of a product input and reconstruct
    each of them from its tomography counts.

    Args:
        config (ExperimentConfig): Validated configuration.
        kwargs (keyword arguments): Additional kwargs passed to the workflow.

    Returns:
        Workflow
    """
    tomography = config.tomography
    fws = [
        SimulateBellStatesFW(
            config.noise, input_label=tomography["input_label"], **_statistics(config)
        )
    ]
    fws.append(
        ReconstructStatesFW(
            parents=fws[:],
            compensate=tomography["compensate"],
            mc_samples=config.statistics["mc_samples"],
            seed=config.statistics["seed"],
        )
    )
    fws.append(_output_fw(config, fws[-1:]))
    return Workflow(
        fws,
        name="hcnot-bell-tomo",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


def hom_scan_workflow(config, **kwargs):
    fws = [SimulateHomScanFW(config.noise)]
    fws.append(_output_fw(config, fws[:]))
    return Workflow(
        fws,
        name="hcnot-hom-scan",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


def coupling_workflow(config, **kwargs):
    photonics = config.photonics
    fws = [
        CouplingFW(
            old_fiber=photonics["old_fiber"],
            new_fiber=photonics["new_fiber"],
            facet=photonics["facet"],
            bulk=photonics["bulk"],
        )
    ]
    fws.append(_output_fw(config, fws[:]))
    return Workflow(
        fws,
        name="hcnot-coupling",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


def coupler_design_workflow(config, **kwargs):
    photonics = config.photonics
    fws = [
        CouplerDesignFW(
            **{
                key: photonics[key]
                for key in (
                    "kappa_h",
                    "kappa_v",
                    "max_length",
                    "kind",
                    "bandwidth_nm",
                    "target_extinction",
                )
            }
        )
    ]
    fws.append(_output_fw(config, fws[:]))
    return Workflow(
        fws,
        name="hcnot-coupler-design",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


def tomo_fit_workflow(config, **kwargs):
    """
    Reconstruct the density matrices of a measured count table; a label column
    splits the table into independent states.

    Args:
        config (ExperimentConfig): Validated configuration with
            ``tomography.input_csv`` set.
        kwargs (keyword arguments): Additional kwargs passed to the workflow.

    Returns:
        Workflow
    """
    tomography = config.tomography
    fws = [
        ReconstructStatesFW(
            input_csv=tomography["input_csv"],
            label_column=tomography["label_column"],
            target=tomography["target"],
            compensate=tomography["compensate"],
            mc_samples=config.statistics["mc_samples"],
            seed=config.statistics["seed"],
        )
    ]
    # the input table is not echoed back
    fws.append(_output_fw(config, fws[:], write_counts=False))
    return Workflow(
        fws,
        name="hcnot-tomo-fit",
        **{i: j for i, j in kwargs.items() if i in WORKFLOW_KWARGS},
    )


WORKFLOWS = {
    "truth-table": truth_table_workflow,
    "bell-tomo": bell_tomo_workflow,
    "hom-scan": hom_scan_workflow,
    "coupling": coupling_workflow,
    "coupler-design": coupler_design_workflow,
    "tomo-fit": tomo_fit_workflow,
}


def get_workflow(config, **kwargs):
    """
    Build the workflow of the experiment named in a configuration.

    Args:
        config (ExperimentConfig or dict): Configuration; a dictionary is turned
            into a validated ``ExperimentConfig`` first.

    Returns:
        Workflow
    """
    if isinstance(config, dict):
        config = ExperimentConfig(**config).validate()
    if config.experiment not in WORKFLOWS:
        raise ValueError(f"unknown experiment {config.experiment}")
    return WORKFLOWS[config.experiment](config, **kwargs)


def _topological_order(wf):
    children = {fw_id: list(ids) for fw_id, ids in wf.links.items()}
    n_parents = {fw_id: 0 for fw_id in wf.id_fw}
    for ids in children.values():
        for fw_id in ids:
            n_parents[fw_id] += 1
    ready = sorted(fw_id for fw_id, n in n_parents.items() if n == 0)
    order = []
    while ready:
        fw_id = ready.pop(0)
        order.append(fw_id)
        for child in sorted(children.get(fw_id, [])):
            n_parents[child] -= 1
            if n_parents[child] == 0:
                ready.append(child)
    if len(order) != len(wf.id_fw):
        raise ValueError(f"workflow {wf.name} has a cycle")
    return order


def _apply_action(action, spec):
    spec.update(action.update_spec)
    for mod in action.mod_spec:
        apply_mod(mod, spec)


def run_workflow_locally(wf):
    """
    Run every firework of a workflow in this process, in dependency order and
    without a LaunchPad. Within a firework each task sees the fw_spec changes of
    the previous tasks; propagated actions reach every descendant.

    Args:
        wf (Workflow): Workflow to run.

    Returns:
        dict: Spec of the last firework after all its tasks ran.
    """
    inherited = {fw_id: [] for fw_id in wf.id_fw}
    spec = {}
    for fw_id in _topological_order(wf):
        fw = wf.id_fw[fw_id]
        logger.info(f"running {fw.name}")
        spec = copy.deepcopy(fw.spec)
        for action in inherited[fw_id]:
            _apply_action(action, spec)
        actions = []
        for task in fw.tasks:
            action = task.run_task(spec)
            if action is None:
                continue
            _apply_action(action, spec)
            actions.append(action)
        for child in wf.links.get(fw_id, []):
            inherited[child] += [a for a in inherited[fw_id] if a.propagate] + actions
    return spec
