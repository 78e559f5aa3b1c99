"""Define firetasks estimating gate figures of merit from count records."""

import logging

import numpy as np

from fireworks.core.firework import FWAction, FiretaskBase
from fireworks.utilities.fw_utilities import explicit_serialize

from hcnot.optics.defaults import TRUTH_TABLE_INPUTS
from hcnot.optics.utilities.qubits import BELL_STATES, matrix_to_pairs
from hcnot.optics.utilities.protocol import truth_table_overlap
from hcnot.analysis.defaults import (
    SEED,
    OUTCOMES,
    MC_SAMPLES,
    MC_MLE_OPTIONS,
    TOMOGRAPHY_SETTINGS,
)
from hcnot.analysis.utilities.counting import (
    CountRecord,
    monte_carlo,
    noise_subtract,
    read_count_table,
)
from hcnot.analysis.utilities.tomography import (
    purity,
    fidelity,
    counts_array,
    mle_reconstruct,
    compensate_local_unitaries,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

DEFAULT_KEY = "results"


def _load_records(fw_spec):
    records = fw_spec.get("count_records")
    if not records:
        raise ValueError("no count records in the fw_spec")
    return [CountRecord.from_dict(r) for r in records]


def measured_truth_table(records, inputs=TRUTH_TABLE_INPUTS, subtract_noise=True):
    """
    Truth table from computational-basis count records labeled by input; every
    row is normalized over the four outputs.

    Raises:
        ValueError: If an input has no positive total.
    """
    table = np.zeros((len(inputs), len(OUTCOMES)))
    for record in records:
        if record.label in inputs and record.setting == "HH":
            value = noise_subtract(record) if subtract_noise else record.raw
            table[inputs.index(record.label), OUTCOMES.index(record.outcome)] = value
    totals = table.sum(axis=1)
    if np.any(totals <= 0):
        raise ValueError("an input has no counts left after noise subtraction")
    return table / totals[:, None]


def group_records(records):
    groups = {}
    for record in records:
        groups.setdefault(record.label, []).append(record)
    return groups


@explicit_serialize
class EstimateTruthTable(FiretaskBase):
    """
    Estimate the truth table and its overlap with the ideal CNOT from the count
    records in the fw_spec, with Monte-Carlo error bars.

    Args:
        mc_samples (int, optional): Number of Poisson resamples; 0 skips the error
            analysis.
        seed (int, optional): Seed of the resampling.
        subtract_noise (bool, optional): Subtract the blocked-source counts.
    """

    required_params = []
    optional_params = ["mc_samples", "seed", "subtract_noise"]

    def run_task(self, fw_spec):
        records = _load_records(fw_spec)
        subtract = self.get("subtract_noise", True)
        n_samples = self.get("mc_samples", MC_SAMPLES)

        table = measured_truth_table(records, subtract_noise=subtract)
        result = {
            "inputs": list(TRUTH_TABLE_INPUTS),
            "table": table.tolist(),
            "overlap": truth_table_overlap(table),
        }
        if n_samples:
            mc = monte_carlo(
                records,
                lambda r: measured_truth_table(r, subtract_noise=subtract),
                n_samples,
                seed=self.get("seed", SEED),
            )
            overlap_mc = monte_carlo(
                records,
                lambda r: truth_table_overlap(measured_truth_table(r, subtract_noise=subtract)),
                n_samples,
                seed=self.get("seed", SEED),
            )
            result.update(
                {
                    "table_std": mc.std.tolist(),
                    "overlap_std": overlap_mc.std,
                    "overlap_mc_mean": overlap_mc.mean,
                    "mc_samples": n_samples,
                    "rejected_fraction": overlap_mc.rejected_fraction,
                }
            )
            logger.info(
                f"truth-table overlap {result['overlap']:.4f} +- {overlap_mc.std:.4f}"
            )
        return FWAction(
            mod_spec=[{"_set": {f"{DEFAULT_KEY}->truth_table": result}}], propagate=True
        )


def _state_report(records, target, compensate):
    counts = counts_array(records)
    mle = mle_reconstruct(counts)
    rho = mle.rho
    report = {
        "rho": matrix_to_pairs(rho),
        "purity": purity(rho),
        "log_likelihood": mle.log_likelihood,
        "iterations": mle.iterations,
        "converged": mle.converged,
    }
    if target is not None:
        vector = BELL_STATES[target]
        report.update({"target": target, "fidelity": fidelity(rho, vector)})
        if compensate:
            rotated, phases, value = compensate_local_unitaries(rho, vector)
            report.update(
                {
                    "rho_compensated": matrix_to_pairs(rotated),
                    "compensation_phases": list(phases),
                    "fidelity_compensated": value,
                }
            )
    return report


def _fidelity_estimator(target, compensate):
    vector = BELL_STATES[target]

    def estimator(records):
        rho = mle_reconstruct(counts_array(records), **MC_MLE_OPTIONS).rho
        if compensate:
            return compensate_local_unitaries(rho, vector)[2]
        return fidelity(rho, vector)

    return estimator


@explicit_serialize
class ReconstructStates(FiretaskBase):
    """
    Reconstruct one density matrix per record label by maximum likelihood and
    compare it with its target Bell state, with Monte-Carlo errors of the
    fidelity.

    Args:
        targets (dict, optional): {label: Bell state name}; falls back to
            ``tomography_targets`` in the fw_spec.
        target (str, optional): Bell state name used for every label.
        compensate (bool, optional): Also report the fidelity after the local
            phase compensation.
        mc_samples (int, optional): Number of Poisson resamples; 0 skips the error
            analysis.
        seed (int, optional): Seed of the resampling.
    """

    required_params = []
    optional_params = ["targets", "target", "compensate", "mc_samples", "seed"]

    def run_task(self, fw_spec):
        records = _load_records(fw_spec)
        targets = self.get("targets") or fw_spec.get("tomography_targets") or {}
        default_target = self.get("target")
        compensate = self.get("compensate", False)
        n_samples = self.get("mc_samples", MC_SAMPLES)
        seed = self.get("seed", SEED)

        states = []
        for label, group in group_records(records).items():
            target = targets.get(label, default_target)
            report = _state_report(group, target, compensate)
            report["label"] = label
            if n_samples and target is not None:
                mc = monte_carlo(
                    group, _fidelity_estimator(target, compensate), n_samples, seed=seed
                )
                report.update(
                    {
                        "fidelity_std": mc.std,
                        "fidelity_mc_mean": mc.mean,
                        "mc_samples": n_samples,
                        "rejected_fraction": mc.rejected_fraction,
                    }
                )
            if target is not None:
                logger.info(f"state {label}: fidelity {report['fidelity']:.4f} to {target}")
            states.append(report)
        return FWAction(
            mod_spec=[{"_set": {f"{DEFAULT_KEY}->tomography": states}}], propagate=True
        )


@explicit_serialize
class LoadCountTable(FiretaskBase):
    """
    Read a count table file into the fw_spec.

    Args:
        input_csv (str): Count table.
        label_column (str, optional): Name of a leading label column.
    """

    required_params = ["input_csv"]
    optional_params = ["label_column"]

    def run_task(self, fw_spec):
        records = read_count_table(self["input_csv"], self.get("label_column"))
        found = {r.setting for r in records}
        missing = [s for s in TOMOGRAPHY_SETTINGS if s not in found]
        if missing:
            logger.warning(f"count table lacks the settings {missing}")
        return FWAction(
            update_spec={"count_records": [r.as_dict() for r in records]},
            propagate=True,
        )
