"""Define firetasks simulating the heralded gate and the source interference."""

import logging

import numpy as np

from fireworks.core.firework import FWAction, FiretaskBase
from fireworks.utilities.fw_utilities import explicit_serialize

from hcnot.optics.defaults import HERALD_KEYS, HOM_SCAN_POINTS, TRUTH_TABLE_INPUTS
from hcnot.optics.utilities.qubits import matrix_to_pairs
from hcnot.optics.utilities.source import NoiseConfig, hom_scan
from hcnot.optics.utilities.protocol import (
    QubitPair,
    FeedForwardRule,
    run_gate,
    truth_table,
    experiment_rates,
    truth_table_overlap,
    bell_state_assignment,
)
from hcnot.analysis.defaults import SEED, INTEGRATION_TIME, TOMOGRAPHY_SETTINGS
from hcnot.analysis.utilities.counting import records_from_rates
from hcnot.analysis.utilities.tomography import projectors

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

DEFAULT_KEY = "results"


def herald_label(key):
    return ",".join(key)


def _records(rates, settings, integration_time, rng, label):
    return [
        r.as_dict() for r in records_from_rates(rates, settings, integration_time, rng, label)
    ]


@explicit_serialize
class SimulateTruthTable(FiretaskBase):
    """
    Simulate the computational-basis truth table of the feed-forward corrected
    gate: the exact output distributions with and without noise subtraction and,
    from the four-fold rates, count records of the raw and both blocked-source
    measurements for every input.

    Args:
        noise (dict): Keyword arguments of ``NoiseConfig``.
        integration_time (float, optional): Integration time per input in s.
        seed (int, optional): Seed of the count sampling.
        sample_counts (bool, optional): Draw Poisson counts; otherwise the expected
            counts are rounded.
        convention (str, optional): PBS convention of the circuit.
    """

    required_params = ["noise"]
    optional_params = ["integration_time", "seed", "sample_counts", "convention"]

    def run_task(self, fw_spec):
        noise = NoiseConfig(**self["noise"])
        noise.check()
        convention = self.get("convention", "chip")
        integration_time = self.get("integration_time", INTEGRATION_TIME)
        rng = (
            np.random.default_rng(self.get("seed", SEED))
            if self.get("sample_counts", True)
            else None
        )
        rule = FeedForwardRule.default()

        subtracted = truth_table(noise, True, rule, convention)
        raw = truth_table(noise, False, rule, convention)
        records = []
        for label in TRUTH_TABLE_INPUTS:
            rates = experiment_rates(
                QubitPair.from_label(label), noise, rule=rule, convention=convention
            )
            # heralds are summed once the correction has been applied
            summed = {name: table.sum(axis=0) for name, table in rates.items()}
            records += _records(summed, ["HH"], integration_time, rng, label)
        logger.info(
            f"simulated truth table with overlap {truth_table_overlap(subtracted):.4f}"
        )
        result = {
            "inputs": list(TRUTH_TABLE_INPUTS),
            "table": subtracted.tolist(),
            "overlap": truth_table_overlap(subtracted),
            "table_without_subtraction": raw.tolist(),
            "overlap_without_subtraction": truth_table_overlap(raw),
        }
        return FWAction(
            mod_spec=[
                {
                    "_set": {
                        f"{DEFAULT_KEY}->simulated_truth_table": result,
                        "count_records": records,
                    }
                }
            ],
            propagate=True,
        )


@explicit_serialize
class SimulateBellStates(FiretaskBase):
    """
    Simulate state tomography of the gate output for one product input without
    feed-forward: the exact conditional state and its closest Bell state per
    herald outcome, and count records of the nine analyzer settings per herald
    outcome.

    Args:
        noise (dict): Keyword arguments of ``NoiseConfig``.
        input_label (str, optional): Product input, ``"DH"`` by default.
        integration_time (float, optional): Integration time per setting in s.
        seed (int, optional): Seed of the count sampling.
        sample_counts (bool, optional): Draw Poisson counts; otherwise the expected
            counts are rounded.
    """

    required_params = ["noise"]
    optional_params = ["input_label", "integration_time", "seed", "sample_counts"]

    def run_task(self, fw_spec):
        noise = NoiseConfig(**self["noise"])
        noise.check()
        input_label = self.get("input_label", "DH")
        integration_time = self.get("integration_time", INTEGRATION_TIME)
        rng = (
            np.random.default_rng(self.get("seed", SEED))
            if self.get("sample_counts", True)
            else None
        )
        pair = QubitPair.from_label(input_label)
        settings = list(TOMOGRAPHY_SETTINGS)
        rates = experiment_rates(
            pair, noise, projector_sets=[projectors(s) for s in settings]
        )
        assignment = bell_state_assignment(noise, input_label)
        outcomes = {o.key: o for o in run_gate(pair, noise)}

        branches, records, targets = [], [], {}
        for h, key in enumerate(HERALD_KEYS):
            label = herald_label(key)
            name, value = assignment[key]
            targets[label] = name
            branches.append(
                {
                    "herald": label,
                    "probability": outcomes[key].probability,
                    "bell_state": name,
                    "fidelity": value,
                    "rho": matrix_to_pairs(outcomes[key].conditional_state),
                }
            )
            branch_rates = {name: table[h] for name, table in rates.items()}
            records += _records(branch_rates, settings, integration_time, rng, label)
        logger.info(
            "simulated herald branches "
            + ", ".join(f"{b['herald']}: {b['bell_state']}" for b in branches)
        )
        return FWAction(
            mod_spec=[
                {
                    "_set": {
                        f"{DEFAULT_KEY}->simulated_states": {
                            "input": input_label,
                            "branches": branches,
                        },
                        "count_records": records,
                        "tomography_targets": targets,
                    }
                }
            ],
            propagate=True,
        )


@explicit_serialize
class SimulateHomScan(FiretaskBase):
    """
    Simulate the four-fold HOM curve between the two sources, with the double-pair
    emissions of either source as background.

    Args:
        noise (dict): Keyword arguments of ``NoiseConfig``.
        n_points (int, optional): Number of scan points.
    """

    required_params = ["noise"]
    optional_params = ["n_points"]

    def run_task(self, fw_spec):
        noise = NoiseConfig(**self["noise"])
        noise.check()
        scan = hom_scan(
            noise.distinguishability(),
            noise.ct_source(),
            noise.anc_source(),
            noise.transmission * noise.detector_efficiency,
            self.get("n_points", HOM_SCAN_POINTS),
        )
        logger.info(
            f"HOM visibility {scan['visibility_subtracted']:.3f} after subtraction, "
            f"{scan['visibility_raw']:.3f} raw"
        )
        return FWAction(
            mod_spec=[{"_set": {f"{DEFAULT_KEY}->hom_scan": scan}}], propagate=True
        )
