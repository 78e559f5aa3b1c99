"""Run the heralded CNOT protocol: inputs, herald branches, feed-forward, truth
tables and Bell-state outputs."""

import logging
import itertools

import numpy as np

from monty.json import MSONable

from hcnot.optics.defaults import HERALD_KEYS, FEEDFORWARD_RULE, TRUTH_TABLE_INPUTS
from hcnot.optics.utilities.fock import ModeBasis
from hcnot.optics.utilities.source import (
    ANC_ARMS,
    CT_ARMS,
    NoiseConfig,
    pair_matrix,
    pairs_state,
    bell_ensemble,
    class_outcomes,
    four_fold_rates,
    emission_ensemble,
)
from hcnot.optics.utilities.qubits import (
    CNOT,
    KETS,
    BELL_STATES,
    ket,
    density,
    bell_fidelities,
)
from hcnot.optics.utilities.elements import herald_circuit
from hcnot.optics.utilities.heralding import (
    apply_correction,
    resolve_heralds,
    combine_outcomes,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

# row = input, column = output, both in HH, HV, VH, VV order
IDEAL_TRUTH_TABLE = np.abs(CNOT.T) ** 2

_ALLOWED_CORRECTIONS = {("I", "I"), ("I", "X"), ("Z", "I"), ("Z", "X")}


class QubitPair(MSONable):
    """
    Product input (alpha|H> + beta|V>)_c (gamma|H> + delta|V>)_t.
    """

    def __init__(self, alpha, beta, gamma, delta):
        alpha, beta, gamma, delta = (complex(v) for v in (alpha, beta, gamma, delta))
        for name, (a, b) in (("control", (alpha, beta)), ("target", (gamma, delta))):
            if abs(abs(a) ** 2 + abs(b) ** 2 - 1) > 1e-10:
                raise ValueError(f"{name} qubit amplitudes are not normalized")
        self.alpha, self.beta, self.gamma, self.delta = alpha, beta, gamma, delta

    @classmethod
    def from_label(cls, label):
        """Input from two polarization letters, e.g. ``"DH"``."""
        if len(label) != 2 or any(letter not in KETS for letter in label):
            raise ValueError(
                f"input label {label} must be two letters out of {list(KETS)}"
            )
        return cls(*KETS[label[0]], *KETS[label[1]])

    @classmethod
    def random(cls, rng):
        """Haar-random product input drawn with a numpy Generator."""
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        control = z[:2] / np.linalg.norm(z[:2])
        target = z[2:] / np.linalg.norm(z[2:])
        return cls(*control, *target)

    @property
    def control(self):
        return np.array([self.alpha, self.beta])

    @property
    def target(self):
        return np.array([self.gamma, self.delta])

    @property
    def ket(self):
        return np.kron(self.control, self.target)

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            **{
                name: [getattr(self, name).real, getattr(self, name).imag]
                for name in ("alpha", "beta", "gamma", "delta")
            },
        }

    @classmethod
    def from_dict(cls, d):
        return cls(*(complex(*d[name]) for name in ("alpha", "beta", "gamma", "delta")))


class FeedForwardRule(MSONable):
    """
    Pauli correction (control, target) for each herald outcome.
    """

    def __init__(self, corrections):
        parsed = {}
        for key, paulis in corrections.items():
            if isinstance(key, str):
                key = tuple(key.split(","))
            parsed[tuple(key)] = tuple(paulis)
        if set(parsed) != set(HERALD_KEYS):
            raise ValueError(
                f"a feed-forward rule needs exactly the herald outcomes {HERALD_KEYS}"
            )
        for key, paulis in parsed.items():
            if paulis not in _ALLOWED_CORRECTIONS:
                raise ValueError(
                    f"correction {paulis} for {key} is not one of "
                    f"{sorted(_ALLOWED_CORRECTIONS)}"
                )
        self.corrections = parsed

    @classmethod
    def default(cls):
        return cls(FEEDFORWARD_RULE)

    def __getitem__(self, key):
        return self.corrections[tuple(key)]

    def __eq__(self, other):
        return isinstance(other, FeedForwardRule) and self.corrections == other.corrections

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "corrections": {
                ",".join(key): list(paulis) for key, paulis in self.corrections.items()
            },
        }


def _input_state(basis, pair, noise, ancilla_name):
    ct_wp = noise.distinguishability().wavepacket(1)
    anc_wp = noise.distinguishability().wavepacket(0)
    return pairs_state(
        basis,
        [
            (CT_ARMS, np.outer(pair.control, pair.target), (ct_wp, ct_wp)),
            (ANC_ARMS, pair_matrix(ancilla_name), (anc_wp, anc_wp)),
        ],
    ).prune()


def run_gate(pair, noise=None, convention="chip", wiring=None):
    """
    Send one control and one target photon through the gate together with the
    ancilla pair, and split the output into the four herald branches. A degraded
    ancilla is averaged over its Bell-diagonal ensemble.

    Args:
        pair (QubitPair): Input state.
        noise (NoiseConfig, optional): Imperfections; ideal by default.
        convention (str, optional): PBS convention of the circuit.
        wiring (dict, optional): Coupler wiring table.

    Returns:
        list: Four HeraldOutcomes in (D,H), (D,V), (A,H), (A,V) order, conditional
            states before feed-forward.
    """
    noise = noise or NoiseConfig.ideal()
    noise.check()
    basis = ModeBasis.standard(noise.n_internal)
    circuit = herald_circuit(noise.n_internal, convention, noise.pbs_leakage, wiring)
    weighted = [
        (weight, resolve_heralds(_input_state(basis, pair, noise, name), circuit))
        for weight, name in bell_ensemble(noise.ancilla_fidelity)
    ]
    return combine_outcomes(weighted)


def herald_probability(pair, noise=None, **kwargs):
    return sum(outcome.probability for outcome in run_gate(pair, noise, **kwargs))


def apply_feedforward(outcome, rule=None):
    """
    Corrected control-target state of a herald branch.

    Args:
        outcome (HeraldOutcome): The herald branch.
        rule (FeedForwardRule, optional): Correction table; the frozen default
            table by default.

    Returns:
        np.ndarray: 4x4 density matrix.
    """
    rule = rule or FeedForwardRule.default()
    return apply_correction(outcome.conditional_state, rule[outcome.key])


def ideal_cnot_output(pair):
    return CNOT @ pair.ket


def _output_distribution(outcomes, rule):
    total = sum(outcome.probability for outcome in outcomes)
    if total <= 0:
        raise ValueError("no herald branch fires for this input")
    row = sum(
        outcome.probability * np.real(np.diag(apply_feedforward(outcome, rule)))
        for outcome in outcomes
    )
    return row / total


def truth_table(noise=None, subtract_noise=True, rule=None, convention="chip"):
    """
    Herald-conditioned, feed-forward corrected output distribution for each
    computational input.

    Args:
        noise (NoiseConfig, optional): Imperfections; ideal by default.
        subtract_noise (bool, optional): If True only the one-pair-per-source
            events contribute, which is what subtracting the blocked-source rates
            leaves; otherwise the double-pair emissions are added with their
            emission weights.
        rule (FeedForwardRule, optional): Correction table.
        convention (str, optional): PBS convention of the circuit.

    Returns:
        np.ndarray: 4x4 table, rows inputs and columns outputs in HH, HV, VH, VV
            order; every row sums to 1.
    """
    noise = noise or NoiseConfig.ideal()
    noise.check()
    rows = []
    for label in TRUTH_TABLE_INPUTS:
        pair = QubitPair.from_label(label)
        if subtract_noise:
            outcomes = run_gate(pair, noise, convention)
        else:
            circuit = herald_circuit(noise.n_internal, convention, noise.pbs_leakage)
            events = emission_ensemble(
                noise.ct_source(),
                noise.anc_source(),
                noise.distinguishability(),
                pair,
                ModeBasis.standard(noise.n_internal),
            )
            classes = class_outcomes(events, circuit)
            outcomes = combine_outcomes([(1.0, o) for o in classes.values()])
        rows.append(_output_distribution(outcomes, rule))
    return np.array(rows)


def truth_table_overlap(measured, ideal=None):
    """
    Mean over the inputs of the probability assigned to the ideal output.

    Args:
        measured (np.ndarray): 4x4 truth table.
        ideal (np.ndarray, optional): Ideal table; the CNOT permutation by default.

    Returns:
        float: Overlap in [0, 1].
    """
    ideal = IDEAL_TRUTH_TABLE if ideal is None else np.asarray(ideal)
    measured = np.asarray(measured, dtype=float)
    if measured.shape != ideal.shape:
        raise ValueError(
            f"truth tables of shapes {measured.shape} and {ideal.shape} differ"
        )
    return float(np.mean(np.sum(measured * ideal, axis=1)))


def derive_feedforward_rule(convention="chip", wiring=None, probes=None):
    """
    Find, by simulating the ideal gate, the Pauli correction that maps every herald
    branch onto the ideal CNOT output for all probe inputs.

    Args:
        convention (str, optional): PBS convention.
        wiring (dict, optional): Coupler wiring table.
        probes (list, optional): Input labels; HH, VV, DH and DV by default,
            which fix both the control phase and the target flip.

    Returns:
        FeedForwardRule: The derived rule.
    """
    probes = probes or ["HH", "VV", "DH", "DV"]
    results = {
        label: run_gate(QubitPair.from_label(label), convention=convention, wiring=wiring)
        for label in probes
    }
    corrections = {}
    for position, key in enumerate(HERALD_KEYS):
        matching = []
        for paulis in itertools.product(("I", "Z"), ("I", "X")):
            if all(
                np.real(
                    ideal_cnot_output(QubitPair.from_label(label)).conj()
                    @ apply_correction(outcomes[position].conditional_state, paulis)
                    @ ideal_cnot_output(QubitPair.from_label(label))
                )
                > 1 - 1e-9
                for label, outcomes in results.items()
            ):
                matching.append(paulis)
        if len(matching) != 1:
            raise ValueError(
                f"herald outcome {key} has {len(matching)} consistent corrections"
            )
        corrections[key] = matching[0]
    logger.info(f"derived feed-forward rule {corrections}")
    return FeedForwardRule(corrections)


def bell_state_assignment(noise=None, input_label="DH"):
    """
    Bell state produced in each herald branch (before feed-forward) for the input
    ``input_label``, with its fidelity.

    Returns:
        dict: {herald key: (Bell state name, fidelity)}.
    """
    assignment = {}
    for outcome in run_gate(QubitPair.from_label(input_label), noise):
        fidelities = bell_fidelities(outcome.conditional_state)
        name = max(fidelities, key=fidelities.get)
        assignment[outcome.key] = (name, fidelities[name])
    return assignment


def experiment_rates(pair, noise, projector_sets=None, rule=None, convention="chip"):
    """
    Four-fold rates (Hz) per emission class for an input prepared from the
    control-target source.

    Returns:
        dict: {event class: array (4 heralds, n_settings, n_outcomes)}.
    """
    noise.check()
    events = emission_ensemble(
        noise.ct_source(),
        noise.anc_source(),
        noise.distinguishability(),
        pair,
        ModeBasis.standard(noise.n_internal),
    )
    circuit = herald_circuit(noise.n_internal, convention, noise.pbs_leakage)
    return four_fold_rates(events, circuit, noise.detector(), projector_sets, rule)


def target_state(name_or_label):
    """Density matrix of a Bell state name or a product label such as ``"HV"``."""
    if name_or_label in BELL_STATES:
        return density(BELL_STATES[name_or_label])
    return density(ket(name_or_label))
