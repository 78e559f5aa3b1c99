"""Define the herald outcomes of the gate and their projection from a propagated
multi-photon state."""

import logging

import numpy as np

from monty.json import MSONable

from hcnot.optics.defaults import HERALD_KEYS, HERALD_BASES
from hcnot.optics.utilities.fock import evolve, project_pattern, reduce_to_qubits
from hcnot.optics.utilities.qubits import (
    BASES,
    matrix_to_pairs,
    pairs_to_matrix,
    two_qubit_pauli,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

# herald probabilities below this are treated as a branch that never fires
MIN_HERALD_PROBABILITY = 1e-14


class HeraldOutcome(MSONable):
    """
    One herald branch: ancilla detector results, branch probability and the
    control-target polarization state conditioned on the branch.
    """

    def __init__(
        self, ancilla1_result, ancilla2_result, probability, conditional_state
    ):
        if ancilla1_result not in BASES[HERALD_BASES["a1"]]:
            raise ValueError(f"invalid ancilla 1 result {ancilla1_result}")
        if ancilla2_result not in BASES[HERALD_BASES["a2"]]:
            raise ValueError(f"invalid ancilla 2 result {ancilla2_result}")
        self.ancilla1_result = ancilla1_result
        self.ancilla2_result = ancilla2_result
        self.probability = float(probability)
        self.conditional_state = np.asarray(conditional_state, dtype=complex)

    @property
    def key(self):
        return self.ancilla1_result, self.ancilla2_result

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "ancilla1_result": self.ancilla1_result,
            "ancilla2_result": self.ancilla2_result,
            "probability": self.probability,
            "conditional_state": matrix_to_pairs(self.conditional_state),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["ancilla1_result"],
            d["ancilla2_result"],
            d["probability"],
            pairs_to_matrix(d["conditional_state"]),
        )


def herald_pattern(basis, key):
    """
    Detection pattern of a herald outcome after the analysis rotations: exactly one
    photon in the detector of the observed result and none in the other detector
    of the same ancilla mode.
    """
    pattern = {}
    for mode, result in zip(("a1", "a2"), key):
        first, _ = BASES[HERALD_BASES[mode]]
        clicked, dark = ("H", "V") if result == first else ("V", "H")
        pattern[basis.group(mode, clicked)] = 1
        pattern[basis.group(mode, dark)] = 0
    return pattern


def resolve_heralds(state, circuit, qubit_modes=("c", "t")):
    """
    Propagate a state through the herald circuit and split it into the four herald
    branches.

    Args:
        state (PureState): Input state including the ancilla photons.
        circuit (ModeUnitary): Gate followed by the herald analysis rotations.
        qubit_modes (tuple): Spatial modes carrying control and target.

    Returns:
        list: Four HeraldOutcomes in HERALD_KEYS order; probabilities are absolute
            (they include the squared norm of a sub-normalized input).
    """
    output = evolve(state, circuit)
    outcomes = []
    for key in HERALD_KEYS:
        probability, conditional = project_pattern(
            output, herald_pattern(output.basis, key)
        )
        if probability > MIN_HERALD_PROBABILITY:
            rho = reduce_to_qubits(conditional, list(qubit_modes))
        else:
            probability, rho = 0.0, np.eye(4, dtype=complex) / 4
        outcomes.append(HeraldOutcome(*key, probability, rho))
    return outcomes


def combine_outcomes(weighted):
    """
    Mix herald outcomes of an ensemble of pure runs.

    Args:
        weighted (list): List of (weight, [HeraldOutcome x 4]) tuples.

    Returns:
        list: Four HeraldOutcomes with probability sum_i w_i P_i and state
            sum_i w_i P_i rho_i / sum_i w_i P_i.
    """
    combined = []
    for position, key in enumerate(HERALD_KEYS):
        probability = 0.0
        rho = np.zeros((4, 4), dtype=complex)
        for weight, outcomes in weighted:
            outcome = outcomes[position]
            probability += weight * outcome.probability
            rho += weight * outcome.probability * outcome.conditional_state
        if probability > MIN_HERALD_PROBABILITY:
            rho = rho / probability
        else:
            rho = np.eye(4, dtype=complex) / 4
        combined.append(HeraldOutcome(*key, probability, rho))
    return combined


def apply_correction(rho, paulis):
    """
    Conjugate a control-target density matrix by a Pauli pair.

    Args:
        rho (np.ndarray): 4x4 density matrix.
        paulis (tuple): (control Pauli, target Pauli) names from {I, X, Y, Z}.

    Returns:
        np.ndarray: (P_c x P_t) rho (P_c x P_t)^dagger.
    """
    operator = two_qubit_pauli(*paulis)
    return operator @ rho @ operator.conj().T
