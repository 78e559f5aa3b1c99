"""Define the single- and two-qubit states and operators shared by the gate
simulation and the tomography."""

import logging

import numpy as np

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

_S = 1 / np.sqrt(2)

# polarization kets in the (H, V) basis; L = (H + iV)/sqrt(2), R = (H - iV)/sqrt(2)
KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([_S, _S], dtype=complex),
    "A": np.array([_S, -_S], dtype=complex),
    "L": np.array([_S, 1j * _S], dtype=complex),
    "R": np.array([_S, -1j * _S], dtype=complex),
}

# measurement bases as (outcome 0, outcome 1)
BASES = {"HV": ("H", "V"), "DA": ("D", "A"), "LR": ("L", "R")}

PAULIS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Bell states in the (HH, HV, VH, VV) order
BELL_STATES = {
    "phi+": np.array([_S, 0, 0, _S], dtype=complex),
    "phi-": np.array([_S, 0, 0, -_S], dtype=complex),
    "psi+": np.array([0, _S, _S, 0], dtype=complex),
    "psi-": np.array([0, _S, -_S, 0], dtype=complex),
}

# control is qubit 1, target is qubit 2
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def ket(label):
    """
    Product ket of a string of polarization letters, e.g. ``"DH"``.
    """
    try:
        vector = np.array([1], dtype=complex)
        for letter in label:
            vector = np.kron(vector, KETS[letter])
    except KeyError:
        raise ValueError(
            f"unknown polarization state in {label}; supported ones are {list(KETS)}"
        )
    return vector


def density(vector):
    vector = np.asarray(vector, dtype=complex)
    return np.outer(vector, vector.conj())


def two_qubit_pauli(control, target):
    return np.kron(PAULIS[control], PAULIS[target])


def bell_fidelities(rho):
    """Fidelity of a two-qubit density matrix with each of the four Bell states."""
    return {
        name: float(np.real(vector.conj() @ rho @ vector))
        for name, vector in BELL_STATES.items()
    }


def werner_state(fidelity, target="psi-"):
    """
    Bell-diagonal state with weight ``fidelity`` on the target Bell state and equal
    weights (1 - fidelity)/3 on the other three; identical to the Werner mixture
    with the same fidelity.
    """
    rho = np.zeros((4, 4), dtype=complex)
    for name, vector in BELL_STATES.items():
        weight = fidelity if name == target else (1 - fidelity) / 3
        rho += weight * density(vector)
    return rho


def matrix_to_pairs(matrix):
    """Complex matrix as nested [re, im] pairs for JSON output."""
    matrix = np.asarray(matrix, dtype=complex)
    return np.stack([matrix.real, matrix.imag], axis=-1).tolist()


def pairs_to_matrix(pairs):
    parts = np.asarray(pairs, dtype=float)
    return parts[..., 0] + 1j * parts[..., 1]
