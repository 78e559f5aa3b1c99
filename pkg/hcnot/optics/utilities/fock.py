"""Define the Fock-space representation of multi-photon states and their evolution
through linear-optical networks."""

import logging
import itertools

from math import factorial, sqrt
from functools import lru_cache

import numpy as np

from monty.json import MSONable

from hcnot.optics.defaults import (
    ZERO_TOL,
    UNITARY_TOL,
    POLARIZATIONS,
    SPATIAL_MODES,
    AMPLITUDE_CUTOFF,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

_FACTORIALS = np.array([factorial(n) for n in range(21)], dtype=float)


class DimensionError(Exception):
    """
    Exception that is thrown when a matrix does not match the shape required by an
    operation or by the mode basis it is used with.
    """

    def __init__(self, msg=None):
        if msg is None:
            msg = "matrix dimensions are inconsistent with the mode basis"
        self.msg = msg
        super(DimensionError, self).__init__(msg)

    def __repr__(self):
        return self.msg


class PatternError(Exception):
    """
    Exception that is thrown when a detection pattern is ill-formed or when a state
    does not carry the photon numbers a reduction requires.
    """

    def __init__(self, msg=None):
        if msg is None:
            msg = "detection pattern is inconsistent with the state"
        self.msg = msg
        super(PatternError, self).__init__(msg)

    def __repr__(self):
        return self.msg


class ModeLabel(MSONable):
    """
    A single optical mode: spatial waveguide mode, polarization and the internal
    (temporal-spectral) wavepacket index.
    """

    def __init__(self, spatial, polarization, internal=0):
        if spatial not in SPATIAL_MODES:
            raise ValueError(
                f"unknown spatial mode {spatial}; supported ones are {SPATIAL_MODES}"
            )
        if polarization not in POLARIZATIONS:
            raise ValueError(
                f"unknown polarization {polarization}; supported ones are "
                f"{POLARIZATIONS}"
            )
        if int(internal) < 0:
            raise ValueError("internal wavepacket index must be non-negative")
        self.spatial = spatial
        self.polarization = polarization
        self.internal = int(internal)

    @property
    def key(self):
        return (
            SPATIAL_MODES.index(self.spatial),
            POLARIZATIONS.index(self.polarization),
            self.internal,
        )

    def __eq__(self, other):
        return isinstance(other, ModeLabel) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"{self.spatial}_{self.polarization}{self.internal}"


class ModeBasis(MSONable):
    """
    Ordered collection of mode labels. The order is spatial mode, then polarization,
    then internal index, so that every matrix built on a basis is reproducible.
    """

    def __init__(self, labels):
        labels = [
            label if isinstance(label, ModeLabel) else ModeLabel.from_dict(label)
            for label in labels
        ]
        if len(set(labels)) != len(labels):
            raise ValueError("mode labels of a basis must be distinct")
        self.labels = tuple(sorted(labels))
        self._index = {label: i for i, label in enumerate(self.labels)}

    @classmethod
    def standard(cls, n_internal=1, spatial_modes=SPATIAL_MODES):
        """
        Build the basis of the full gate: every spatial mode times both polarizations
        times ``n_internal`` wavepacket labels.

        Args:
            n_internal (int): Number of internal labels per spatial/polarization pair.
            spatial_modes (tuple, optional): Spatial modes to include.

        Returns:
            ModeBasis: The basis.
        """
        return cls(
            [
                ModeLabel(s, p, k)
                for s in spatial_modes
                for p in POLARIZATIONS
                for k in range(n_internal)
            ]
        )

    @property
    def dim(self):
        return len(self.labels)

    @property
    def n_internal(self):
        return max(label.internal for label in self.labels) + 1

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise DimensionError(f"mode {label} is not part of the basis")

    def group(self, spatial, polarization=None):
        """
        Labels seen by one threshold detector: all internal labels behind a spatial
        mode and, optionally, one polarization output.
        """
        return frozenset(
            label
            for label in self.labels
            if label.spatial == spatial
            and (polarization is None or label.polarization == polarization)
        )

    def __eq__(self, other):
        return isinstance(other, ModeBasis) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.labels)

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "labels": [label.as_dict() for label in self.labels],
        }


class FockState(MSONable):
    """
    Occupation-number vector over a mode basis.
    """

    def __init__(self, occupations):
        occupations = tuple(int(n) for n in occupations)
        if any(n < 0 for n in occupations):
            raise ValueError("occupation numbers must be non-negative")
        self.occupations = occupations

    @property
    def total_photons(self):
        return sum(self.occupations)

    def mode_list(self):
        """Mode indices repeated by their occupation, e.g. (2, 0, 1) -> [0, 0, 2]."""
        return [i for i, n in enumerate(self.occupations) for _ in range(n)]

    def to_mapping(self, basis):
        """Occupied labels of the state as a {ModeLabel: n} dict."""
        if len(self.occupations) != basis.dim:
            raise DimensionError(
                f"Fock state has {len(self.occupations)} modes; basis has {basis.dim}"
            )
        return {
            label: n for label, n in zip(basis.labels, self.occupations) if n > 0
        }

    def __eq__(self, other):
        return isinstance(other, FockState) and self.occupations == other.occupations

    def __hash__(self):
        return hash(self.occupations)

    def __repr__(self):
        return "|" + ",".join(str(n) for n in self.occupations) + ">"


class PureState(MSONable):
    """
    Superposition of Fock states with a common photon number. Sub-normalized states
    describe post-selected branches.
    """

    def __init__(self, basis, terms=None):
        self.basis = basis
        self.terms = {}
        n_photons = None
        for fock, amplitude in (terms or {}).items():
            fock = fock if isinstance(fock, FockState) else FockState(fock)
            if len(fock.occupations) != basis.dim:
                raise DimensionError(
                    f"Fock state {fock} does not match a basis of {basis.dim} modes"
                )
            if n_photons is None:
                n_photons = fock.total_photons
            elif fock.total_photons != n_photons:
                raise ValueError(
                    "all terms of a pure state must carry the same photon number"
                )
            self.terms[fock] = self.terms.get(fock, 0j) + complex(amplitude)

    @classmethod
    def vacuum(cls, basis):
        return cls(basis, {FockState([0] * basis.dim): 1.0})

    @classmethod
    def from_creation_product(cls, basis, factors, amplitude=1.0):
        """
        Expand a product of creation operators acting on vacuum. Each factor is a
        linear combination of single-mode creation operators given as a
        {ModeLabel: coefficient} dict. Uses a^dagger |n> = sqrt(n + 1) |n + 1> and
        no permanents, so it serves as an independent check of ``evolve``.

        Args:
            basis (ModeBasis): The mode basis.
            factors (list): List of {ModeLabel: complex} dicts.
            amplitude (complex, optional): Overall prefactor.

        Returns:
            PureState: The (generally unnormalized) state.
        """
        terms = {tuple([0] * basis.dim): complex(amplitude)}
        for factor in factors:
            new_terms = {}
            for occupations, amp in terms.items():
                for label, coefficient in factor.items():
                    if coefficient == 0:
                        continue
                    i = basis.index(label)
                    occ = list(occupations)
                    occ[i] += 1
                    occ = tuple(occ)
                    new_terms[occ] = new_terms.get(occ, 0j) + amp * coefficient * sqrt(
                        occ[i]
                    )
            terms = new_terms
        return cls(basis, {k: v for k, v in terms.items() if v != 0})

    @property
    def photon_number(self):
        for fock in self.terms:
            return fock.total_photons
        return 0

    @property
    def norm_squared(self):
        return float(sum(abs(a) ** 2 for a in self.terms.values()))

    def normalized(self):
        norm = sqrt(self.norm_squared)
        if norm == 0:
            raise ValueError("cannot normalize a state with zero norm")
        return PureState(self.basis, {f: a / norm for f, a in self.terms.items()})

    def prune(self, cutoff=AMPLITUDE_CUTOFF):
        return PureState(
            self.basis, {f: a for f, a in self.terms.items() if abs(a) ** 2 >= cutoff}
        )

    def amplitude(self, occupations):
        return self.terms.get(FockState(occupations), 0j)

    def __add__(self, other):
        if self.basis != other.basis:
            raise DimensionError("cannot add states defined on different bases")
        terms = dict(self.terms)
        for fock, amplitude in other.terms.items():
            terms[fock] = terms.get(fock, 0j) + amplitude
        return PureState(self.basis, terms)

    def __mul__(self, scalar):
        return PureState(
            self.basis, {f: a * complex(scalar) for f, a in self.terms.items()}
        )

    __rmul__ = __mul__

    def overlap(self, other):
        """<self|other>"""
        return sum(
            np.conj(a) * other.terms.get(fock, 0j) for fock, a in self.terms.items()
        )

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "basis": self.basis.as_dict(),
            "terms": [
                [list(f.occupations), [a.real, a.imag]] for f, a in self.terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, d):
        basis = ModeBasis.from_dict(d["basis"])
        return cls(basis, {tuple(occ): complex(*amp) for occ, amp in d["terms"]})


class ModeUnitary(MSONable):
    """
    Single-photon transfer matrix of a lossless linear-optical network. Column j is
    the image of the creation operator of mode j.
    """

    def __init__(self, basis, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (basis.dim, basis.dim):
            raise DimensionError(
                f"unitary of shape {matrix.shape} does not match a basis of "
                f"{basis.dim} modes"
            )
        deviation = np.abs(matrix.conj().T @ matrix - np.eye(basis.dim)).max()
        if deviation > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (max deviation {deviation:.2e})")
        matrix = np.where(np.abs(matrix) < ZERO_TOL, 0, matrix)
        self.basis = basis
        self.matrix = matrix

    @classmethod
    def identity(cls, basis):
        return cls(basis, np.eye(basis.dim))

    @classmethod
    def embed(cls, basis, blocks):
        """
        Build a unitary from 2x2 blocks acting on pairs of labels; every other mode
        is left untouched.

        Args:
            basis (ModeBasis): The mode basis.
            blocks (list): List of ((label_1, label_2), 2x2 array) tuples; the
                label pairs must be disjoint.
        """
        matrix = np.eye(basis.dim, dtype=complex)
        used = set()
        for (l1, l2), block in blocks:
            if l1 in used or l2 in used or l1 == l2:
                raise ValueError(f"overlapping blocks on modes {l1}, {l2}")
            used.update((l1, l2))
            i, j = basis.index(l1), basis.index(l2)
            block = np.asarray(block, dtype=complex)
            matrix[np.ix_([i, j], [i, j])] = block
        return cls(basis, matrix)

    def compose(self, other):
        """Network applying ``self`` first and ``other`` second."""
        if self.basis != other.basis:
            raise DimensionError("cannot compose unitaries on different bases")
        return ModeUnitary(self.basis, other.matrix @ self.matrix)

    def __matmul__(self, other):
        return other.compose(self)

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "basis": self.basis.as_dict(),
            "matrix": np.stack([self.matrix.real, self.matrix.imag], axis=-1).tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        parts = np.asarray(d["matrix"], dtype=float)
        return cls(ModeBasis.from_dict(d["basis"]), parts[..., 0] + 1j * parts[..., 1])


@lru_cache(maxsize=None)
def _ryser_subsets(n):
    subsets = np.array(list(itertools.product((0, 1), repeat=n))[1:], dtype=float)
    signs = (-1.0) ** (n - subsets.sum(axis=1))
    return subsets, signs


def batched_permanents(stack):
    """
    Permanents of a stack of square matrices with Ryser's inclusion-exclusion
    formula, O(2^n n) per matrix.

    Args:
        stack (np.ndarray): Array of shape (k, n, n).

    Returns:
        np.ndarray: Complex array of shape (k,).
    """
    stack = np.asarray(stack, dtype=complex)
    k, n, _ = stack.shape
    if n == 0:
        return np.ones(k, dtype=complex)
    subsets, signs = _ryser_subsets(n)
    row_sums = stack @ subsets.T
    return (np.prod(row_sums, axis=1) * signs).sum(axis=1)


def permanent(m):
    """
    Matrix permanent.

    Args:
        m (array-like): Square complex matrix.

    Returns:
        complex: per(m); the empty matrix has permanent 1.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"permanent requires a square matrix, got shape {m.shape}")
    return complex(batched_permanents(m[np.newaxis])[0])


def fock_basis(n_modes, n_photons):
    """All occupation tuples of ``n_photons`` photons in ``n_modes`` modes."""
    states = []
    for modes in itertools.combinations_with_replacement(range(n_modes), n_photons):
        occ = [0] * n_modes
        for i in modes:
            occ[i] += 1
        states.append(tuple(occ))
    return states


def evolve(state, u, cutoff=AMPLITUDE_CUTOFF):
    """
    Propagate a state through a linear-optical network. The amplitude from |n> to
    |m> is per(U[m, n]) / sqrt(prod n_i! prod m_j!), where U[m, n] repeats rows and
    columns by occupation. Only output modes reachable from the occupied input
    modes are enumerated.

    Args:
        state (PureState): Input state.
        u (ModeUnitary): The network.
        cutoff (float, optional): Squared-amplitude threshold below which output
            terms are dropped.

    Returns:
        PureState: Output state with the same photon number.
    """
    if state.basis != u.basis:
        raise DimensionError("state and unitary are defined on different bases")
    matrix = u.matrix
    out = {}
    for fock, amplitude in state.terms.items():
        in_modes = fock.mode_list()
        n = len(in_modes)
        if n == 0:
            out[fock.occupations] = out.get(fock.occupations, 0j) + amplitude
            continue
        reachable = np.flatnonzero(np.any(matrix[:, sorted(set(in_modes))] != 0, axis=1))
        outputs = np.array(
            list(itertools.combinations_with_replacement(reachable, n)), dtype=int
        )
        columns = np.array(in_modes)[np.newaxis, np.newaxis, :]
        sub = matrix[outputs[:, :, np.newaxis], columns]
        perms = batched_permanents(sub)
        occupations = np.zeros((len(outputs), matrix.shape[0]), dtype=int)
        np.add.at(
            occupations,
            (np.repeat(np.arange(len(outputs)), n), outputs.ravel()),
            1,
        )
        norm_in = np.prod(_FACTORIALS[list(fock.occupations)])
        norm_out = np.prod(_FACTORIALS[occupations], axis=1)
        values = amplitude * perms / np.sqrt(norm_in * norm_out)
        keep = np.flatnonzero(np.abs(values) > 0)
        for occ, value in zip(map(tuple, occupations[keep].tolist()), values[keep]):
            out[occ] = out.get(occ, 0j) + value
    return PureState(
        state.basis, {occ: a for occ, a in out.items() if abs(a) ** 2 >= cutoff}
    )


def _group_indices(basis, pattern):
    seen = set()
    groups = []
    for group, count in pattern.items():
        labels = frozenset(group)
        if seen & labels:
            raise PatternError(
                "detector groups overlap on modes "
                f"{sorted(seen & labels)}; every mode may belong to one detector only"
            )
        seen |= labels
        groups.append((np.array([basis.index(label) for label in labels]), int(count)))
    return groups


def project_pattern(state, pattern):
    """
    Post-select on exact photon numbers in a set of detector groups.

    Args:
        state (PureState): The state to project.
        pattern (dict): {group: count}, where a group is an iterable of ModeLabels
            (one detector) and count the exact number of photons required.

    Returns:
        tuple: (probability, conditional PureState); the conditional state is
            normalized, or empty when the probability vanishes.
    """
    groups = _group_indices(state.basis, pattern)
    kept = {}
    for fock, amplitude in state.terms.items():
        occ = np.array(fock.occupations)
        if all(occ[idx].sum() == count for idx, count in groups):
            kept[fock] = amplitude
    probability = float(sum(abs(a) ** 2 for a in kept.values()))
    if probability == 0:
        return 0.0, PureState(state.basis)
    norm = sqrt(probability)
    return probability, PureState(state.basis, {f: a / norm for f, a in kept.items()})


def detection_probability(state, groups, efficiency=1.0):
    """
    Probability that every threshold detector clicks when each photon is detected
    independently with probability ``efficiency``.

    Args:
        state (PureState): The state reaching the detectors.
        groups (list): Disjoint detector groups (iterables of ModeLabels).
        efficiency (float): Per-photon detection efficiency.

    Returns:
        float: Sum over terms of |amplitude|^2 prod_g (1 - (1 - eta)^n_g).
    """
    indices = [idx for idx, _ in _group_indices(state.basis, {g: 0 for g in groups})]
    probability = 0.0
    for fock, amplitude in state.terms.items():
        occ = np.array(fock.occupations)
        clicks = np.prod([1 - (1 - efficiency) ** occ[idx].sum() for idx in indices])
        probability += abs(amplitude) ** 2 * clicks
    return float(probability)


def reduce_to_qubits(state, spatial_modes):
    """
    Polarization density matrix of one photon in each of the given spatial modes,
    with the internal labels and all remaining modes traced out.

    Args:
        state (PureState): State with exactly one photon in each requested mode.
        spatial_modes (list): Spatial modes carrying the qubits, in qubit order.

    Returns:
        np.ndarray: Density matrix of dimension 2^len(spatial_modes), trace 1.
    """
    basis = state.basis
    mode_indices = [
        [basis.index(label) for label in sorted(basis.group(s))] for s in spatial_modes
    ]
    qubit_modes = set(i for idx in mode_indices for i in idx)
    env_modes = [i for i in range(basis.dim) if i not in qubit_modes]
    dim = 2 ** len(spatial_modes)
    environments = {}
    for fock, amplitude in state.terms.items():
        occ = fock.occupations
        qubit = 0
        internals = []
        for s, idx in zip(spatial_modes, mode_indices):
            occupied = [i for i in idx if occ[i] > 0]
            if sum(occ[i] for i in idx) != 1:
                raise PatternError(
                    f"qubit reduction needs exactly one photon in mode {s}; term {fock} "
                    f"carries {sum(occ[i] for i in idx)}"
                )
            label = basis.labels[occupied[0]]
            qubit = 2 * qubit + POLARIZATIONS.index(label.polarization)
            internals.append(label.internal)
        env = (tuple(internals), tuple(occ[i] for i in env_modes))
        vector = environments.setdefault(env, np.zeros(dim, dtype=complex))
        vector[qubit] += amplitude
    rho = np.zeros((dim, dim), dtype=complex)
    for vector in environments.values():
        rho += np.outer(vector, vector.conj())
    trace = np.trace(rho).real
    if trace == 0:
        raise PatternError("cannot reduce a state with zero norm")
    return rho / trace
