"""Reconstruct two-qubit polarization states from the nine product analyzer
settings by linear inversion and by iterative maximum likelihood, and compare
them with target states."""

import logging

import numpy as np

from scipy.linalg import lstsq
from scipy.optimize import minimize
from monty.json import MSONable

from hcnot.optics.utilities.qubits import (
    KETS,
    BASES,
    density,
    matrix_to_pairs,
    pairs_to_matrix,
)
from hcnot.analysis.defaults import (
    OUTCOMES,
    MLE_DILUTION,
    MLE_TOLERANCE,
    SETTING_BASES,
    MLE_MIN_DILUTION,
    MLE_START_MIXING,
    COMPENSATION_GRID,
    MLE_MAX_ITERATIONS,
    TOMOGRAPHY_SETTINGS,
)
from hcnot.analysis.utilities.counting import noise_subtract

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class TomographyError(ValueError):
    """
    Exception that is thrown when the counts do not support a state reconstruction.
    """

    def __init__(self, msg=None):
        if msg is None:
            msg = "the counts do not determine a density matrix"
        self.msg = msg
        super(TomographyError, self).__init__(msg)

    def __repr__(self):
        return self.msg


class MeasurementSetting(MSONable):
    """
    Analyzer setting of the two photons; each letter names the first state of the
    basis measured on that photon (H for HV, D for DA, L for LR).
    """

    def __init__(self, q1, q2):
        for letter in (q1, q2):
            if letter not in SETTING_BASES:
                raise ValueError(
                    f"setting letter {letter} is not one of {list(SETTING_BASES)}"
                )
        self.q1 = q1
        self.q2 = q2

    @classmethod
    def from_letters(cls, letters):
        if len(letters) != 2:
            raise ValueError(f"a setting needs two letters, got {letters}")
        return cls(letters[0], letters[1])

    @property
    def label(self):
        return self.q1 + self.q2

    def __eq__(self, other):
        return isinstance(other, MeasurementSetting) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    def __repr__(self):
        return f"MeasurementSetting({self.label})"


ALL_SETTINGS = tuple(MeasurementSetting.from_letters(s) for s in TOMOGRAPHY_SETTINGS)


def _as_setting(setting):
    if isinstance(setting, MeasurementSetting):
        return setting
    return MeasurementSetting.from_letters(setting)


def projectors(setting):
    """
    Projectors of the four outcomes of a setting in the order 00, 01, 10, 11;
    outcome 0 on a photon is the first state of its basis.

    Returns:
        np.ndarray: Array of shape (4, 4, 4).
    """
    setting = _as_setting(setting)
    kets = [
        [KETS[s] for s in BASES[SETTING_BASES[letter]]]
        for letter in (setting.q1, setting.q2)
    ]
    return np.array(
        [density(np.kron(kets[0][int(o[0])], kets[1][int(o[1])])) for o in OUTCOMES]
    )


def counts_array(records, settings=TOMOGRAPHY_SETTINGS, subtract_noise=True):
    """
    Arrange count records into an array indexed by setting and outcome.

    Args:
        records (list): CountRecords of one state.
        settings (list): Setting labels in the order of the rows.
        subtract_noise (bool): Use noise-subtracted counts instead of raw counts.

    Returns:
        np.ndarray: Array of shape (n_settings, 4); subtracted counts may be
            negative.
    """
    lookup = {(r.setting, r.outcome): r for r in records}
    counts = np.zeros((len(settings), len(OUTCOMES)))
    for s, setting in enumerate(settings):
        label = _as_setting(setting).label
        for o, outcome in enumerate(OUTCOMES):
            record = lookup.get((label, outcome))
            if record is None:
                raise TomographyError(f"no counts for setting {label} outcome {outcome}")
            counts[s, o] = noise_subtract(record) if subtract_noise else record.raw
    return counts


def counts_from_state(rho, n_per_setting=1.0, settings=TOMOGRAPHY_SETTINGS):
    """Expected counts of a density matrix for ``n_per_setting`` events per setting."""
    stack = np.array([projectors(s) for s in settings])
    probabilities = np.einsum("soij,ji->so", stack, rho).real
    return n_per_setting * np.clip(probabilities, 0, None)


def _clean_counts(counts):
    counts = np.asarray(counts, dtype=float)
    if counts.ndim != 2 or counts.shape[1] != len(OUTCOMES):
        raise TomographyError(f"counts must have shape (n_settings, 4), got {counts.shape}")
    if not np.all(np.isfinite(counts)):
        raise TomographyError("counts must be finite")
    if np.any(counts < 0):
        logger.warning(
            f"clipping {int(np.sum(counts < 0))} negative noise-subtracted counts to 0"
        )
        counts = np.clip(counts, 0, None)
    if counts.sum() <= 0:
        raise TomographyError("every count is zero")
    return counts


def project_density_matrix(rho):
    """
    Closest physical density matrix in the 2-norm: negative eigenvalues are zeroed
    and their weight is spread over the remaining ones, smallest eigenvalues
    first.

    Args:
        rho (np.ndarray): Hermitian matrix of unit trace.

    Returns:
        np.ndarray: Positive semidefinite matrix of unit trace.
    """
    rho = (rho + rho.conj().T) / 2
    values, vectors = np.linalg.eigh(rho)
    # descending
    values, vectors = values[::-1].copy(), vectors[:, ::-1]
    accumulated = 0.0
    i = len(values)
    while i > 0 and values[i - 1] + accumulated / i < 0:
        accumulated += values[i - 1]
        values[i - 1] = 0.0
        i -= 1
    values[:i] += accumulated / i
    return (vectors * values) @ vectors.conj().T


def linear_inversion(counts, settings=TOMOGRAPHY_SETTINGS):
    """
    Least-squares solution of tr(P rho) = f over the outcome frequencies of every
    setting, projected onto the physical states.

    Args:
        counts (np.ndarray): Counts of shape (n_settings, 4).
        settings (list): Setting labels of the rows.

    Returns:
        np.ndarray: 4x4 density matrix.
    """
    counts = _clean_counts(counts)
    totals = counts.sum(axis=1)
    rows, data = [], []
    for setting, row, total in zip(settings, counts, totals):
        if total <= 0:
            logger.warning(f"setting {_as_setting(setting).label} has no counts")
            continue
        for projector, n in zip(projectors(setting), row):
            rows.append(projector.conj().reshape(-1))
            data.append(n / total)
    solution, _, rank, _ = lstsq(np.array(rows), np.array(data, dtype=complex))
    if rank < 16:
        raise TomographyError(
            f"the settings span only {rank} of the 16 two-qubit operators"
        )
    rho = solution.reshape(4, 4)
    rho = (rho + rho.conj().T) / 2
    return project_density_matrix(rho / np.trace(rho).real)


class MLEResult(MSONable):
    """
    Maximum-likelihood estimate with the log-likelihood per event after every
    accepted step.
    """

    def __init__(self, rho, log_likelihoods, iterations, converged):
        self.rho = np.asarray(rho, dtype=complex)
        self.log_likelihoods = list(log_likelihoods)
        self.iterations = iterations
        self.converged = converged

    @property
    def log_likelihood(self):
        return self.log_likelihoods[-1]

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "rho": matrix_to_pairs(self.rho),
            "log_likelihoods": self.log_likelihoods,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            pairs_to_matrix(d["rho"]),
            d["log_likelihoods"],
            d["iterations"],
            d["converged"],
        )


def _log_likelihood(rho, stack, counts, total):
    p = np.einsum("soij,ji->so", stack, rho).real
    mask = counts > 0
    if np.any(p[mask] <= 0):
        return -np.inf
    return float(np.sum(counts[mask] * np.log(p[mask]))) / total


def _r_operator(rho, stack, counts, total):
    p = np.einsum("soij,ji->so", stack, rho).real
    ratio = np.divide(counts, p, out=np.zeros_like(counts), where=counts > 0)
    return np.einsum("so,soij->ij", ratio, stack) / total


def mle_reconstruct(
    counts,
    settings=TOMOGRAPHY_SETTINGS,
    tolerance=MLE_TOLERANCE,
    max_iterations=MLE_MAX_ITERATIONS,
    dilution=MLE_DILUTION,
    min_dilution=MLE_MIN_DILUTION,
):
    """
    Iterative maximum-likelihood reconstruction. Every step maps rho to
    (I + e T) rho (I + e T) / tr with T = R(rho) - I; the full step e = 1 is tried
    first and e is then reduced, starting at ``dilution`` and halving, until the
    log-likelihood does not decrease.

    Args:
        counts (np.ndarray): Counts of shape (n_settings, 4); negative entries are
            clipped to zero.
        settings (list): Setting labels of the rows.
        tolerance (float): Stop once a step raises the log-likelihood per event by
            less than this.
        max_iterations (int): Maximum number of accepted steps.
        dilution (float): First reduced step size.
        min_dilution (float): Smallest step size tried.

    Returns:
        MLEResult: Physical estimate; ``converged`` is False when the iteration
            limit was reached.
    """
    counts = _clean_counts(counts)
    settings = list(settings)
    if len(settings) != counts.shape[0]:
        raise TomographyError(
            f"{counts.shape[0]} rows of counts for {len(settings)} settings"
        )
    stack = np.array([projectors(s) for s in settings])
    total = counts.sum()
    identity = np.eye(4, dtype=complex)

    rho = (1 - MLE_START_MIXING) * linear_inversion(counts, settings)
    rho += MLE_START_MIXING * identity / 4
    ll = _log_likelihood(rho, stack, counts, total)
    history = [ll]
    converged = False
    iteration = 0
    for iteration in range(1, int(max_iterations) + 1):
        t = _r_operator(rho, stack, counts, total) - identity
        step, accepted = 1.0, None
        while step >= min_dilution:
            update = identity + step * t
            candidate = update @ rho @ update.conj().T
            candidate = (candidate + candidate.conj().T) / 2
            candidate /= np.trace(candidate).real
            candidate_ll = _log_likelihood(candidate, stack, counts, total)
            if candidate_ll >= ll:
                accepted = candidate
                break
            step = dilution if step == 1.0 else step / 2
        if accepted is None:
            logger.debug(f"no step raises the likelihood after {iteration} iterations")
            converged = True
            break
        improvement = candidate_ll - ll
        rho, ll = accepted, candidate_ll
        history.append(ll)
        if improvement < tolerance:
            converged = True
            break
    if not converged:
        logger.warning(
            f"maximum-likelihood iteration stopped after {max_iterations} steps "
            f"without converging"
        )
    return MLEResult(rho, history, iteration, converged)


def _sqrt_psd(rho):
    values, vectors = np.linalg.eigh((rho + rho.conj().T) / 2)
    return (vectors * np.sqrt(np.clip(values, 0, None))) @ vectors.conj().T


def fidelity(rho, target):
    """
    Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; a state vector as
    target gives <psi|rho|psi>.
    """
    target = np.asarray(target, dtype=complex)
    if target.ndim == 1:
        return float(np.real(target.conj() @ rho @ target))
    root = _sqrt_psd(rho)
    values = np.linalg.eigvalsh(root @ target @ root)
    return float(np.sum(np.sqrt(np.clip(values, 0, None))) ** 2)


def trace_distance(rho, sigma):
    return float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))) / 2)


def purity(rho):
    return float(np.real(np.trace(rho @ rho)))


def is_physical(rho, tol=1e-9):
    """Hermitian, unit trace and positive semidefinite within ``tol``."""
    rho = np.asarray(rho, dtype=complex)
    if not np.allclose(rho, rho.conj().T, atol=tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -tol)


def random_density_matrix(rng, dim=4, rank=None):
    """Random density matrix G G^dagger / tr from a complex Gaussian G."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def _phase_rotated(rho, phases):
    phi1, phi2 = phases
    theta = np.array([0.0, phi2, phi1, phi1 + phi2])
    return rho * np.exp(1j * (theta[:, None] - theta[None, :]))


def compensate_local_unitaries(rho, target, grid_points=COMPENSATION_GRID):
    """
    Apply the local phase rotations diag(1, e^{i phi1}) x diag(1, e^{i phi2}) that
    maximize the fidelity with a target; a grid search is refined with
    Nelder-Mead. The fidelity never decreases.

    Args:
        rho (np.ndarray): Reconstructed density matrix.
        target (np.ndarray): Target state vector or density matrix.
        grid_points (int): Grid points per phase.

    Returns:
        tuple: (rotated density matrix, (phi1, phi2) in (-pi, pi], fidelity).
    """
    grid = np.linspace(0, 2 * np.pi, grid_points, endpoint=False)
    best = (0.0, 0.0)
    best_fidelity = fidelity(rho, target)
    for phi1 in grid:
        for phi2 in grid:
            value = fidelity(_phase_rotated(rho, (phi1, phi2)), target)
            if value > best_fidelity + 1e-12:
                best, best_fidelity = (phi1, phi2), value
    refined = minimize(
        lambda x: -fidelity(_phase_rotated(rho, x), target),
        np.array(best),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14},
    )
    if -refined.fun > best_fidelity + 1e-12:
        best, best_fidelity = tuple(refined.x), -refined.fun
    phases = tuple(float(np.angle(np.exp(1j * p))) for p in best)
    logger.debug(f"local phase compensation {phases} gives fidelity {best_fidelity}")
    return _phase_rotated(rho, phases), phases, float(best_fidelity)
