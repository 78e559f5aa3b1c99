"""Define the optical elements of the gate as mode unitaries and assemble the CNOT
interferometer."""

import logging

from functools import lru_cache

import numpy as np

from monty.json import MSONable

from hcnot.optics.defaults import WIRING, HERALD_BASES, POLARIZATIONS
from hcnot.optics.utilities.fock import ModeBasis, ModeLabel, ModeUnitary
from hcnot.optics.utilities.qubits import BASES, KETS

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

ELEMENT_KINDS = ("PBS_HV", "PBS_ROTATED", "BS5050", "HWP", "QWP", "PHASE")
CONVENTIONS = ("chip", "free_space")


def hwp_jones(angle):
    """Half-wave plate with fast axis at ``angle`` (radians) from H."""
    c, s = np.cos(2 * angle), np.sin(2 * angle)
    return np.array([[c, s], [s, -c]], dtype=complex)


def qwp_jones(angle):
    """
    Quarter-wave plate with fast axis at ``angle`` from H. With this sign choice
    QWP(45 deg) maps H to R = (H - iV)/sqrt(2) up to a global phase.
    """
    c, s = np.cos(angle), np.sin(angle)
    return np.array(
        [[c**2 + 1j * s**2, (1 - 1j) * s * c], [(1 - 1j) * s * c, s**2 + 1j * c**2]],
        dtype=complex,
    )


def _jones_on_mode(basis, mode, jones):
    matrix = np.eye(basis.dim, dtype=complex)
    for k in range(basis.n_internal):
        labels = [ModeLabel(mode, p, k) for p in POLARIZATIONS]
        if any(label not in basis.labels for label in labels):
            continue
        idx = [basis.index(label) for label in labels]
        matrix[np.ix_(idx, idx)] = jones
    return ModeUnitary(basis, matrix)


def _check_pair(m1, m2):
    if m1 == m2:
        raise ValueError(f"a two-mode element needs two distinct modes, got {m1} twice")


def waveplate(basis, mode, kind, angle):
    """
    Wave plate on one spatial mode, identical on every internal label.

    Args:
        basis (ModeBasis): The mode basis.
        mode (str): Spatial mode.
        kind (str): ``HWP`` or ``QWP``.
        angle (float): Fast-axis angle in radians.

    Returns:
        ModeUnitary: The element.
    """
    if not np.isfinite(angle):
        raise ValueError("wave plate angle must be finite")
    if kind.upper() == "HWP":
        return _jones_on_mode(basis, mode, hwp_jones(angle))
    if kind.upper() == "QWP":
        return _jones_on_mode(basis, mode, qwp_jones(angle))
    raise ValueError(f"unknown wave plate {kind}; supported ones are HWP and QWP")


def phase(basis, mode, phi):
    """Relative phase e^{i phi} on V with respect to H (chip birefringence)."""
    return _jones_on_mode(basis, mode, np.diag([1, np.exp(1j * phi)]))


def _coupler_block(cross_probability):
    cross = np.sqrt(cross_probability)
    bar = np.sqrt(1 - cross_probability)
    return np.array([[bar, 1j * cross], [1j * cross, bar]], dtype=complex)


def coupler(basis, m1, m2, cross_h, cross_v):
    """
    Lossless directional coupler between two spatial modes with polarization
    dependent power transfer; the crossing amplitude carries the phase i.

    Args:
        basis (ModeBasis): The mode basis.
        m1 (str): First spatial mode.
        m2 (str): Second spatial mode.
        cross_h (float): Probability for an H photon to change mode.
        cross_v (float): Probability for a V photon to change mode.

    Returns:
        ModeUnitary: The element.
    """
    _check_pair(m1, m2)
    blocks = []
    for p, cross in zip(POLARIZATIONS, (cross_h, cross_v)):
        if not 0 <= cross <= 1:
            raise ValueError(f"coupling probability {cross} outside [0, 1]")
        for k in range(basis.n_internal):
            pair = (ModeLabel(m1, p, k), ModeLabel(m2, p, k))
            if all(label in basis.labels for label in pair):
                blocks.append((pair, _coupler_block(cross)))
    return ModeUnitary.embed(basis, blocks)


def pbs_hv(basis, m1, m2, convention="chip", leakage=0.0):
    """
    Polarizing beam splitter. In the chip convention H crosses to the other mode
    and V stays; the free-space convention swaps the roles. ``leakage`` is the
    power fraction sent to the wrong port, 1/(1 + extinction).
    """
    if convention not in CONVENTIONS:
        raise ValueError(
            f"unknown PBS convention {convention}; supported ones are {CONVENTIONS}"
        )
    crossing, staying = 1 - leakage, leakage
    if convention == "chip":
        return coupler(basis, m1, m2, crossing, staying)
    return coupler(basis, m1, m2, staying, crossing)


def bs5050(basis, m1, m2):
    """Polarization-independent 50:50 beam splitter, symmetric phase convention."""
    return coupler(basis, m1, m2, 0.5, 0.5)


def rotated_pbs(basis, m1, m2, convention="chip", leakage=0.0):
    """
    PBS acting in the D/A basis: HWP(22.5 deg) on both modes, ``pbs_hv``, and
    HWP(22.5 deg) on both modes again.
    """
    rotation = waveplate(basis, m1, "HWP", np.pi / 8).compose(
        waveplate(basis, m2, "HWP", np.pi / 8)
    )
    return rotation.compose(pbs_hv(basis, m1, m2, convention, leakage)).compose(
        rotation
    )


def analysis_rotation(basis, mode, measurement_basis):
    """
    Unitary taking the two states of ``measurement_basis`` (HV, DA or LR) of a mode
    to H and V, so that a following H/V detection measures that basis. Equivalent
    to the QWP/HWP pair in front of the analysis PBS.
    """
    try:
        first, second = BASES[measurement_basis]
    except KeyError:
        raise ValueError(
            f"unknown measurement basis {measurement_basis}; supported ones are "
            f"{list(BASES)}"
        )
    jones = np.array([KETS[first].conj(), KETS[second].conj()])
    return _jones_on_mode(basis, mode, jones)


class ElementSpec(MSONable):
    """
    Declarative description of one element, compiled against a basis with
    ``to_unitary``.
    """

    def __init__(self, kind, acts_on, angle=0.0, convention="chip", leakage=0.0):
        if kind not in ELEMENT_KINDS:
            raise ValueError(
                f"unknown element {kind}; supported ones are {ELEMENT_KINDS}"
            )
        acts_on = tuple(acts_on)
        n_modes = 1 if kind in ("HWP", "QWP", "PHASE") else 2
        if len(acts_on) != n_modes:
            raise ValueError(f"{kind} acts on exactly {n_modes} spatial mode(s)")
        self.kind = kind
        self.acts_on = acts_on
        self.angle = angle
        self.convention = convention
        self.leakage = leakage

    def to_unitary(self, basis):
        if self.kind == "PBS_HV":
            return pbs_hv(basis, *self.acts_on, self.convention, self.leakage)
        if self.kind == "PBS_ROTATED":
            return rotated_pbs(basis, *self.acts_on, self.convention, self.leakage)
        if self.kind == "BS5050":
            return bs5050(basis, *self.acts_on)
        if self.kind == "PHASE":
            return phase(basis, self.acts_on[0], self.angle)
        return waveplate(basis, self.acts_on[0], self.kind, self.angle)


def compile_elements(basis, elements):
    """Compose a sequence of ElementSpecs, first element applied first."""
    unitary = ModeUnitary.identity(basis)
    for element in elements:
        unitary = unitary.compose(element.to_unitary(basis))
    return unitary


def cnot_elements(convention="chip", leakage=0.0, wiring=None):
    wiring = wiring or WIRING
    return [
        ElementSpec("PBS_HV", wiring["pbs1"], convention=convention, leakage=leakage),
        ElementSpec(
            "PBS_ROTATED", wiring["pbs2"], convention=convention, leakage=leakage
        ),
    ]


def build_cnot_circuit(basis=None, convention="chip", leakage=0.0, wiring=None):
    """
    The gate interferometer: PBS1 in the H/V basis on (a1, c) and the rotated PBS2
    in the D/A basis on (a2, t), with the mode pairs taken from the wiring table.

    Args:
        basis (ModeBasis, optional): Mode basis; the standard basis with one
            internal label by default.
        convention (str, optional): PBS convention, ``chip`` or ``free_space``.
        leakage (float, optional): Wrong-port power fraction of both PBSs.
        wiring (dict, optional): {"pbs1": (m1, m2), "pbs2": (m1, m2)}.

    Returns:
        ModeUnitary: The composed network.
    """
    basis = basis or ModeBasis.standard()
    return compile_elements(basis, cnot_elements(convention, leakage, wiring))


@lru_cache(maxsize=32)
def _herald_circuit(n_internal, convention, leakage, wiring_items):
    basis = ModeBasis.standard(n_internal)
    circuit = build_cnot_circuit(basis, convention, leakage, dict(wiring_items))
    for mode, measurement_basis in HERALD_BASES.items():
        circuit = circuit.compose(analysis_rotation(basis, mode, measurement_basis))
    return circuit


def herald_circuit(n_internal=1, convention="chip", leakage=0.0, wiring=None):
    """
    Gate interferometer followed by the herald analysis rotations (a1 in D/A, a2
    in H/V). Cached per parameter set.
    """
    wiring = wiring or WIRING
    items = tuple(sorted((k, tuple(v)) for k, v in wiring.items()))
    return _herald_circuit(n_internal, convention, float(leakage), items)
