"""Define the photon-pair sources of the gate: noise configuration, pair emission up
to double pairs, four-fold rates and the cross-source HOM measurement."""

import logging
import itertools

from math import sqrt
from collections import defaultdict

import numpy as np

from monty.json import MSONable

from hcnot.optics.defaults import (
    IDEAL_NOISE,
    NOISE_RANGES,
    EVENT_CLASSES,
    HOM_SCAN_POINTS,
    CALIBRATED_NOISE,
    DOUBLE_PAIR_FACTOR,
)
from hcnot.optics.utilities.fock import (
    ModeBasis,
    ModeLabel,
    PureState,
    evolve,
    project_pattern,
    detection_probability,
)
from hcnot.optics.utilities.qubits import KETS, BELL_STATES
from hcnot.optics.utilities.elements import bs5050
from hcnot.optics.utilities.heralding import (
    resolve_heralds,
    apply_correction,
    combine_outcomes,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

CT_ARMS = ("c", "t")
ANC_ARMS = ("a1", "a2")


class NoiseConfigError(Exception):
    """
    Exception that is thrown when noise or source parameters are outside their
    physical ranges.
    """

    def __init__(self, msg=None):
        if msg is None:
            msg = "invalid noise configuration"
        self.msg = msg
        super(NoiseConfigError, self).__init__(msg)

    def __repr__(self):
        return self.msg


class NoiseConfig(MSONable):
    """
    Imperfections of the experiment: cross-source distinguishability, pair-state
    fidelities, pair emission probabilities per pulse, PBS extinction and the
    per-photon transmission and detector efficiency used for absolute rates.
    """

    def __init__(
        self,
        cross_overlap=1.0,
        ancilla_fidelity=1.0,
        ct_fidelity=1.0,
        pair_probability_ct=0.02,
        pair_probability_anc=0.02,
        pbs_extinction=None,
        transmission=0.4,
        detector_efficiency=0.18,
        repetition_rate_hz=80e6,
    ):
        self.cross_overlap = cross_overlap
        self.ancilla_fidelity = ancilla_fidelity
        self.ct_fidelity = ct_fidelity
        self.pair_probability_ct = pair_probability_ct
        self.pair_probability_anc = pair_probability_anc
        self.pbs_extinction = pbs_extinction
        self.transmission = transmission
        self.detector_efficiency = detector_efficiency
        self.repetition_rate_hz = repetition_rate_hz

    @classmethod
    def ideal(cls, **kwargs):
        return cls(**{**IDEAL_NOISE, **kwargs})

    @classmethod
    def calibrated(cls, **kwargs):
        return cls(**{**CALIBRATED_NOISE, **kwargs})

    def problems(self):
        """List of human-readable range violations; empty when valid."""
        problems = []
        for name, (low, high) in NOISE_RANGES.items():
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                problems.append(f"{name} must be a number, got {value!r}")
            elif not low <= value <= high:
                problems.append(f"{name}={value} outside [{low}, {high}]")
        for name in ("transmission", "detector_efficiency"):
            if getattr(self, name) == 0:
                problems.append(f"{name} must be positive")
        if self.pbs_extinction is not None and not (
            isinstance(self.pbs_extinction, (int, float)) and self.pbs_extinction > 0
        ):
            problems.append(
                f"pbs_extinction must be positive or null, got {self.pbs_extinction!r}"
            )
        if not (
            isinstance(self.repetition_rate_hz, (int, float))
            and self.repetition_rate_hz > 0
        ):
            problems.append("repetition_rate_hz must be positive")
        return problems

    def check(self):
        problems = self.problems()
        if problems:
            raise NoiseConfigError("; ".join(problems))

    @property
    def pbs_leakage(self):
        if self.pbs_extinction is None:
            return 0.0
        return 1.0 / (1.0 + self.pbs_extinction)

    @property
    def n_internal(self):
        return 1 if self.cross_overlap == 1 else 2

    def ct_source(self):
        return SourceConfig(self.pair_probability_ct, self.ct_fidelity, 1)

    def anc_source(self):
        return SourceConfig(self.pair_probability_anc, self.ancilla_fidelity, 0)

    def distinguishability(self):
        return DistinguishabilityModel(self.cross_overlap)

    def detector(self):
        return DetectorModel(
            self.transmission * self.detector_efficiency, self.repetition_rate_hz
        )


class SourceConfig(MSONable):
    """
    One pair source: pair probability per pulse, fidelity of the emitted pair to
    |Psi->, and the internal wavepacket its photons occupy (0 for the reference
    wavepacket, 1 for the one with partial overlap).
    """

    def __init__(self, pair_probability, state_fidelity=1.0, internal_index=0):
        if not 0 <= pair_probability <= NOISE_RANGES["pair_probability_ct"][1]:
            raise NoiseConfigError(
                f"pair probability {pair_probability} outside [0, 0.1]"
            )
        if not 0.25 <= state_fidelity <= 1:
            raise NoiseConfigError(f"pair fidelity {state_fidelity} outside [0.25, 1]")
        self.pair_probability = pair_probability
        self.state_fidelity = state_fidelity
        self.internal_index = internal_index


class DistinguishabilityModel(MSONable):
    """
    Squared wavepacket overlap between photons of different sources; photons of the
    same source are always identical.
    """

    def __init__(self, cross_overlap=1.0):
        if not 0 <= cross_overlap <= 1:
            raise NoiseConfigError(f"cross_overlap {cross_overlap} outside [0, 1]")
        self.cross_overlap = cross_overlap

    def wavepacket(self, internal_index):
        """Amplitudes over internal labels: sqrt(x)|0> + sqrt(1 - x)|1>."""
        if internal_index == 0 or self.cross_overlap == 1:
            return {0: 1.0}
        return {0: sqrt(self.cross_overlap), 1: sqrt(1 - self.cross_overlap)}


class DetectorModel(MSONable):
    """
    Converts per-pulse event probabilities to count rates: every photon reaches
    its detector with probability ``efficiency`` (transmission times detector
    efficiency).
    """

    def __init__(self, efficiency, repetition_rate_hz=80e6, n_photons=4):
        self.efficiency = efficiency
        self.repetition_rate_hz = repetition_rate_hz
        self.n_photons = n_photons

    def rate(self, probability):
        return self.repetition_rate_hz * self.efficiency**self.n_photons * probability


class EmissionEvent(MSONable):
    """
    One member of the four-photon emission ensemble: event class, weight per pulse
    and the (possibly sub-normalized) input state.
    """

    def __init__(self, event_class, weight, state, members=None):
        if event_class not in EVENT_CLASSES:
            raise ValueError(
                f"unknown event class {event_class}; supported ones are "
                f"{EVENT_CLASSES}"
            )
        self.event_class = event_class
        self.weight = weight
        self.state = state
        self.members = members


def bell_ensemble(fidelity, target="psi-"):
    """
    Bell-diagonal decomposition of a pair with fidelity F to the target: weight F
    on the target and (1 - F)/3 on every other Bell state. Zero weights are
    omitted.
    """
    ensemble = []
    for name in BELL_STATES:
        weight = fidelity if name == target else (1 - fidelity) / 3
        if weight > 0:
            ensemble.append((weight, name))
    return ensemble


def pair_matrix(name):
    """Pair amplitudes B[p, q] of a Bell state, P^dagger = sum B_pq a_p b_q."""
    return BELL_STATES[name].reshape(2, 2)


def prepare_pair_matrix(matrix, pair):
    """
    Filter turning the control-target source into a product input: the control
    arm is projected on |psi> and the target arm is projected on |psi_perp> and
    rotated to |phi>. For |Psi-> the single-pair amplitude becomes
    (1/sqrt 2) |psi>|phi>.

    Args:
        matrix (np.ndarray): 2x2 pair amplitudes of the emitted pair.
        pair (QubitPair): Requested input.

    Returns:
        np.ndarray: Filtered 2x2 amplitudes.
    """
    psi = pair.control
    phi = pair.target
    psi_perp = np.array([-np.conj(psi[1]), np.conj(psi[0])])
    control_filter = np.outer(psi, psi.conj())
    target_filter = np.outer(phi, psi_perp.conj())
    return control_filter @ matrix @ target_filter.T


def photon_form(spatial, polarization_vector, wavepacket):
    """Creation operator of one photon as a {ModeLabel: amplitude} dict."""
    form = {}
    for p, amp in zip(("H", "V"), polarization_vector):
        for k, wp in wavepacket.items():
            if amp * wp != 0:
                form[ModeLabel(spatial, p, k)] = amp * wp
    return form


def _pair_terms(arms, matrix, wavepackets):
    terms = []
    for p, q in itertools.product(range(2), repeat=2):
        if matrix[p, q] != 0:
            forms = [
                photon_form(arm, np.eye(2)[index], wp)
                for arm, index, wp in zip(arms, (p, q), wavepackets)
            ]
            terms.append((matrix[p, q], forms))
    return terms


def pairs_state(basis, pairs):
    """
    State created by a product of pair-creation operators on vacuum.

    Args:
        basis (ModeBasis): Mode basis.
        pairs (list): List of (arms, 2x2 amplitudes, (wavepacket_1, wavepacket_2)).

    Returns:
        PureState: The unnormalized product state.
    """
    state = PureState(basis)
    for combination in itertools.product(
        *[_pair_terms(arms, matrix, wps) for arms, matrix, wps in pairs]
    ):
        coefficient = np.prod([c for c, _ in combination])
        factors = [form for _, forms in combination for form in forms]
        state = state + PureState.from_creation_product(basis, factors, coefficient)
    return state


def _source_pairs(source, d, arms, names, pair=None):
    wp = d.wavepacket(source.internal_index)
    filtered, raw = [], []
    for name in names:
        matrix = pair_matrix(name)
        raw.append((arms, matrix, (wp, wp)))
        filtered.append(
            (arms, matrix if pair is None else prepare_pair_matrix(matrix, pair), (wp, wp))
        )
    return filtered, raw


def _double_members(ensemble):
    """Unordered member pairs (i <= j) with their ensemble weights."""
    members = []
    for (i, (wi, ni)), (j, (wj, nj)) in itertools.combinations_with_replacement(
        enumerate(ensemble), 2
    ):
        members.append((wi * wj * (1 if i == j else 2), (ni, nj)))
    return members


def emission_ensemble(ct, anc, d, pair=None, basis=None):
    """
    Leading-order four-photon emissions: one pair from each source, two pairs from
    the control-target source, two pairs from the ancilla source. Double pairs are
    the second-order term of the entangled squeezer, (P^dagger)^2 |0> normalized,
    with both pairs drawn from the Bell-diagonal ensemble of the source.

    Args:
        ct (SourceConfig): Control-target source.
        anc (SourceConfig): Ancilla source.
        d (DistinguishabilityModel): Cross-source overlap.
        pair (QubitPair, optional): Requested product input; the control-target
            source is filtered accordingly. Unfiltered |Psi-> pairs by default.
        basis (ModeBasis, optional): Mode basis; standard basis by default.

    Returns:
        list: EmissionEvents with positive weight.
    """
    basis = basis or ModeBasis.standard(1 if d.cross_overlap == 1 else 2)
    ct_ensemble = bell_ensemble(ct.state_fidelity)
    anc_ensemble = bell_ensemble(anc.state_fidelity)
    p_ct, p_anc = ct.pair_probability, anc.pair_probability
    events = []

    if p_ct * p_anc > 0:
        for w_ct, n_ct in ct_ensemble:
            (ct_pair,), _ = _source_pairs(ct, d, CT_ARMS, [n_ct], pair)
            for w_anc, n_anc in anc_ensemble:
                (anc_pair,), _ = _source_pairs(anc, d, ANC_ARMS, [n_anc])
                state = pairs_state(basis, [ct_pair, anc_pair]).prune()
                if state.norm_squared > 0:
                    events.append(
                        EmissionEvent(
                            "one_each", p_ct * p_anc * w_ct * w_anc, state, [n_ct, n_anc]
                        )
                    )

    for event_class, source, arms, ensemble, filter_pair in (
        ("ct_double", ct, CT_ARMS, ct_ensemble, pair),
        ("anc_double", anc, ANC_ARMS, anc_ensemble, None),
    ):
        p = source.pair_probability
        if p == 0:
            continue
        for weight, names in _double_members(ensemble):
            filtered, raw = _source_pairs(source, d, arms, names, filter_pair)
            norm = sqrt(pairs_state(basis, raw).norm_squared)
            state = (pairs_state(basis, filtered) * (1 / norm)).prune()
            if state.norm_squared > 0:
                events.append(
                    EmissionEvent(
                        event_class,
                        DOUBLE_PAIR_FACTOR * p**2 * weight,
                        state,
                        list(names),
                    )
                )
    logger.debug(f"built {len(events)} emission events")
    return events


def class_outcomes(events, circuit):
    """
    Herald outcomes per event class, with probabilities per pulse (event weights
    included).

    Returns:
        dict: {event class: [HeraldOutcome x 4]}.
    """
    weighted = defaultdict(list)
    for event in events:
        weighted[event.event_class].append(
            (event.weight, resolve_heralds(event.state, circuit))
        )
    return {cls: combine_outcomes(members) for cls, members in weighted.items()}


def four_fold_rates(events, circuit, detector, projector_sets=None, rule=None):
    """
    Four-fold coincidence rates per event class. The total of all classes is the
    raw rate; blocking the control-target source leaves only ``anc_double`` and
    blocking the ancilla source leaves only ``ct_double``.

    Args:
        events (list): EmissionEvents.
        circuit (ModeUnitary): Gate followed by the herald analysis rotations.
        detector (DetectorModel): Efficiency and repetition rate.
        projector_sets (list, optional): Control-target measurement settings, each
            an array of shape (n_outcomes, 4, 4) of projectors; the computational
            basis by default.
        rule (dict, optional): {herald key: (control Pauli, target Pauli)};
            conditional states are corrected before the measurement when given.

    Returns:
        dict: {event class: array (4 heralds, n_settings, n_outcomes)} in Hz, with
            a zero array for classes without events.
    """
    if projector_sets is None:
        projector_sets = [np.array([np.diag(np.eye(4)[i]) for i in range(4)])]
    projectors = np.asarray(projector_sets, dtype=complex)
    outcomes = class_outcomes(events, circuit)
    rates = {}
    for event_class in EVENT_CLASSES:
        table = np.zeros((4,) + projectors.shape[:2])
        for h, outcome in enumerate(outcomes.get(event_class, [])):
            rho = outcome.conditional_state
            if rule is not None:
                rho = apply_correction(rho, rule[outcome.key])
            probabilities = np.einsum("soij,ji->so", projectors, rho).real
            table[h] = detector.rate(outcome.probability * probabilities)
        rates[event_class] = table
    return rates


def _hom_state(basis, d, pairs_ct, pairs_anc):
    """H-polarized pair(s) from each source feeding c/a1 with triggers in t/a2."""
    ct_wp = d.wavepacket(1)
    anc_wp = {0: 1.0}
    h, v = KETS["H"], KETS["V"]
    factors = []
    for _ in range(pairs_ct):
        factors += [photon_form("c", h, ct_wp), photon_form("t", v, ct_wp)]
    for _ in range(pairs_anc):
        factors += [photon_form("a1", h, anc_wp), photon_form("a2", v, anc_wp)]
    return PureState.from_creation_product(basis, factors).normalized()


def hom_visibility(d):
    """
    Cross-source two-photon interference: one H photon of each source on a 50:50
    beam splitter, coincidence of the two outputs; the maximum is taken with the
    wavepackets made fully distinguishable (infinite delay).

    Args:
        d (DistinguishabilityModel): Cross-source overlap.

    Returns:
        float: V = (C_max - C_min) / C_max.
    """
    basis = ModeBasis.standard(2)
    splitter = bs5050(basis, "c", "a1")

    def coincidence(model):
        ct_form = photon_form("c", KETS["H"], model.wavepacket(1))
        anc_form = photon_form("a1", KETS["H"], {0: 1.0})
        state = PureState.from_creation_product(basis, [ct_form, anc_form])
        output = evolve(state, splitter)
        pattern = {basis.group("c"): 1, basis.group("a1"): 1}
        return project_pattern(output, pattern)[0]

    c_min = coincidence(d)
    c_max = coincidence(DistinguishabilityModel(0.0))
    return (c_max - c_min) / c_max


def hom_scan(d, ct, anc, efficiency, n_points=HOM_SCAN_POINTS):
    """
    Four-fold HOM curve versus the fraction of the wavepacket overlap, which stands
    in for the delay scan (0: infinite delay, 1: zero delay). Besides the signal
    (one pair per source) the third-order emissions with a double pair in either
    source are included; all four detectors are threshold detectors with per
    photon efficiency ``efficiency``.

    Args:
        d (DistinguishabilityModel): Overlap at zero delay.
        ct (SourceConfig): Control-target source.
        anc (SourceConfig): Ancilla source.
        efficiency (float): Per-photon detection efficiency.
        n_points (int): Number of scan points.

    Returns:
        dict: ``curve`` (list of row dicts) plus ``visibility_subtracted`` and
            ``visibility_raw``.
    """
    basis = ModeBasis.standard(2)
    splitter = bs5050(basis, "c", "a1")
    groups = [basis.group(mode) for mode in ("c", "a1", "t", "a2")]
    # single pairs after the H/V polarizers carry half the pair probability
    p_ct, p_anc = ct.pair_probability / 2, anc.pair_probability / 2
    classes = {
        "signal": ((1, 1), p_ct * p_anc),
        "ct_double": ((2, 1), p_ct**2 * p_anc),
        "anc_double": ((1, 2), p_ct * p_anc**2),
    }
    curve = []
    for fraction in np.linspace(0, 1, n_points):
        model = DistinguishabilityModel(float(fraction) * d.cross_overlap)
        row = {"overlap_fraction": float(fraction), "overlap": model.cross_overlap}
        for name, ((n_ct, n_anc), weight) in classes.items():
            output = evolve(_hom_state(basis, model, n_ct, n_anc), splitter)
            row[name] = weight * detection_probability(output, groups, efficiency)
        row["noise"] = row["ct_double"] + row["anc_double"]
        row["total"] = row["signal"] + row["noise"]
        curve.append(row)

    def visibility(column):
        c_max, c_min = curve[0][column], curve[-1][column]
        return (c_max - c_min) / c_max if c_max > 0 else 0.0

    return {
        "curve": curve,
        "visibility_subtracted": visibility("signal"),
        "visibility_raw": visibility("total"),
    }
