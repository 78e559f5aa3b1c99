# spatial modes of the gate in the fixed label order (control, target, ancillas)
SPATIAL_MODES = ("c", "t", "a1", "a2")

# polarization order of every spatial mode
POLARIZATIONS = ("H", "V")

# terms with a squared amplitude below this are dropped after each evolution
AMPLITUDE_CUTOFF = 1e-14

# elementwise tolerance used when checking U^dagger U = I
UNITARY_TOL = 1e-10

# matrix entries smaller than this are treated as structural zeros
ZERO_TOL = 1e-15

# which physical coupler realizes which logical pair of modes; the first PBS
# works in the H/V basis and the second one in the rotated D/A basis
WIRING = {"pbs1": ("a1", "c"), "pbs2": ("a2", "t")}

# analysis basis of each herald detector
HERALD_BASES = {"a1": "DA", "a2": "HV"}

# herald outcomes in reporting order (ancilla 1 result, ancilla 2 result)
HERALD_KEYS = (("D", "H"), ("D", "V"), ("A", "H"), ("A", "V"))

# correction applied after each herald outcome in the chip PBS convention
# (control Pauli, target Pauli); checked against a brute-force derivation
FEEDFORWARD_RULE = {
    ("D", "H"): ("I", "I"),
    ("D", "V"): ("I", "X"),
    ("A", "H"): ("Z", "I"),
    ("A", "V"): ("Z", "X"),
}

# computational basis inputs of the truth table in row order
TRUTH_TABLE_INPUTS = ("HH", "HV", "VH", "VV")

# emission classes of four-photon events at second order
EVENT_CLASSES = ("one_each", "ct_double", "anc_double")

# probability of a double pair relative to p^2 for a polarization-entangled
# source; (P^dagger)^2 |0> has squared norm 3 and the squeezing term is 1/2 of it
DOUBLE_PAIR_FACTOR = 0.75

# noise model without any imperfection
IDEAL_NOISE = {
    "cross_overlap": 1.0,
    "ancilla_fidelity": 1.0,
    "ct_fidelity": 1.0,
    "pair_probability_ct": 0.02,
    "pair_probability_anc": 0.02,
    "pbs_extinction": None,
    "transmission": 0.4,
    "detector_efficiency": 0.18,
    "repetition_rate_hz": 80e6,
}

# noise model matching the measured source and chip characterization: HOM
# visibility 0.88 between the sources, 94.5% ancilla fidelity to |Psi->,
# 50:1 PBS extinction over the 3 nm filter bandwidth
CALIBRATED_NOISE = {
    "cross_overlap": 0.88,
    "ancilla_fidelity": 0.945,
    "ct_fidelity": 1.0,
    "pair_probability_ct": 0.02,
    "pair_probability_anc": 0.02,
    "pbs_extinction": 50.0,
    "transmission": 0.4,
    "detector_efficiency": 0.18,
    "repetition_rate_hz": 80e6,
}

# allowed ranges of the noise parameters (inclusive)
NOISE_RANGES = {
    "cross_overlap": (0.0, 1.0),
    "ancilla_fidelity": (0.25, 1.0),
    "ct_fidelity": (0.25, 1.0),
    "pair_probability_ct": (0.0, 0.1),
    "pair_probability_anc": (0.0, 0.1),
    "transmission": (0.0, 1.0),
    "detector_efficiency": (0.0, 1.0),
}

# number of points of the HOM overlap scan
HOM_SCAN_POINTS = 21
