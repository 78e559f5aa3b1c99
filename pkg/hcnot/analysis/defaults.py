# columns of a count table; a leading label column (input or herald branch) is optional
COUNT_TABLE_COLUMNS = [
    "setting_q1",
    "setting_q2",
    "outcome",
    "raw",
    "blocked_ct",
    "blocked_anc",
]

# analyzer setting letter -> measurement basis; outcome 0 is the first state
SETTING_BASES = {"H": "HV", "D": "DA", "L": "LR"}

OUTCOMES = ("00", "01", "10", "11")

# the nine two-photon analyzer settings in reporting order
TOMOGRAPHY_SETTINGS = tuple(a + b for a in "HDL" for b in "HDL")

# number of Monte-Carlo resamples used for error bars
MC_SAMPLES = 1000

# default integration time per setting in seconds
INTEGRATION_TIME = 600.0

# integration time per setting of the simulated Bell-state tomography in seconds
BELL_TOMO_INTEGRATION_TIME = 1.0e7

# default seed of the count sampling and the Monte-Carlo resampling
SEED = 12345

# stopping rule of the maximum-likelihood reconstruction
MLE_TOLERANCE = 1e-10
MLE_MAX_ITERATIONS = 100000

# first dilution tried after a full R rho R step fails to increase the
# likelihood; halved until the likelihood increases or the floor is reached
MLE_DILUTION = 0.5
MLE_MIN_DILUTION = 1e-6

# weight of the maximally mixed state in the starting point of the iteration
MLE_START_MIXING = 0.01

# looser stopping rule for the reconstructions inside Monte-Carlo resampling
MC_MLE_OPTIONS = {"tolerance": 1e-8, "max_iterations": 5000}

# grid points per phase of the local-unitary compensation search
COMPENSATION_GRID = 24
