# mode-field diameters in um as (minor axis, major axis)
SMF_MFD = (5.0, 5.0)
TEC_MFD = (10.0, 10.0)
# guide mode at the chip facet after the taper
FACET_MFD = (8.0, 11.0)
# guide mode in the bulk of the chip
BULK_MFD = (15.0, 20.0)

# demonstration coupling rates in 1/mm; their ratio 8/7 has an exact PBS length
KAPPA_H = 0.4
KAPPA_V = 0.35

# upper bound on the coupler length in mm
MAX_LENGTH = 40.0

# design wavelength and bandwidth of the down-converted photons in nm
DESIGN_WAVELENGTH = 789.0
BANDWIDTH_NM = 3.0

# measured right:wrong power ratio of the on-chip PBS at BANDWIDTH_NM
TARGET_EXTINCTION = 50.0

# extinction ratios above this are reported as this value
EXTINCTION_CAP = 1e6

# a design whose residual leakage is above this is flagged
LEAKAGE_THRESHOLD = 1e-3

# grid points of the coupler length search before the local refinement
SEARCH_POINTS = 4001
