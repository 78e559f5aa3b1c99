"""Design birefringent evanescent directional couplers: polarizing splitters,
balanced splitters and their extinction over a finite bandwidth."""

import logging

import numpy as np

from scipy.optimize import brentq, minimize_scalar
from monty.json import MSONable

from hcnot.photonics.defaults import (
    MAX_LENGTH,
    BANDWIDTH_NM,
    SEARCH_POINTS,
    EXTINCTION_CAP,
    LEAKAGE_THRESHOLD,
    DESIGN_WAVELENGTH,
    TARGET_EXTINCTION,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

COUPLER_KINDS = ("PBS", "BS")

# argument of np.sinc at its first minimum, tan(pi u) = pi u
SINC_FIRST_MINIMUM = 1.4302966531242025


class CouplerSpec(MSONable):
    """
    Two identical evanescently coupled waveguides of length ``length`` (mm) with
    polarization-dependent coupling rates (1/mm) and their linear dispersion
    ((1/mm)/nm) around the design wavelength (nm).

    A PBS returns H to its input guide and transfers V; a BS splits both
    polarizations evenly. ``leakage`` is the residual of the design search.
    """

    def __init__(
        self,
        kappa_h,
        kappa_v,
        length,
        dispersion_h=0.0,
        dispersion_v=0.0,
        design_wavelength=DESIGN_WAVELENGTH,
        kind="PBS",
        leakage=None,
        threshold=LEAKAGE_THRESHOLD,
    ):
        if kappa_h <= 0 or kappa_v <= 0:
            raise ValueError(f"coupling rates must be positive, got {kappa_h}, {kappa_v}")
        if length < 0:
            raise ValueError(f"length must be non-negative, got {length}")
        if kind not in COUPLER_KINDS:
            raise ValueError(f"kind {kind} is not one of {COUPLER_KINDS}")
        self.kappa_h = kappa_h
        self.kappa_v = kappa_v
        self.length = length
        self.dispersion_h = dispersion_h
        self.dispersion_v = dispersion_v
        self.design_wavelength = design_wavelength
        self.kind = kind
        self.leakage = leakage
        self.threshold = threshold

    @property
    def meets_threshold(self):
        return self.leakage is not None and self.leakage <= self.threshold

    def kappa(self, polarization, wavelength=None):
        if polarization not in ("H", "V"):
            raise ValueError(f"polarization must be H or V, got {polarization}")
        wavelength = self.design_wavelength if wavelength is None else wavelength
        kappa, slope = (
            (self.kappa_h, self.dispersion_h)
            if polarization == "H"
            else (self.kappa_v, self.dispersion_v)
        )
        return kappa + (wavelength - self.design_wavelength) * slope

    def with_dispersion(self, dispersion_h, dispersion_v):
        d = self.as_dict()
        d.update({"dispersion_h": dispersion_h, "dispersion_v": dispersion_v})
        return CouplerSpec.from_dict(d)


def cross_coupling(spec, polarization, wavelength=None):
    """
    Power fraction transferred to the other guide, sin^2(kappa(lambda) L), for
    identical guides without detuning.
    """
    return float(np.sin(spec.kappa(polarization, wavelength) * spec.length) ** 2)


def coupling_length(wavelength_nm, n_even, n_odd):
    """
    Length in mm for complete transfer between the guides from the effective
    indices of the even and odd supermodes.
    """
    dn = abs(n_even - n_odd)
    if dn == 0:
        raise ValueError("degenerate supermodes do not exchange power")
    return wavelength_nm * 1e-6 / (2 * dn)


def kappa_from_supermodes(wavelength_nm, n_even, n_odd):
    """Coupling rate in 1/mm, pi/2 over the complete-transfer length."""
    return np.pi / (2 * coupling_length(wavelength_nm, n_even, n_odd))


def pbs_leakage(kappa_h, kappa_v, length):
    """Power of both polarizations in the wrong guide: sin^2(kH L) + cos^2(kV L)."""
    return np.sin(kappa_h * length) ** 2 + np.cos(kappa_v * length) ** 2


def bs_leakage(kappa_h, kappa_v, length):
    """Deviation of both polarizations from an even split."""
    return (
        np.abs(np.sin(kappa_h * length) ** 2 - 0.5)
        + np.abs(np.sin(kappa_v * length) ** 2 - 0.5)
    )


def _search_length(objective, max_length, candidates, n_points):
    lengths = np.linspace(0, max_length, n_points)[1:]
    values = objective(lengths)
    i = int(np.argmin(values))
    best_length, best_value = lengths[i], values[i]
    step = lengths[1] - lengths[0]
    refined = minimize_scalar(
        objective,
        bounds=(max(lengths[i] - step, 1e-12), min(lengths[i] + step, max_length)),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if refined.fun < best_value:
        best_length, best_value = refined.x, refined.fun
    for length in candidates:
        if 0 < length <= max_length:
            value = objective(length)
            if value < best_value:
                best_length, best_value = length, value
    return float(best_length), float(best_value)


def design_pbs(
    kappa_h,
    kappa_v,
    max_length=MAX_LENGTH,
    threshold=LEAKAGE_THRESHOLD,
    n_points=SEARCH_POINTS,
    design_wavelength=DESIGN_WAVELENGTH,
):
    """
    Search the coupler length for which H returns to its input guide and V
    transfers completely. Leakage vanishes exactly when kappa_h/kappa_v equals
    2m/(2n + 1); the lengths m pi/kappa_h and (n + 1/2) pi/kappa_v are therefore
    tried alongside a grid search with local refinement.

    Args:
        kappa_h (float): Coupling rate of H in 1/mm.
        kappa_v (float): Coupling rate of V in 1/mm.
        max_length (float): Longest allowed coupler in mm.
        threshold (float): Leakage above which the design is flagged.
        n_points (int): Grid points of the search.
        design_wavelength (float): Wavelength in nm the rates refer to.

    Returns:
        CouplerSpec: Best design with its leakage; ``meets_threshold`` is False
            when no length within ``max_length`` reaches the threshold.
    """
    if kappa_h <= 0 or kappa_v <= 0:
        raise ValueError(f"coupling rates must be positive, got {kappa_h}, {kappa_v}")
    if np.isclose(kappa_h, kappa_v, rtol=0, atol=1e-15):
        raise ValueError("a polarizing splitter needs kappa_h != kappa_v")
    candidates = [m * np.pi / kappa_h for m in range(1, int(max_length * kappa_h / np.pi) + 1)]
    candidates += [
        (n + 0.5) * np.pi / kappa_v
        for n in range(int(max_length * kappa_v / np.pi - 0.5) + 1)
    ]
    length, leakage = _search_length(
        lambda L: pbs_leakage(kappa_h, kappa_v, L), max_length, candidates, n_points
    )
    spec = CouplerSpec(
        kappa_h,
        kappa_v,
        length,
        design_wavelength=design_wavelength,
        kind="PBS",
        leakage=leakage,
        threshold=threshold,
    )
    if not spec.meets_threshold:
        logger.warning(
            f"best PBS length {length:.4f} mm leaks {leakage:.3e}, above {threshold:g}"
        )
    else:
        logger.info(f"PBS length {length:.4f} mm with leakage {leakage:.3e}")
    return spec


def design_bs(
    kappa_h,
    kappa_v,
    max_length=MAX_LENGTH,
    threshold=LEAKAGE_THRESHOLD,
    n_points=SEARCH_POINTS,
    design_wavelength=DESIGN_WAVELENGTH,
):
    """
    Search the coupler length splitting both polarizations 50:50; exact lengths
    are (m + 1/2) pi/(2 kappa) for each polarization.
    """
    if kappa_h <= 0 or kappa_v <= 0:
        raise ValueError(f"coupling rates must be positive, got {kappa_h}, {kappa_v}")
    candidates = [
        (m + 0.5) * np.pi / (2 * kappa)
        for kappa in (kappa_h, kappa_v)
        for m in range(int(2 * max_length * kappa / np.pi) + 1)
    ]
    length, leakage = _search_length(
        lambda L: bs_leakage(kappa_h, kappa_v, L), max_length, candidates, n_points
    )
    spec = CouplerSpec(
        kappa_h,
        kappa_v,
        length,
        design_wavelength=design_wavelength,
        kind="BS",
        leakage=leakage,
        threshold=threshold,
    )
    if not spec.meets_threshold:
        logger.warning(
            f"best BS length {length:.4f} mm deviates {leakage:.3e} from 50:50"
        )
    return spec


def _mean_wrong_power(theta, slope, length, bandwidth_nm, transfer):
    """
    Wrong-guide power averaged over a top-hat spectrum; theta = kappa L at the
    design wavelength. The value is the running maximum over bandwidths up to
    ``bandwidth_nm``, so it never decreases with bandwidth.
    """
    sign = -1 if transfer else 1
    contrast = sign * np.cos(2 * theta)
    if contrast <= 0:
        # wrong power only falls with bandwidth here; keep the narrow-band value
        damping = 1.0
    else:
        half_phase = abs(slope) * length * bandwidth_nm / 2
        # sin(2 D)/(2 D), held at its first minimum so the average never recovers
        damping = np.sinc(min(2 * half_phase / np.pi, SINC_FIRST_MINIMUM))
    return 0.5 - contrast * damping / 2


def extinction_over_bandwidth(spec, bandwidth_nm=BANDWIDTH_NM):
    """
    Right:wrong power ratio averaged over a top-hat spectrum of the given width
    around the design wavelength; for a PBS the worse of the two polarizations.

    Args:
        spec (CouplerSpec): PBS design.
        bandwidth_nm (float): Full spectral width in nm.

    Returns:
        float: Extinction ratio, capped at EXTINCTION_CAP.
    """
    if spec.kind != "PBS":
        raise ValueError("extinction is defined for polarizing splitters")
    if bandwidth_nm < 0:
        raise ValueError("bandwidth must be non-negative")
    wrong = max(
        _mean_wrong_power(
            spec.kappa_h * spec.length, spec.dispersion_h, spec.length, bandwidth_nm, False
        ),
        _mean_wrong_power(
            spec.kappa_v * spec.length, spec.dispersion_v, spec.length, bandwidth_nm, True
        ),
    )
    if wrong <= (1 - wrong) / EXTINCTION_CAP:
        return EXTINCTION_CAP
    return float((1 - wrong) / wrong)


def calibrate_dispersion(
    spec, bandwidth_nm=BANDWIDTH_NM, target_extinction=TARGET_EXTINCTION
):
    """
    Common magnitude of the coupling-rate dispersion for which the design shows
    ``target_extinction`` over ``bandwidth_nm``.

    Returns:
        CouplerSpec: Copy of the design with both dispersions set.
    """
    if bandwidth_nm <= 0 or spec.length <= 0:
        raise ValueError("calibration needs a positive bandwidth and length")

    def mismatch(slope):
        extinction = extinction_over_bandwidth(spec.with_dispersion(slope, slope), bandwidth_nm)
        return np.log(extinction) - np.log(target_extinction)

    # the extinction has dropped to 1 at this slope
    upper = np.pi / (spec.length * bandwidth_nm)
    if mismatch(0.0) <= 0:
        raise ValueError(
            f"the design reaches only {extinction_over_bandwidth(spec, 0):.3g} "
            f"without dispersion; {target_extinction} is out of reach"
        )
    slope = brentq(mismatch, 0.0, upper, xtol=1e-15)
    logger.info(
        f"dispersion {slope:.4e} (1/mm)/nm gives extinction {target_extinction} "
        f"over {bandwidth_nm} nm"
    )
    return spec.with_dispersion(slope, slope)
