"""Define firetasks for the fiber coupling and directional coupler calculations."""

import logging

from fireworks.core.firework import FWAction, FiretaskBase
from fireworks.utilities.fw_utilities import explicit_serialize

from hcnot.photonics.defaults import (
    KAPPA_H,
    KAPPA_V,
    SMF_MFD,
    TEC_MFD,
    BULK_MFD,
    FACET_MFD,
    MAX_LENGTH,
    BANDWIDTH_NM,
    TARGET_EXTINCTION,
)
from hcnot.photonics.utilities.coupling import coupling_report
from hcnot.photonics.utilities.coupler import (
    design_bs,
    design_pbs,
    cross_coupling,
    calibrate_dispersion,
    extinction_over_bandwidth,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

DEFAULT_KEY = "results"


@explicit_serialize
class ComputeCoupling(FiretaskBase):
    """
    Compute the fiber-to-chip coupling efficiencies of a standard and an expanded
    core fiber.

    Args:
        old_fiber (list, optional): Mode-field diameters in um of the standard fiber.
        new_fiber (list, optional): Mode-field diameters in um of the expanded fiber.
        facet (list, optional): Mode-field diameters in um at the chip facet.
        bulk (list, optional): Mode-field diameters in um inside the chip.
    """

    required_params = []
    optional_params = ["old_fiber", "new_fiber", "facet", "bulk"]

    def run_task(self, fw_spec):
        report = coupling_report(
            tuple(self.get("old_fiber", SMF_MFD)),
            tuple(self.get("new_fiber", TEC_MFD)),
            tuple(self.get("facet", FACET_MFD)),
            tuple(self.get("bulk", BULK_MFD)),
        )
        # the new fiber at the facet is the reported operating point
        report["eta"] = report["eta_new"]
        return FWAction(
            mod_spec=[{"_set": {f"{DEFAULT_KEY}->coupling": report}}], propagate=True
        )


@explicit_serialize
class DesignCoupler(FiretaskBase):
    """
    Find the coupler length of a polarizing or balanced splitter and, for a PBS,
    the dispersion that reproduces the target extinction over the bandwidth.

    Args:
        kappa_h (float, optional): Coupling rate of H in 1/mm.
        kappa_v (float, optional): Coupling rate of V in 1/mm.
        max_length (float, optional): Longest allowed coupler in mm.
        kind (str, optional): ``PBS`` or ``BS``.
        bandwidth_nm (float, optional): Spectral width of the photons.
        target_extinction (float, optional): Extinction the dispersion is
            calibrated to.
    """

    required_params = []
    optional_params = [
        "kappa_h",
        "kappa_v",
        "max_length",
        "kind",
        "bandwidth_nm",
        "target_extinction",
    ]

    def run_task(self, fw_spec):
        kappa_h = self.get("kappa_h", KAPPA_H)
        kappa_v = self.get("kappa_v", KAPPA_V)
        max_length = self.get("max_length", MAX_LENGTH)
        kind = self.get("kind", "PBS")
        bandwidth = self.get("bandwidth_nm", BANDWIDTH_NM)

        if kind == "BS":
            spec = design_bs(kappa_h, kappa_v, max_length)
            result = {
                "kind": "BS",
                "L_mm": spec.length,
                "leakage": spec.leakage,
                "meets_threshold": spec.meets_threshold,
                "split_h": cross_coupling(spec, "H"),
                "split_v": cross_coupling(spec, "V"),
            }
        else:
            spec = design_pbs(kappa_h, kappa_v, max_length)
            result = {
                "kind": "PBS",
                "L_mm": spec.length,
                "leakage": spec.leakage,
                "meets_threshold": spec.meets_threshold,
                "extinction": extinction_over_bandwidth(spec, bandwidth),
            }
            target = self.get("target_extinction", TARGET_EXTINCTION)
            if bandwidth > 0 and result["extinction"] > target:
                calibrated = calibrate_dispersion(spec, bandwidth, target)
                result.update(
                    {
                        "dispersion": calibrated.dispersion_h,
                        "calibrated_extinction": extinction_over_bandwidth(
                            calibrated, bandwidth
                        ),
                    }
                )
            else:
                logger.warning(
                    f"extinction {result['extinction']:.3g} does not exceed "
                    f"{target}; dispersion not calibrated"
                )
        result.update({"kappa_h": kappa_h, "kappa_v": kappa_v, "bandwidth_nm": bandwidth})
        return FWAction(
            mod_spec=[{"_set": {f"{DEFAULT_KEY}->coupler_design": result}}],
            propagate=True,
        )
