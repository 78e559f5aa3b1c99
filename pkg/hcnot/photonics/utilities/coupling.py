"""Gaussian mode-overlap coupling efficiencies between fibers and waveguide modes."""

import logging

import numpy as np

from monty.json import MSONable

from hcnot.photonics.defaults import SMF_MFD, TEC_MFD, BULK_MFD, FACET_MFD

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class GaussianMode(MSONable):
    """
    Elliptical Gaussian field exp(-(x - x0)^2/wx^2 - (y - y0)^2/wy^2) with mode-field
    radii wx and wy in um.
    """

    def __init__(self, wx, wy, x_offset=0.0, y_offset=0.0):
        if wx <= 0 or wy <= 0:
            raise ValueError(f"mode-field radii must be positive, got {wx}, {wy}")
        self.wx = float(wx)
        self.wy = float(wy)
        self.x_offset = float(x_offset)
        self.y_offset = float(y_offset)

    @classmethod
    def from_mfd(cls, mfd_x, mfd_y=None, **kwargs):
        """Mode from mode-field diameters; a single value gives a circular mode."""
        mfd_y = mfd_x if mfd_y is None else mfd_y
        return cls(mfd_x / 2, mfd_y / 2, **kwargs)

    @property
    def mfd(self):
        return 2 * self.wx, 2 * self.wy

    def field(self, x, y):
        return np.exp(
            -((x - self.x_offset) ** 2) / self.wx**2
            - (y - self.y_offset) ** 2 / self.wy**2
        )

    def __repr__(self):
        return f"GaussianMode(mfd={self.mfd[0]:g}x{self.mfd[1]:g} um)"


def overlap_1d(w1, w2, offset=0.0):
    """
    Power overlap of two one-dimensional Gaussian fields of radii w1 and w2
    displaced by ``offset``.
    """
    s = w1**2 + w2**2
    return 2 * w1 * w2 / s * np.exp(-2 * offset**2 / s)


def overlap_efficiency(m1, m2):
    """
    Power coupling efficiency of two aligned elliptical Gaussian modes; the
    overlap integral factorizes into one factor per axis.

    Args:
        m1 (GaussianMode): First mode.
        m2 (GaussianMode): Second mode.

    Returns:
        float: Efficiency in (0, 1], equal to 1 only for identical modes.
    """
    eta_x = overlap_1d(m1.wx, m2.wx, m1.x_offset - m2.x_offset)
    eta_y = overlap_1d(m1.wy, m2.wy, m1.y_offset - m2.y_offset)
    return float(eta_x * eta_y)


def numerical_overlap(m1, m2, half_width=None, n_points=801):
    """Overlap integral of the two fields evaluated on a square grid."""
    if half_width is None:
        half_width = 6 * max(m1.wx, m1.wy, m2.wx, m2.wy)
    x = np.linspace(-half_width, half_width, n_points)
    xx, yy = np.meshgrid(x, x)
    f1, f2 = m1.field(xx, yy), m2.field(xx, yy)
    return float(
        np.abs(np.sum(np.conj(f1) * f2)) ** 2
        / (np.sum(np.abs(f1) ** 2) * np.sum(np.abs(f2) ** 2))
    )


def improvement_ratio(eta_new, eta_old):
    if eta_old <= 0:
        raise ValueError("the reference efficiency must be positive")
    return eta_new / eta_old - 1


def coupling_report(
    old_fiber=SMF_MFD, new_fiber=TEC_MFD, facet=FACET_MFD, bulk=BULK_MFD
):
    """
    Fiber-to-chip coupling summary.

    Args:
        old_fiber (tuple): Mode-field diameters in um of the standard fiber.
        new_fiber (tuple): Mode-field diameters in um of the expanded-core fiber.
        facet (tuple): Mode-field diameters in um of the guide mode at the facet.
        bulk (tuple): Mode-field diameters in um of the guide mode in the chip.

    Returns:
        dict: Efficiencies of both fibers at the facet, the improvement ratio,
            the overlap of the bulk mode with the facet mode and the
            efficiencies the fibers would have without the taper.
    """
    old, new = GaussianMode.from_mfd(*old_fiber), GaussianMode.from_mfd(*new_fiber)
    facet_mode, bulk_mode = GaussianMode.from_mfd(*facet), GaussianMode.from_mfd(*bulk)
    eta_old = overlap_efficiency(old, facet_mode)
    eta_new = overlap_efficiency(new, facet_mode)
    report = {
        "eta_old": eta_old,
        "eta_new": eta_new,
        "ratio": improvement_ratio(eta_new, eta_old),
        "eta_bulk_facet": overlap_efficiency(bulk_mode, facet_mode),
        "eta_old_bulk": overlap_efficiency(old, bulk_mode),
        "eta_new_bulk": overlap_efficiency(new, bulk_mode),
    }
    logger.info(
        f"facet coupling {eta_old:.3f} -> {eta_new:.3f} "
        f"({100 * report['ratio']:.1f}% improvement)"
    )
    return report
