"""Define fireworks for the chip photonics calculations."""

import logging

from fireworks import Firework

from hcnot.common.fireworks.core import task_kwargs
from hcnot.photonics.firetasks.design import DesignCoupler, ComputeCoupling

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FIREWORK_KWARGS = Firework.__init__.__code__.co_varnames


class CouplingFW(Firework):
    """
    Compare the fiber-to-chip coupling of two fibers.
    """

    def __init__(self, name="coupling", parents=None, **kwargs):
        t = [ComputeCoupling(**task_kwargs(ComputeCoupling, kwargs))]
        spec = kwargs.pop("spec", {})
        super(CouplingFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )


class CouplerDesignFW(Firework):
    """
    Design a directional coupler acting as a PBS or a 50:50 splitter.
    """

    def __init__(self, name="coupler_design", parents=None, **kwargs):
        """
        Args:
            name (str, optional): Name of the Firework.
            parents (Firework or [Firework], optional): Parent FWs.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.photonics.firetasks.design.DesignCoupler``
        """
        t = [DesignCoupler(**task_kwargs(DesignCoupler, kwargs))]
        spec = kwargs.pop("spec", {})
        super(CouplerDesignFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )
