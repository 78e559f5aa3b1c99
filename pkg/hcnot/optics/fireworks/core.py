"""Define fireworks simulating the heralded gate."""

import logging

from fireworks import Firework

from hcnot.common.fireworks.core import task_kwargs
from hcnot.optics.firetasks.simulate import (
    SimulateHomScan,
    SimulateBellStates,
    SimulateTruthTable,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FIREWORK_KWARGS = Firework.__init__.__code__.co_varnames


class SimulateTruthTableFW(Firework):
    """
    Simulate the feed-forward corrected truth table and its count records.
    """

    def __init__(self, noise, name="simulate_truth_table", parents=None, **kwargs):
        """
        Args:
            noise (dict): Keyword arguments of ``NoiseConfig``.
            name (str, optional): Name of the Firework.
            parents (Firework or [Firework], optional): Parent FWs.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.optics.firetasks.simulate.SimulateTruthTable``
        """
        t = [SimulateTruthTable(noise=noise, **task_kwargs(SimulateTruthTable, kwargs))]
        spec = kwargs.pop("spec", {})
        super(SimulateTruthTableFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )


class SimulateBellStatesFW(Firework):
    """
    Simulate the herald-resolved output states of one product input.
    """

    def __init__(self, noise, name="simulate_bell_states", parents=None, **kwargs):
        """
        Args:
            noise (dict): Keyword arguments of ``NoiseConfig``.
            name (str, optional): Name of the Firework.
            parents (Firework or [Firework], optional): Parent FWs.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.optics.firetasks.simulate.SimulateBellStates``
        """
        t = [SimulateBellStates(noise=noise, **task_kwargs(SimulateBellStates, kwargs))]
        spec = kwargs.pop("spec", {})
        super(SimulateBellStatesFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )


class SimulateHomScanFW(Firework):
    def __init__(self, noise, name="simulate_hom_scan", parents=None, **kwargs):
        t = [SimulateHomScan(noise=noise, **task_kwargs(SimulateHomScan, kwargs))]
        spec = kwargs.pop("spec", {})
        super(SimulateHomScanFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )
