"""Define fireworks estimating figures of merit from count records."""

import logging

from fireworks import Firework

from hcnot.common.fireworks.core import task_kwargs
from hcnot.analysis.firetasks.statistics import (
    LoadCountTable,
    ReconstructStates,
    EstimateTruthTable,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FIREWORK_KWARGS = Firework.__init__.__code__.co_varnames


class EstimateTruthTableFW(Firework):
    """
    Estimate the truth table of count records produced by a parent firework.
    """

    def __init__(self, name="estimate_truth_table", parents=None, **kwargs):
        """
        Args:
            name (str, optional): Name of the Firework.
            parents (Firework or [Firework], optional): FWs providing the
                ``count_records``.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.analysis.firetasks.statistics.EstimateTruthTable``
        """
        t = [EstimateTruthTable(**task_kwargs(EstimateTruthTable, kwargs))]
        spec = kwargs.pop("spec", {})
        super(EstimateTruthTableFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )


class ReconstructStatesFW(Firework):
    """
    Reconstruct the density matrices of count records produced by a parent
    firework, or of a count table file when ``input_csv`` is given.
    """

    def __init__(
        self, input_csv=None, name="reconstruct_states", parents=None, **kwargs
    ):
        """
        Args:
            input_csv (str, optional): Count table read before the reconstruction.
            name (str, optional): Name of the Firework.
            parents (Firework or [Firework], optional): Parent FWs.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.analysis.firetasks.statistics.LoadCountTable``
                3. ``hcnot.analysis.firetasks.statistics.ReconstructStates``
        """
        t = []
        if input_csv is not None:
            t.append(
                LoadCountTable(
                    input_csv=input_csv, **task_kwargs(LoadCountTable, kwargs)
                )
            )
        t.append(ReconstructStates(**task_kwargs(ReconstructStates, kwargs)))
        spec = kwargs.pop("spec", {})
        super(ReconstructStatesFW, self).__init__(
            t,
            parents=parents,
            name=name,
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )
