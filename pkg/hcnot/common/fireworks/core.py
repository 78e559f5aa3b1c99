"""Define the firework closing every experiment workflow."""

import logging

from fireworks import Firework

from hcnot.common.firetasks.write_outputs import WriteExperimentOutput

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FIREWORK_KWARGS = Firework.__init__.__code__.co_varnames


def task_kwargs(task, kwargs):
    """Keyword arguments of a firework that the given firetask accepts."""
    return {
        i: j for i, j in kwargs.items() if i in task.required_params + task.optional_params
    }


class WriteOutputFW(Firework):
    """
    Write the results gathered by the parent fireworks.
    """

    def __init__(self, experiment, name=None, parents=None, **kwargs):
        """
        Args:
            experiment (str): Experiment name used as file prefix.
            name (str, optional): Name of the Firework; defaults to
                ``<experiment>-output``.
            parents (Firework or [Firework], optional): FWs whose results are
                written.
            kwargs: other kwargs that are passed to:

                1. Firework.__init__.
                2. ``hcnot.common.firetasks.write_outputs.WriteExperimentOutput``
        """
        t = [
            WriteExperimentOutput(
                experiment=experiment,
                **task_kwargs(WriteExperimentOutput, kwargs),
            )
        ]
        spec = kwargs.pop("spec", {})
        super(WriteOutputFW, self).__init__(
            t,
            parents=parents,
            name=name or f"{experiment}-output",
            spec=spec,
            **{i: j for i, j in kwargs.items() if i in FIREWORK_KWARGS},
        )
