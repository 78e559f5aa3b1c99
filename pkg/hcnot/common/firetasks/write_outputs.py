"""Define the firetask writing experiment results to disk."""

import os
import json
import logging

from fireworks.core.firework import FWAction, FiretaskBase
from fireworks.utilities.fw_utilities import explicit_serialize

from hcnot import __version__ as hcnot_version
from hcnot.common.utilities.tables import (
    write_csv,
    write_json,
    result_frames,
    write_records,
    output_document,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

DEFAULT_KEY = "results"


@explicit_serialize
class WriteExperimentOutput(FiretaskBase):
    """
    Write the results collected in the fw_spec as one JSON document or as CSV tables;
    both echo the configuration and the package version. Count records in the
    spec are also written as a count table.

    Args:
        experiment (str): Experiment name used as file prefix.
        output_dir (str, optional): Output directory; created when missing.
        fmt (str, optional): ``json`` or ``csv``.
        config (dict, optional): Configuration echoed into the outputs.
        write_counts (bool, optional): Write the count records in the fw_spec.
    """

    required_params = ["experiment"]
    optional_params = ["output_dir", "fmt", "config", "write_counts"]

    def run_task(self, fw_spec):
        experiment = self["experiment"]
        output_dir = self.get("output_dir") or os.getcwd()
        fmt = self.get("fmt", "json")
        config = self.get("config")
        results = fw_spec.get(DEFAULT_KEY, {})
        os.makedirs(output_dir, exist_ok=True)
        prefix = experiment.replace("-", "_")

        files = []
        if fmt == "json":
            path = os.path.join(output_dir, f"{prefix}.json")
            write_json(path, output_document(experiment, results, config))
            files.append(path)
        elif fmt == "csv":
            header = [f"hcnot {hcnot_version} {experiment}"]
            if config is not None:
                header.append(f"config {json.dumps(config)}")
            for name, frame in result_frames(results).items():
                path = os.path.join(output_dir, f"{prefix}_{name}.csv")
                write_csv(path, frame, header)
                files.append(path)
        else:
            raise ValueError(f"unsupported output format {fmt}")

        if self.get("write_counts", True) and fw_spec.get("count_records"):
            path = os.path.join(output_dir, f"{prefix}_counts.csv")
            write_records(path, fw_spec["count_records"])
            files.append(path)
        for path in files:
            logger.info(f"wrote {path}")
        return FWAction(update_spec={"output_files": files}, propagate=True)
