"""Turn experiment results into self-describing JSON documents and CSV tables."""

import json
import logging

import pandas as pd

from monty.json import jsanitize

from hcnot import __version__ as hcnot_version
from hcnot.optics.utilities.qubits import pairs_to_matrix
from hcnot.analysis.utilities.counting import CountRecord, write_count_table

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

TRUTH_TABLE_KEYS = ("simulated_truth_table", "truth_table")


def output_document(experiment, results, config=None):
    """JSON-ready document echoing the configuration and the package version."""
    return {
        "experiment": experiment,
        "version": hcnot_version,
        "config": config,
        "results": jsanitize(results),
    }


def write_json(path, document):
    with open(path, "w") as f:
        f.write(json.dumps(document, indent=2))


def truth_table_frame(result):
    rows = []
    std = result.get("table_std")
    for i, label in enumerate(result["inputs"]):
        for j, outcome in enumerate(("HH", "HV", "VH", "VV")):
            row = {"input": label, "output": outcome, "probability": result["table"][i][j]}
            if std is not None:
                row["std"] = std[i][j]
            rows.append(row)
    return pd.DataFrame(rows)


def density_frame(pairs):
    rho = pairs_to_matrix(pairs)
    labels = ("HH", "HV", "VH", "VV")
    return pd.DataFrame(
        [
            {"row": labels[i], "col": labels[j], "re": rho[i, j].real, "im": rho[i, j].imag}
            for i in range(4)
            for j in range(4)
        ]
    )


def result_frames(results):
    """
    CSV tables of a results dictionary.

    Returns:
        dict: {table name: DataFrame}; density matrices get one table each.
    """
    frames = {}
    for key, value in results.items():
        if key in TRUTH_TABLE_KEYS:
            frames[key] = truth_table_frame(value)
            frames[f"{key}_summary"] = pd.DataFrame(
                [{k: v for k, v in value.items() if not isinstance(v, list)}]
            )
        elif key == "hom_scan":
            frames[key] = pd.DataFrame(value["curve"])
            frames[f"{key}_summary"] = pd.DataFrame(
                [{k: v for k, v in value.items() if k != "curve"}]
            )
        elif key == "simulated_states":
            frames[key] = pd.DataFrame(
                [{k: v for k, v in b.items() if k != "rho"} for b in value["branches"]]
            )
            for branch in value["branches"]:
                name = branch["herald"].replace(",", "")
                frames[f"{key}_rho_{name}"] = density_frame(branch["rho"])
        elif key == "tomography":
            frames[key] = pd.DataFrame(
                [
                    {k: v for k, v in state.items() if not k.startswith("rho")}
                    for state in value
                ]
            )
            for state in value:
                name = str(state["label"]).replace(",", "")
                frames[f"{key}_rho_{name}"] = density_frame(state["rho"])
        elif isinstance(value, dict):
            frames[key] = pd.DataFrame(
                [{"quantity": k, "value": v} for k, v in value.items()]
            )
        else:
            logger.debug(f"no table for result {key}")
    return frames


def write_csv(path, frame, header_lines=()):
    """Write a table preceded by ``#`` comment lines."""
    with open(path, "w") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        frame.to_csv(f, index=False)


def write_records(path, records):
    """Write count records of any origin in the count-table format."""
    records = [r if isinstance(r, CountRecord) else CountRecord.from_dict(r) for r in records]
    labeled = any(r.label is not None for r in records)
    write_count_table(records, path, label_column="label" if labeled else None)