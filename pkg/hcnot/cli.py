"""Command-line front-end running one experiment per invocation."""

import sys
import logging
import argparse

from hcnot import __version__ as hcnot_version
from hcnot.config import EXPERIMENTS, OUTPUT_FORMATS, ConfigError, load_config
from hcnot.optics.utilities.qubits import BELL_STATES
from hcnot.workflows.experiments import get_workflow, run_workflow_locally

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

_handler = None

# flag destination -> (config section, option)
OVERRIDES = {
    "seed": ("statistics", "seed"),
    "mc_samples": ("statistics", "mc_samples"),
    "integration_time": ("statistics", "integration_time_s"),
    "sample_counts": ("statistics", "sample_counts"),
    "out": ("io", "output_dir"),
    "format": ("io", "format"),
    "cross_overlap": ("noise", "cross_overlap"),
    "ancilla_fidelity": ("noise", "ancilla_fidelity"),
    "input_csv": ("tomography", "input_csv"),
    "label_column": ("tomography", "label_column"),
    "target": ("tomography", "target"),
    "input_label": ("tomography", "input_label"),
    "compensate": ("tomography", "compensate"),
    "kind": ("photonics", "kind"),
    "kappa_h": ("photonics", "kappa_h"),
    "kappa_v": ("photonics", "kappa_v"),
    "max_length": ("photonics", "max_length"),
}


def _configure_logging(level):
    global _handler
    root = logging.getLogger()
    if _handler is None:
        _handler = logging.StreamHandler(stream=sys.stdout)
        root.addHandler(_handler)
    else:
        _handler.setStream(sys.stdout)
    root.setLevel(level)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON or YAML experiment configuration.")
    common.add_argument("--seed", type=int, help="Seed of every random draw.")
    common.add_argument("--out", help="Output directory.")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format.")
    common.add_argument("--cross-overlap", type=float, help="Overlap x of the two sources.")
    common.add_argument(
        "--ancilla-fidelity", type=float, help="Fidelity of the ancilla pair to |Psi->."
    )
    common.add_argument("--mc-samples", type=int, help="Monte-Carlo resamples; 0 skips.")
    common.add_argument(
        "--integration-time", type=float, help="Integration time per setting in s."
    )
    common.add_argument(
        "--expected-counts",
        dest="sample_counts",
        action="store_const",
        const=False,
        help="Use rounded expected counts instead of Poisson draws.",
    )
    preset = common.add_mutually_exclusive_group()
    preset.add_argument(
        "--calibrated",
        dest="preset",
        action="store_const",
        const="calibrated",
        help="Start from the calibrated noise model (default).",
    )
    preset.add_argument(
        "--ideal",
        dest="preset",
        action="store_const",
        const="ideal",
        help="Start from the noiseless model.",
    )
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="Only log warnings.")
    verbosity.add_argument("--verbose", action="store_true", help="Log debug output.")

    tomography = argparse.ArgumentParser(add_help=False)
    tomography.add_argument(
        "--target", choices=list(BELL_STATES), help="Bell state compared with."
    )
    tomography.add_argument(
        "--compensate",
        action="store_const",
        const=True,
        help="Also report fidelities after local phase compensation.",
    )

    photonics = argparse.ArgumentParser(add_help=False)
    photonics.add_argument("--kind", choices=("PBS", "BS"), help="Coupler type.")
    photonics.add_argument("--kappa-h", type=float, help="Coupling rate of H in 1/mm.")
    photonics.add_argument("--kappa-v", type=float, help="Coupling rate of V in 1/mm.")
    photonics.add_argument("--max-length", type=float, help="Longest coupler in mm.")

    parser = argparse.ArgumentParser(
        prog="hcnot", description="Heralded linear-optical CNOT simulator."
    )
    parser.add_argument("--version", action="version", version=f"hcnot {hcnot_version}")
    subparsers = parser.add_subparsers(dest="experiment", metavar="experiment")
    subparsers.required = True
    for experiment in EXPERIMENTS:
        parents = [common]
        if experiment in ("bell-tomo", "tomo-fit"):
            parents.append(tomography)
        if experiment == "coupler-design":
            parents.append(photonics)
        sub = subparsers.add_parser(experiment, parents=parents)
        if experiment == "bell-tomo":
            sub.add_argument("--input-label", help="Product input such as DH.")
        if experiment == "tomo-fit":
            sub.add_argument("--input-csv", help="Count table to reconstruct.")
            sub.add_argument("--label-column", help="Column splitting the table.")
    return parser


def overrides_from_args(args):
    """Configuration overrides of every flag given on the command line."""
    overrides = {"experiment": args.experiment, "preset": args.preset}
    for dest, (section, option) in OVERRIDES.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides.setdefault(section, {})[option] = value
    return overrides


def main(argv=None):
    """
    Run the experiment named on the command line.

    Returns:
        int: 0 on success, 1 for an invalid configuration, 2 when the run fails.
    """
    args = build_parser().parse_args(argv)
    if args.quiet:
        _configure_logging(logging.WARNING)
    elif args.verbose:
        _configure_logging(logging.DEBUG)
    else:
        _configure_logging(logging.INFO)

    try:
        config = load_config(args.config, overrides_from_args(args))
    except ConfigError as e:
        logger.error(e.msg)
        return 1
    try:
        spec = run_workflow_locally(get_workflow(config))
    except Exception as e:
        logger.error(f"{args.experiment} failed: {e}")
        logger.debug("traceback", exc_info=True)
        return 2
    for path in spec.get("output_files", []):
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
