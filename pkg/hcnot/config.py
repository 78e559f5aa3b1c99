"""Define the experiment configuration document, its defaults and its validation."""

import os
import copy
import logging

from monty.json import MSONable
from monty.serialization import loadfn
from fireworks.fw_config import CONFIG_FILE_DIR

from hcnot.optics.defaults import CALIBRATED_NOISE, IDEAL_NOISE
from hcnot.optics.utilities.qubits import BELL_STATES
from hcnot.optics.utilities.source import NoiseConfig
from hcnot.analysis.defaults import (
    SEED,
    MC_SAMPLES,
    INTEGRATION_TIME,
    BELL_TOMO_INTEGRATION_TIME,
)
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

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)

CONFIG_FILENAME = "hcnot.json"

EXPERIMENTS = (
    "truth-table",
    "bell-tomo",
    "hom-scan",
    "coupling",
    "coupler-design",
    "tomo-fit",
)

OUTPUT_FORMATS = ("json", "csv")

SECTIONS = (
    "experiment",
    "preset",
    "noise",
    "statistics",
    "io",
    "photonics",
    "tomography",
)

DEFAULT_STATISTICS = {
    "integration_time_s": INTEGRATION_TIME,
    "mc_samples": MC_SAMPLES,
    "seed": SEED,
    "sample_counts": True,
}


def default_statistics(experiment, preset):
    """
    Statistics defaults of one experiment. Bell-state tomography integrates
    BELL_TOMO_INTEGRATION_TIME per setting and uses expected counts under the
    ideal preset.
    """
    statistics = copy.deepcopy(DEFAULT_STATISTICS)
    if experiment == "bell-tomo":
        statistics["integration_time_s"] = BELL_TOMO_INTEGRATION_TIME
        statistics["sample_counts"] = preset != "ideal"
    return statistics


DEFAULT_IO = {"output_dir": ".", "format": "json"}

DEFAULT_PHOTONICS = {
    "kappa_h": KAPPA_H,
    "kappa_v": KAPPA_V,
    "max_length": MAX_LENGTH,
    "kind": "PBS",
    "bandwidth_nm": BANDWIDTH_NM,
    "target_extinction": TARGET_EXTINCTION,
    "old_fiber": list(SMF_MFD),
    "new_fiber": list(TEC_MFD),
    "facet": list(FACET_MFD),
    "bulk": list(BULK_MFD),
}

DEFAULT_TOMOGRAPHY = {
    "input_label": "DH",
    "compensate": False,
    "input_csv": None,
    "label_column": None,
    "target": None,
}


class ConfigError(Exception):
    """
    Exception that is thrown when an experiment configuration is invalid; lists
    every problem found.
    """

    def __init__(self, problems=None):
        self.problems = list(problems or [])
        if self.problems:
            msg = "invalid configuration:\n" + "\n".join(
                f"  - {p}" for p in self.problems
            )
        else:
            msg = "invalid configuration"
        self.msg = msg
        super(ConfigError, self).__init__(msg)

    def __repr__(self):
        return self.msg


def _merge(defaults, values, section, problems):
    merged = copy.deepcopy(defaults)
    for key, value in (values or {}).items():
        if key not in defaults:
            problems.append(f"{section}: unknown option '{key}'")
            continue
        merged[key] = value
    return merged


class ExperimentConfig(MSONable):
    """
    One experiment: which experiment to run, the noise model of the source and
    chip, the counting statistics, the output location and format, and the
    photonics and tomography options. Missing options take their defaults.
    """

    def __init__(
        self,
        experiment="truth-table",
        noise=None,
        statistics=None,
        io=None,
        photonics=None,
        tomography=None,
        preset="calibrated",
    ):
        self.experiment = experiment
        self.preset = preset
        self._unknown = []
        base = IDEAL_NOISE if preset == "ideal" else CALIBRATED_NOISE
        self.noise = _merge(base, noise, "noise", self._unknown)
        self.statistics = _merge(
            default_statistics(experiment, preset), statistics, "statistics", self._unknown
        )
        self.io = _merge(DEFAULT_IO, io, "io", self._unknown)
        self.photonics = _merge(DEFAULT_PHOTONICS, photonics, "photonics", self._unknown)
        self.tomography = _merge(
            DEFAULT_TOMOGRAPHY, tomography, "tomography", self._unknown
        )

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "experiment": self.experiment,
            "preset": self.preset,
            "noise": self.noise,
            "statistics": self.statistics,
            "io": self.io,
            "photonics": self.photonics,
            "tomography": self.tomography,
        }

    def noise_config(self):
        return NoiseConfig(**self.noise)

    def problems(self):
        """Every violation found in the document."""
        problems = list(self._unknown)
        if self.experiment not in EXPERIMENTS:
            problems.append(
                f"experiment '{self.experiment}' is not one of {list(EXPERIMENTS)}"
            )
        if self.preset not in ("ideal", "calibrated"):
            problems.append(f"preset '{self.preset}' must be ideal or calibrated")
        problems += [f"noise: {p}" for p in self.noise_config().problems()]

        stats = self.statistics
        if not _is_number(stats["integration_time_s"]) or stats["integration_time_s"] <= 0:
            problems.append("statistics: integration_time_s must be positive")
        if not _is_int(stats["mc_samples"]) or stats["mc_samples"] < 0:
            problems.append("statistics: mc_samples must be a non-negative integer")
        elif stats["mc_samples"] == 1:
            problems.append("statistics: mc_samples must be 0 or at least 2")
        if not _is_int(stats["seed"]) or not 0 <= stats["seed"] < 2**64:
            problems.append("statistics: seed must be an unsigned 64-bit integer")

        if self.io["format"] not in OUTPUT_FORMATS:
            problems.append(f"io: format must be one of {list(OUTPUT_FORMATS)}")

        photonics = self.photonics
        for key in ("kappa_h", "kappa_v", "max_length"):
            if not _is_number(photonics[key]) or photonics[key] <= 0:
                problems.append(f"photonics: {key} must be positive")
        if photonics["kind"] not in ("PBS", "BS"):
            problems.append("photonics: kind must be PBS or BS")
        elif photonics["kind"] == "PBS" and photonics["kappa_h"] == photonics["kappa_v"]:
            problems.append("photonics: a PBS needs kappa_h != kappa_v")
        if not _is_number(photonics["bandwidth_nm"]) or photonics["bandwidth_nm"] < 0:
            problems.append("photonics: bandwidth_nm must be non-negative")
        if (
            not _is_number(photonics["target_extinction"])
            or photonics["target_extinction"] <= 1
        ):
            problems.append("photonics: target_extinction must exceed 1")
        for key in ("old_fiber", "new_fiber", "facet", "bulk"):
            mfd = photonics[key]
            if (
                not isinstance(mfd, (list, tuple))
                or len(mfd) != 2
                or not all(_is_number(v) and v > 0 for v in mfd)
            ):
                problems.append(f"photonics: {key} must be two positive diameters")

        tomography = self.tomography
        label = tomography["input_label"]
        if not isinstance(label, str) or len(label) != 2 or any(
            c not in "HVDALR" for c in label
        ):
            problems.append(f"tomography: input_label '{label}' is not a product state")
        target = tomography["target"]
        if target is not None and target not in BELL_STATES:
            problems.append(f"tomography: target must be one of {list(BELL_STATES)}")
        if self.experiment == "tomo-fit":
            path = tomography["input_csv"]
            if not path:
                problems.append("tomography: tomo-fit needs input_csv")
            elif not os.path.isfile(path):
                problems.append(f"tomography: input_csv {path} does not exist")
        return problems

    def validate(self):
        problems = self.problems()
        if problems:
            raise ConfigError(problems)
        return self


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def load_config(path=None, overrides=None):
    """
    Build an experiment configuration from a JSON or YAML document and overrides.

    Args:
        path (str, optional): Configuration file; if not given, ``hcnot.json`` in
            the FireWorks configuration directory is used when present.
        overrides (dict, optional): {section: {option: value}} or top-level
            values (``experiment``, ``preset``) that win over the file.

    Returns:
        ExperimentConfig: Validated configuration.
    """
    document = {}
    if path is None:
        default = os.path.join(CONFIG_FILE_DIR, CONFIG_FILENAME)
        if os.path.isfile(default):
            path = default
    if path is not None:
        if not os.path.isfile(path):
            raise ConfigError([f"configuration file {path} does not exist"])
        try:
            document = loadfn(path)
        except Exception as e:
            raise ConfigError([f"could not read {path}: {e}"])
        if not isinstance(document, dict):
            raise ConfigError([f"{path} does not hold a mapping"])
        logger.info(f"read configuration from {path}")
    document = {k: v for k, v in document.items() if not k.startswith("@")}
    for key, value in (overrides or {}).items():
        if isinstance(value, dict):
            section = dict(document.get(key) or {})
            section.update(value)
            document[key] = section
        elif value is not None:
            document[key] = value
    problems = [f"unknown section '{k}'" for k in document if k not in SECTIONS]
    config = ExperimentConfig(**{k: v for k, v in document.items() if k in SECTIONS})
    problems += config.problems()
    if problems:
        raise ConfigError(problems)
    return config
