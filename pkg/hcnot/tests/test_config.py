import json

import pytest

import hcnot.config as config_module

from hcnot.config import ConfigError, ExperimentConfig, load_config


@pytest.fixture(autouse=True)
def empty_config_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(config_module, "CONFIG_FILE_DIR", str(tmp_path / "fw_config"))


def test_defaults_follow_calibrated_preset():
    config = load_config()
    assert config.experiment == "truth-table"
    assert config.noise["cross_overlap"] == 0.88
    assert config.noise["ancilla_fidelity"] == 0.945
    assert config.statistics["mc_samples"] == 1000
    assert config.io["format"] == "json"


def test_ideal_preset_with_overrides():
    config = load_config(
        overrides={"preset": "ideal", "noise": {"ancilla_fidelity": 0.9}}
    )
    assert config.noise["cross_overlap"] == 1.0
    assert config.noise["pbs_extinction"] is None
    assert config.noise["ancilla_fidelity"] == 0.9


def test_file_values_lose_to_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "experiment": "hom-scan",
                "noise": {"cross_overlap": 0.8},
                "statistics": {"seed": 7, "mc_samples": 10},
            }
        )
    )
    config = load_config(str(path), {"statistics": {"seed": 9}})
    assert config.experiment == "hom-scan"
    assert config.noise["cross_overlap"] == 0.8
    assert config.statistics["seed"] == 9
    assert config.statistics["mc_samples"] == 10


def test_yaml_document(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("experiment: coupling\nphotonics:\n  new_fiber: [9, 9]\n")
    config = load_config(str(path))
    assert config.photonics["new_fiber"] == [9, 9]


def test_default_file_in_config_dir(tmp_path):
    fw_config = tmp_path / "fw_config"
    fw_config.mkdir()
    (fw_config / "hcnot.json").write_text(json.dumps({"experiment": "coupling"}))
    assert load_config().experiment == "coupling"


def test_every_problem_is_reported():
    config = ExperimentConfig(
        experiment="teleport",
        noise={"cross_overlap": 1.5, "ancilla_fidelity": 0.1},
        statistics={"mc_samples": -1, "seed": -3},
        io={"format": "xml"},
        photonics={"kappa_h": 0.4, "kappa_v": 0.4},
    )
    with pytest.raises(ConfigError) as excinfo:
        config.validate()
    problems = excinfo.value.problems
    assert len(problems) == 7
    message = str(excinfo.value)
    for word in ("teleport", "cross_overlap", "ancilla_fidelity", "mc_samples", "seed",
                 "format", "kappa_h != kappa_v"):
        assert word in message


def test_unknown_options_and_sections():
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides={"noise": {"temperature": 4}})
    assert "unknown option 'temperature'" in str(excinfo.value)
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides={"detectors": {"dark_counts": 1}})
    assert "unknown section 'detectors'" in str(excinfo.value)


def test_unknown_section_is_reported_with_other_problems():
    with pytest.raises(ConfigError) as excinfo:
        load_config(
            overrides={
                "detectors": {"dark_counts": 1},
                "statistics": {"seed": -1},
                "io": {"format": "xml"},
            }
        )
    problems = excinfo.value.problems
    assert len(problems) == 3
    assert problems[0] == "unknown section 'detectors'"
    assert any("seed" in p for p in problems)
    assert any("format" in p for p in problems)


def test_bell_tomo_statistics_defaults():
    calibrated = load_config(overrides={"experiment": "bell-tomo"})
    assert calibrated.statistics["integration_time_s"] == 1.0e7
    assert calibrated.statistics["sample_counts"] is True
    ideal = load_config(overrides={"experiment": "bell-tomo", "preset": "ideal"})
    assert ideal.statistics["sample_counts"] is False
    chosen = load_config(
        overrides={
            "experiment": "bell-tomo",
            "preset": "ideal",
            "statistics": {"sample_counts": True, "integration_time_s": 600.0},
        }
    )
    assert chosen.statistics["sample_counts"] is True
    assert chosen.statistics["integration_time_s"] == 600.0
    assert load_config().statistics["integration_time_s"] == 600.0


def test_tomo_fit_needs_existing_table(tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        load_config(overrides={"experiment": "tomo-fit"})
    assert "input_csv" in str(excinfo.value)
    with pytest.raises(ConfigError):
        load_config(
            overrides={
                "experiment": "tomo-fit",
                "tomography": {"input_csv": str(tmp_path / "none.csv")},
            }
        )


def test_missing_or_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "none.json"))
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_serialization():
    config = load_config(overrides={"experiment": "bell-tomo", "preset": "ideal"})
    restored = ExperimentConfig.from_dict(config.as_dict())
    assert restored.as_dict() == config.as_dict()
