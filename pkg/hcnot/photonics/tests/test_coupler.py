import numpy as np
import pytest

from hcnot.photonics.defaults import KAPPA_H, KAPPA_V, EXTINCTION_CAP
from hcnot.photonics.utilities.coupler import (
    CouplerSpec,
    design_bs,
    design_pbs,
    cross_coupling,
    coupling_length,
    calibrate_dispersion,
    kappa_from_supermodes,
    extinction_over_bandwidth,
)


def test_cross_coupling_examples():
    spec = CouplerSpec(1.0, 0.5, np.pi / 2)
    assert cross_coupling(spec, "H") == pytest.approx(1)
    assert cross_coupling(spec, "V") == pytest.approx(0.5)
    spec = CouplerSpec(1.0, 0.5, np.pi)
    assert cross_coupling(spec, "H") == pytest.approx(0, abs=1e-15)
    assert cross_coupling(spec, "V") == pytest.approx(1)
    with pytest.raises(ValueError):
        cross_coupling(spec, "D")


def test_dispersion_shifts_coupling():
    spec = CouplerSpec(1.0, 0.5, np.pi, dispersion_h=0.01, design_wavelength=789)
    assert spec.kappa("H", 791) == pytest.approx(1.02)
    assert cross_coupling(spec, "H", 791) > 0


def test_pbs_design_for_ratio_two():
    spec = design_pbs(2.0, 1.0)
    assert spec.leakage < 1e-12
    assert spec.meets_threshold
    assert cross_coupling(spec, "H") == pytest.approx(0, abs=1e-12)
    assert cross_coupling(spec, "V") == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(0, 5))
def test_commensurate_ratios_have_exact_designs(m, n):
    spec = design_pbs(2 * m / (2 * n + 1), 1.0)
    assert spec.leakage < 1e-12


def test_default_pair_has_exact_design():
    spec = design_pbs(KAPPA_H, KAPPA_V)
    assert spec.length == pytest.approx(4 * np.pi / KAPPA_H)
    assert spec.leakage < 1e-12


def test_near_commensurate_ratio_leaks_a_little():
    spec = design_pbs(2.03, 1.0, max_length=10)
    assert 0 < spec.leakage < 0.05


def test_longer_devices_leak_less():
    short = design_pbs(np.sqrt(2), 1.0, max_length=20)
    long = design_pbs(np.sqrt(2), 1.0, max_length=200, n_points=40001)
    assert long.leakage <= short.leakage + 1e-12


def test_unreachable_threshold_is_flagged(caplog):
    spec = design_pbs(1.3, 1.0, max_length=3, threshold=1e-9)
    assert not spec.meets_threshold
    assert "above" in caplog.text
    with pytest.raises(ValueError):
        design_pbs(1.0, 1.0)


def test_bs_design_splits_both_polarizations():
    spec = design_bs(1.2, 0.4)
    assert spec.kind == "BS"
    assert spec.meets_threshold
    assert cross_coupling(spec, "H") == pytest.approx(0.5, abs=1e-9)
    assert cross_coupling(spec, "V") == pytest.approx(0.5, abs=1e-9)
    # 8/7 has no common 50:50 length, only an approximate one
    assert not design_bs(KAPPA_H, KAPPA_V, threshold=1e-6).meets_threshold


def test_extinction_without_bandwidth_is_capped():
    spec = design_pbs(2.0, 1.0)
    assert extinction_over_bandwidth(spec, 0.0) == EXTINCTION_CAP
    with pytest.raises(ValueError):
        extinction_over_bandwidth(design_bs(2.0, 1.0), 1.0)


def test_calibration_to_measured_extinction():
    spec = calibrate_dispersion(design_pbs(KAPPA_H, KAPPA_V), 3.0, 50.0)
    assert spec.dispersion_h > 0
    assert extinction_over_bandwidth(spec, 3.0) == pytest.approx(50, rel=1e-6)
    values = [extinction_over_bandwidth(spec, b) for b in (0.5, 1, 2, 3, 4, 5)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    slopes = np.linspace(0, spec.dispersion_h * 1.5, 7)
    by_slope = [
        extinction_over_bandwidth(spec.with_dispersion(s, s), 3.0) for s in slopes
    ]
    assert all(a >= b for a, b in zip(by_slope, by_slope[1:]))


def test_extinction_never_recovers_at_wide_bandwidth():
    spec = calibrate_dispersion(design_pbs(KAPPA_H, KAPPA_V), 3.0, 50.0)
    bandwidths = np.linspace(0.5, 80, 160)
    values = [extinction_over_bandwidth(spec, b) for b in bandwidths]
    assert all(a >= b for a, b in zip(values, values[1:]))
    # past the first sinc minimum the extinction stays at its lowest value
    assert values[-1] < 1
    assert extinction_over_bandwidth(spec, 50.0) == pytest.approx(values[-1], rel=1e-12)


def test_supermode_coupling_length():
    # 789 nm with an index splitting of 1e-5 needs 39.45 mm for complete transfer
    assert coupling_length(789, 1.50001, 1.5) == pytest.approx(39.45, rel=1e-6)
    assert kappa_from_supermodes(789, 1.50001, 1.5) == pytest.approx(
        np.pi / (2 * 39.45), rel=1e-6
    )
    with pytest.raises(ValueError):
        coupling_length(789, 1.5, 1.5)
