import os

import numpy as np
import pytest

from hcnot.analysis.utilities.counting import (
    CountRecord,
    CountTableError,
    monte_carlo,
    sample_counts,
    noise_subtract,
    sample_records,
    read_count_table,
    expected_records,
    write_count_table,
)

TEST_FILES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_files")


def hh_fraction(records):
    """Noise-subtracted fraction of 00 events in the HH setting."""
    hh = {r.outcome: noise_subtract(r) for r in records if r.setting == "HH"}
    total = sum(hh.values())
    if total <= 0:
        raise ValueError("no HH events")
    return hh["00"] / total


def test_sample_counts_moments():
    assert sample_counts(0.0, 100.0, seed=1) == 0
    rng = np.random.default_rng(7)
    samples = np.array([sample_counts(0.1, 1e4, rng=rng) for _ in range(4000)])
    assert samples.mean() == pytest.approx(1000, rel=0.01)
    assert samples.std() == pytest.approx(np.sqrt(1000), rel=0.05)
    assert sample_counts(0.1, 3600, seed=3) == sample_counts(0.1, 3600, seed=3)
    with pytest.raises(ValueError):
        sample_counts(-1.0, 1.0)


@pytest.mark.parametrize(
    "counts, expected", [((100, 20, 30), 50), ((10, 5, 5), 0), ((5, 4, 3), -2)]
)
def test_noise_subtract(counts, expected):
    assert noise_subtract(CountRecord("HH", "00", *counts)) == expected


def test_noise_subtract_is_linear():
    a = CountRecord("HD", "01", 40, 3, 2)
    b = CountRecord("HD", "01", 17, 9, 1)
    summed = CountRecord("HD", "01", *(x + y for x, y in zip(a.counts, b.counts)))
    assert noise_subtract(summed) == noise_subtract(a) + noise_subtract(b)


def test_count_record_validation():
    with pytest.raises(ValueError):
        CountRecord("HX", "00", 1)
    with pytest.raises(ValueError):
        CountRecord("HH", "02", 1)
    with pytest.raises(ValueError):
        CountRecord("HH", "00", -1)
    with pytest.raises(ValueError):
        CountRecord("HH", "00", 1.5)


def test_constant_estimator_has_no_spread():
    records = [CountRecord("HH", "00", 100, 10, 10)]
    result = monte_carlo(records, lambda r: 3.0, n_samples=50, seed=1)
    assert result.mean == 3.0
    assert result.std == 0.0


def test_single_count_spread_is_square_root():
    records = [CountRecord("HH", "00", 400)]
    result = monte_carlo(records, lambda r: r[0].raw, n_samples=1000, seed=2)
    assert result.mean == pytest.approx(400, rel=0.01)
    assert result.std == pytest.approx(20, rel=0.1)


def test_monte_carlo_is_reproducible():
    records = expected_records(
        {"one_each": np.full((1, 4), 0.1), "ct_double": np.full((1, 4), 0.01),
         "anc_double": np.full((1, 4), 0.02)},
        ["HH"],
        600,
    )
    first = monte_carlo(records, hh_fraction, n_samples=200, seed=12345)
    second = monte_carlo(records, hh_fraction, n_samples=200, seed=12345)
    assert first.mean == second.mean
    assert first.std == second.std


def test_error_bars_shrink_with_integration_time():
    rates = {
        "one_each": np.array([[0.05, 0.01, 0.01, 0.05]]),
        "ct_double": np.full((1, 4), 0.002),
        "anc_double": np.full((1, 4), 0.003),
    }
    short = monte_carlo(expected_records(rates, ["HH"], 2000), hh_fraction, seed=4)
    long = monte_carlo(expected_records(rates, ["HH"], 8000), hh_fraction, seed=4)
    assert short.std / long.std == pytest.approx(2, rel=0.15)


def test_mean_approaches_plug_in_estimate_for_large_counts():
    rates = {
        "one_each": np.array([[0.05, 0.01, 0.01, 0.05]]),
        "ct_double": np.full((1, 4), 0.002),
        "anc_double": np.full((1, 4), 0.003),
    }
    records = expected_records(rates, ["HH"], 100 * 3600)
    result = monte_carlo(records, hh_fraction, n_samples=300, seed=5)
    assert result.mean == pytest.approx(hh_fraction(records), abs=3e-3)


def test_failing_samples_are_rejected():
    records = [CountRecord("HH", o, 1, 0, 0) for o in ("00", "01", "10", "11")]
    result = monte_carlo(records, hh_fraction, n_samples=400, seed=6)
    # all four counts vanish together in about exp(-4) of the samples
    assert 0 < result.rejected_fraction < 0.1
    with pytest.raises(ValueError):
        monte_carlo(records, lambda r: 1 / 0, n_samples=5, seed=6)


def test_blocked_counts_follow_the_other_source():
    rates = {
        "one_each": np.zeros((1, 4)),
        "ct_double": np.full((1, 4), 1.0),
        "anc_double": np.full((1, 4), 2.0),
    }
    record = expected_records(rates, ["DL"], 10, label="DH")[0]
    assert record.counts == (30, 20, 10)
    assert record.label == "DH"
    sampled = sample_records(rates, ["DL"], 10, np.random.default_rng(0))
    assert len(sampled) == 4
    assert all(r.setting == "DL" for r in sampled)


def test_read_bundled_count_table():
    records = read_count_table(os.path.join(TEST_FILES, "phi_plus_counts.csv"))
    assert len(records) == 36
    assert records[0].setting == "HH"
    assert records[0].outcome == "00"
    assert noise_subtract(records[0]) == 500


def test_count_table_round_trip(tmp_path):
    records = expected_records(
        {"one_each": np.full((2, 4), 0.5), "ct_double": np.full((2, 4), 0.1),
         "anc_double": np.zeros((2, 4))},
        ["HH", "LD"],
        100,
        label="VH",
    )
    path = str(tmp_path / "counts.csv")
    write_count_table(records, path, label_column="input")
    restored = read_count_table(path, label_column="input")
    assert [r.key + r.counts for r in restored] == [r.key + r.counts for r in records]
    assert all(r.label == "VH" for r in restored)


@pytest.mark.parametrize(
    "row, line",
    [
        ("H,X,00,10,1,1", 3),
        ("H,D,02,10,1,1", 3),
        ("H,D,00,-3,1,1", 3),
        ("H,D,00,ten,1,1", 3),
        ("H,H,00,10,1,1", 3),
    ],
)
def test_malformed_rows_report_line(tmp_path, row, line):
    path = tmp_path / "bad.csv"
    path.write_text(
        "setting_q1,setting_q2,outcome,raw,blocked_ct,blocked_anc\n"
        "H,H,00,10,1,1\n" + row + "\n"
    )
    with pytest.raises(CountTableError) as excinfo:
        read_count_table(str(path))
    assert excinfo.value.line == line
    assert f"line {line}" in str(excinfo.value)


def test_malformed_table_structure(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("q1,q2,outcome,raw,blocked_ct,blocked_anc\nH,H,00,1,0,0\n")
    with pytest.raises(CountTableError):
        read_count_table(str(path))
    path = tmp_path / "fields.csv"
    path.write_text(
        "setting_q1,setting_q2,outcome,raw,blocked_ct,blocked_anc\n"
        "H,H,00,1,0,0\nH,D,00,1,0,0,7\n"
    )
    with pytest.raises(CountTableError):
        read_count_table(str(path))
    with pytest.raises(CountTableError):
        read_count_table(str(tmp_path / "missing.csv"))
