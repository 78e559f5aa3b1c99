"""Define count records, Poisson sampling, noise subtraction, count-table files and
Monte-Carlo error propagation."""

import os
import logging

import numpy as np
import pandas as pd

from monty.json import MSONable

from hcnot.analysis.defaults import (
    OUTCOMES,
    MC_SAMPLES,
    SETTING_BASES,
    COUNT_TABLE_COLUMNS,
)

__author__ = "hcnot developers"
__maintainer__ = "hcnot developers"
__status__ = "Development"
__date__ = "Oct 2026"
__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class CountTableError(Exception):
    """
    Exception that is thrown when a count table file is malformed; carries the
    offending line number.
    """

    def __init__(self, msg=None, line=None):
        if msg is None:
            msg = "malformed count table"
        if line is not None:
            msg = f"line {line}: {msg}"
        self.msg = msg
        self.line = line
        super(CountTableError, self).__init__(msg)

    def __repr__(self):
        return self.msg


class CountRecord(MSONable):
    """
    Four-fold counts of one analyzer setting and outcome: raw counts and the counts
    with the control-target source blocked and with the ancilla source blocked, all
    taken over the same integration time.
    """

    def __init__(
        self,
        setting,
        outcome,
        raw,
        blocked_ct=0,
        blocked_anc=0,
        integration_time=1.0,
        label=None,
    ):
        if len(setting) != 2 or any(s not in SETTING_BASES for s in setting):
            raise ValueError(
                f"setting {setting} must be two letters out of {list(SETTING_BASES)}"
            )
        if outcome not in OUTCOMES:
            raise ValueError(f"outcome {outcome} must be one of {OUTCOMES}")
        for name, value in (("raw", raw), ("blocked_ct", blocked_ct),
                            ("blocked_anc", blocked_anc)):
            if int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value}")
        if integration_time <= 0:
            raise ValueError("integration time must be positive")
        self.setting = setting
        self.outcome = outcome
        self.raw = int(raw)
        self.blocked_ct = int(blocked_ct)
        self.blocked_anc = int(blocked_anc)
        self.integration_time = integration_time
        self.label = label

    @property
    def key(self):
        return self.label, self.setting, self.outcome

    @property
    def counts(self):
        return self.raw, self.blocked_ct, self.blocked_anc

    def with_counts(self, raw, blocked_ct, blocked_anc):
        return CountRecord(
            self.setting,
            self.outcome,
            raw,
            blocked_ct,
            blocked_anc,
            self.integration_time,
            self.label,
        )


def sample_counts(rate, time, seed=None, rng=None):
    """
    Poisson-distributed number of events.

    Args:
        rate (float): Event rate in 1/s.
        time (float): Integration time in s.
        seed (int, optional): Seed of a fresh generator.
        rng (np.random.Generator, optional): Generator to draw from; takes
            precedence over ``seed``.

    Returns:
        int: Sampled count with mean rate * time.
    """
    if rate < 0:
        raise ValueError(f"rate must be non-negative, got {rate}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    return int(rng.poisson(rate * time))


def noise_subtract(record):
    """raw - blocked_ct - blocked_anc; negative values are kept."""
    value = float(record.raw - record.blocked_ct - record.blocked_anc)
    if value < 0:
        logger.debug(f"negative subtracted counts {value} for {record.key}")
    return value


def records_from_rates(rates, settings, time, rng=None, label=None):
    """
    Count records of one input or herald branch from per-class rates.

    Args:
        rates (dict): {event class: array (n_settings, n_outcomes)} in Hz with the
            classes ``one_each``, ``ct_double`` and ``anc_double``.
        settings (list): Setting labels such as ``"HD"``.
        time (float): Integration time per setting in s.
        rng (np.random.Generator, optional): If given, counts are Poisson samples;
            otherwise the expected counts rounded to integers.
        label (str, optional): Input or herald label stored on every record.

    Returns:
        list: CountRecords; raw counts see every class, the ancilla-blocked counts
            only ``ct_double`` and the control-target-blocked counts only
            ``anc_double``.
    """
    one_each = np.asarray(rates["one_each"])
    ct_double = np.asarray(rates["ct_double"])
    anc_double = np.asarray(rates["anc_double"])
    means = np.stack([one_each + ct_double + anc_double, anc_double, ct_double]) * time
    if rng is not None:
        counts = rng.poisson(np.clip(means, 0, None))
    else:
        counts = np.rint(np.clip(means, 0, None)).astype(int)
    records = []
    for s, setting in enumerate(settings):
        for o, outcome in enumerate(OUTCOMES):
            records.append(
                CountRecord(setting, outcome, *counts[:, s, o], time, label)
            )
    return records


def read_count_table(path, label_column=None):
    """
    Read a count table: header ``setting_q1,setting_q2,outcome,raw,blocked_ct,
    blocked_anc``, optionally preceded by a label column.

    Args:
        path (str): CSV file.
        label_column (str, optional): Name of the leading label column.

    Returns:
        list: CountRecords with unit integration time.
    """
    if not os.path.isfile(path):
        raise CountTableError(f"count table {path} does not exist")
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except pd.errors.ParserError as e:
        raise CountTableError(f"could not parse {path}: {e}")
    except pd.errors.EmptyDataError:
        raise CountTableError(f"{path} is empty", line=1)
    expected = ([label_column] if label_column else []) + COUNT_TABLE_COLUMNS
    if [c.strip() for c in df.columns] != expected:
        raise CountTableError(
            f"header {list(df.columns)} does not match {expected}", line=1
        )
    df.columns = expected
    records, seen = [], set()
    for index, row in df.iterrows():
        line = index + 2
        setting = row["setting_q1"].strip() + row["setting_q2"].strip()
        outcome = row["outcome"].strip()
        if len(setting) != 2 or any(s not in SETTING_BASES for s in setting):
            raise CountTableError(
                f"settings must be among {list(SETTING_BASES)}, got "
                f"{row['setting_q1']!r}, {row['setting_q2']!r}",
                line=line,
            )
        if outcome not in OUTCOMES:
            raise CountTableError(
                f"outcome must be one of {OUTCOMES}, got {outcome!r}", line=line
            )
        counts = []
        for name in ("raw", "blocked_ct", "blocked_anc"):
            value = row[name].strip()
            if not value.isdigit():
                raise CountTableError(
                    f"{name} must be a non-negative integer, got {value!r}", line=line
                )
            counts.append(int(value))
        label = row[label_column].strip() if label_column else None
        record = CountRecord(setting, outcome, *counts, label=label)
        if record.key in seen:
            raise CountTableError(f"duplicate record {record.key}", line=line)
        seen.add(record.key)
        records.append(record)
    logger.info(f"read {len(records)} count records from {path}")
    return records


def write_count_table(records, path, label_column=None):
    """Write count records in the count-table format."""
    rows = []
    for record in records:
        row = {label_column: record.label} if label_column else {}
        row.update(
            {
                "setting_q1": record.setting[0],
                "setting_q2": record.setting[1],
                "outcome": record.outcome,
                "raw": record.raw,
                "blocked_ct": record.blocked_ct,
                "blocked_anc": record.blocked_anc,
            }
        )
        rows.append(row)
    columns = ([label_column] if label_column else []) + COUNT_TABLE_COLUMNS
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False)
    logger.info(f"wrote {len(records)} count records to {path}")


class MonteCarloResult(MSONable):
    """
    Componentwise mean and standard deviation of an estimator over Poisson
    resamples, with the fraction of resamples the estimator rejected.
    """

    def __init__(self, mean, std, n_samples, rejected_fraction=0.0):
        self.mean = mean
        self.std = std
        self.n_samples = n_samples
        self.rejected_fraction = rejected_fraction


def monte_carlo(records, estimator, n_samples=MC_SAMPLES, seed=None, rng=None):
    """
    Propagate Poisson counting errors through an estimator: every count of every
    record, noise counts included, is redrawn as Poisson with the observed count
    as mean, and the estimator is evaluated on each resampled set.

    Args:
        records (list): CountRecords.
        estimator (callable): Function of a list of CountRecords returning a
            scalar or an array.
        n_samples (int): Number of resamples.
        seed (int, optional): Seed of a fresh generator.
        rng (np.random.Generator, optional): Generator to draw from.

    Returns:
        MonteCarloResult: Mean and sample standard deviation of the accepted
            resamples.
    """
    rng = rng if rng is not None else np.random.default_rng(seed)
    observed = np.array([record.counts for record in records], dtype=float)
    values = []
    rejected = 0
    for i in range(n_samples):
        sample = rng.poisson(observed)
        resampled = [r.with_counts(*c) for r, c in zip(records, sample)]
        try:
            value = np.asarray(estimator(resampled), dtype=float)
        except (ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
            rejected += 1
            logger.warning(f"Monte-Carlo sample {i} rejected: {e}")
            continue
        if not np.all(np.isfinite(value)):
            rejected += 1
            logger.warning(f"Monte-Carlo sample {i} rejected: non-finite estimate")
            continue
        values.append(value)
    if not values:
        raise ValueError("every Monte-Carlo sample was rejected by the estimator")
    values = np.array(values)
    std = values.std(axis=0, ddof=1) if len(values) > 1 else np.zeros_like(values[0])
    mean = values.mean(axis=0)
    if mean.ndim == 0:
        mean, std = float(mean), float(std)
    return MonteCarloResult(mean, std, n_samples, rejected / n_samples)


def expected_records(rates, settings, time, label=None):
    """Count records holding the expected counts rounded to integers."""
    return records_from_rates(rates, settings, time, label=label)


def sample_records(rates, settings, time, rng, label=None):
    """Count records holding Poisson samples of the expected counts."""
    return records_from_rates(rates, settings, time, rng=rng, label=label)
