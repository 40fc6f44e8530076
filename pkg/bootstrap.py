#!/usr/bin/env python3
"""
Bootstrap Module
--------------
Counting-statistics error bars: counts are re-drawn Poisson around the
observed values, each resample is reconstructed and reported, and the
reports are aggregated per correlation measure
"""

import logging
import math

import numpy as np
import pandas as pd

from correlation_measures import full_report
from exceptions import ValidationError
from tomography import reconstruct

logger = logging.getLogger('correlation_dynamics.bootstrap')

MEASURES = ['I', 'C', 'Q', 'Lambda', 'Upsilon', 'En', 'Rn', 'D']
MIN_RESAMPLES = 50


def _measures(report):
    data = report.to_dict()
    return {name: (np.nan if data[name] is None else float(data[name])) for name in MEASURES}


def _resample_report(count_set, seed, optimizer):
    rng = np.random.default_rng(seed)
    redrawn = rng.poisson(count_set.counts)
    _, physical = reconstruct(count_set.with_counts(redrawn), log_level=logging.DEBUG)
    return _measures(full_report(physical, optimizer=optimizer, log_level=logging.DEBUG))


def bootstrap_report(count_set, resamples=200, seed=0, optimizer=None):
    """
    Mean and standard deviation of every correlation measure under
    Poisson resampling of the counts

    Resample i draws from numpy.random.default_rng(seed + i), so any
    subset of resamples can be recomputed independently.

    Args:
        count_set (CountSet): Observed records
        resamples (int): Number of resamples; 0 reports the point estimate
            with zero spread
        seed (int): Base seed
        optimizer (MeasurementOptimizer): Optimizer for non-Bell-diagonal
            reconstructions

    Returns:
        DataFrame: Indexed by measure, columns value, mean, std
    """
    if resamples != 0 and resamples < MIN_RESAMPLES:
        raise ValidationError(f"resamples must be 0 or at least {MIN_RESAMPLES}, got {resamples}")

    _, physical = reconstruct(count_set)
    point = _measures(full_report(physical, optimizer=optimizer))

    if resamples == 0:
        samples = pd.DataFrame([point], columns=MEASURES)
        spread = pd.Series(0.0, index=MEASURES)
    else:
        samples = pd.DataFrame(
            [_resample_report(count_set, seed + i, optimizer) for i in range(resamples)],
            columns=MEASURES,
        )
        spread = samples.std(ddof=0)

    result = pd.DataFrame({
        'value': pd.Series(point),
        'mean': samples.mean(),
        'std': spread,
    }).loc[MEASURES]

    logger.info(f"Bootstrap over {resamples} resamples: "
                f"Q = {result.loc['Q', 'mean']:.4f} +/- {result.loc['Q', 'std']:.4f}")
    return result


def bootstrap_to_dict(result):
    """JSON-ready {measure: {value, mean, std}} with NaN written as null"""
    def clean(x):
        return None if isinstance(x, float) and math.isnan(x) else float(x)

    return {measure: {col: clean(result.loc[measure, col]) for col in result.columns}
            for measure in result.index}
