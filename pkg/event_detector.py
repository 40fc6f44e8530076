#!/usr/bin/env python3
"""
Event Detector Module
-------------------
Locates the dynamical landmarks of a dephasing trajectory: the sudden
change of the classical correlation, entanglement sudden death, the
thickness windows where Q exceeds C, and the frozen plateaus of Q and C
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np
import pandas as pd

from correlation_measures import classical_correlation_analytic, correlation_matrix
from dephasing_channel import dephase_mixture
from dephasing_model import ChannelStrength, thickness_of_kappa
from dynamics_sweep import DEFAULT_L_MAX, DEFAULT_STEPS, sweep
from linalg_core import spectrum_entropy
from state_factory import four_mix_mixture

logger = logging.getLogger('correlation_dynamics.event_detector')

GAP_TOL = 1e-9
PLATEAU_TOL = 1e-9
DIRECTION_SWITCH_TOL = 1e-6
DEFAULT_KAPPA_STEPS = 201
CROSSING_TOL = 1e-12


@dataclass(frozen=True)
class EventMarkers:
    """Landmarks of one trajectory; None means the event does not occur"""
    sudden_change_L: float = None
    esd_L: float = None
    qc_cross_intervals: tuple = ()
    plateaus: dict = field(default_factory=dict)
    extrapolated: tuple = ()
    source: str = 'analytic'

    def to_dict(self):
        data = {}
        if self.sudden_change_L is not None:
            data["sudden_change_L"] = self.sudden_change_L
        if self.esd_L is not None:
            data["esd_L"] = self.esd_L
        if self.qc_cross_intervals:
            data["qc_cross_intervals"] = [list(interval) for interval in self.qc_cross_intervals]
        if self.plateaus:
            # an infinite upper bound is written as null
            data["plateaus"] = {
                name: [lo, None if math.isinf(hi) else hi] for name, (lo, hi) in self.plateaus.items()
            }
        if self.extrapolated:
            data["extrapolated"] = list(self.extrapolated)
        if data:
            data["source"] = self.source
        return data

    def summary(self):
        """One line per marker, for the terminal"""
        def fmt(value):
            return "absent" if value is None else f"{value:.1f}"

        lines = [
            f"sudden change: L = {fmt(self.sudden_change_L)} lambda0",
            f"entanglement sudden death: L = {fmt(self.esd_L)} lambda0",
        ]
        if self.qc_cross_intervals:
            spans = ", ".join(f"({lo:.1f}, {hi:.1f})" for lo, hi in self.qc_cross_intervals)
            lines.append(f"Q > C on: {spans} lambda0")
        else:
            lines.append("Q > C on: none")
        for name, (lo, hi) in self.plateaus.items():
            lines.append(f"{name}: [{lo:.1f}, {'inf' if math.isinf(hi) else f'{hi:.1f}'}) lambda0")
        if self.extrapolated:
            lines.append(f"outside swept range: {', '.join(self.extrapolated)}")
        return lines


def sudden_change_kappa(mixture):
    """
    |kappa| at which the dephasing-independent coefficient takes over eta

    Args:
        mixture (BellMixture): Bell weights before dephasing

    Returns:
        float: |kappa*| in (0, 1), or None when C never switches branch
    """
    t_x, t_y, t_z = correlation_matrix(mixture)
    shrinking = max(abs(t_x), abs(t_y))
    fixed = abs(t_z)
    if fixed == 0.0 or shrinking <= fixed:
        return None
    return fixed / shrinking


def sudden_change_point(mixture, model):
    """
    Thickness of the sudden change in the decay of C

    Args:
        mixture (BellMixture): Bell weights before dephasing
        model (DephasingModel): Thickness calibration

    Returns:
        float: L in units of the central wavelength, or None
    """
    kappa = sudden_change_kappa(mixture)
    return None if kappa is None else thickness_of_kappa(model, kappa)


def esd_kappa(mixture):
    """
    |kappa| at which the largest Bell weight falls to 1/2

    Args:
        mixture (BellMixture): Bell weights before dephasing

    Returns:
        float: |kappa*| in (0, 1], or None when the state is never entangled
            or stays entangled even when fully dephased
    """
    a, b, c, d = mixture.weights
    pairs = ((a, b), (c, d))
    if mixture.lambda_max <= 0.5:
        return None
    if max((x + y) / 2 for x, y in pairs) > 0.5:
        return None

    crossings = [(1 - (x + y)) / abs(x - y) for x, y in pairs
                 if x != y and (x + y) / 2 + abs(x - y) / 2 > 0.5]
    # a pair summing to one only reaches 1/2 at |kappa| = 0, i.e. never
    crossings = [kappa for kappa in crossings if kappa > CROSSING_TOL]
    return min(crossings) if crossings else None


def esd_point(mixture, model):
    """
    Thickness of entanglement sudden death

    Args:
        mixture (BellMixture): Bell weights before dephasing
        model (DephasingModel): Thickness calibration

    Returns:
        float: L in units of the central wavelength, or None
    """
    kappa = esd_kappa(mixture)
    return None if kappa is None else thickness_of_kappa(model, kappa)


def analytic_curves(mixture, kappas):
    """
    I, C and Q of a dephased Bell-diagonal state along |kappa| values

    Args:
        mixture (BellMixture): Bell weights before dephasing
        kappas (array-like): Coherence factors in [0, 1]

    Returns:
        DataFrame: Columns kappa_abs, I, C, Q
    """
    rows = []
    for kappa in np.asarray(kappas, dtype=float):
        strength = ChannelStrength.from_kappa(float(kappa))
        dephased = dephase_mixture(mixture, strength)
        total = 2.0 - spectrum_entropy(dephased.weights)
        classical, _ = classical_correlation_analytic(mixture, strength.p)
        rows.append({'kappa_abs': float(kappa), 'I': total, 'C': classical, 'Q': total - classical})
    return pd.DataFrame(rows)


def _positive_runs(x, y, tol):
    """Maximal intervals of x where y > tol, ends interpolated linearly to y = 0"""
    positive = y > tol
    intervals = []
    i, n = 0, len(x)
    while i < n:
        if not positive[i]:
            i += 1
            continue
        start = i
        while i < n and positive[i]:
            i += 1
        end = i - 1
        lo = x[start] if start == 0 else _zero_crossing(x[start - 1], x[start], y[start - 1], y[start])
        hi = x[end] if end == n - 1 else _zero_crossing(x[end], x[end + 1], y[end], y[end + 1])
        intervals.append((float(lo), float(hi)))
    return intervals


def _zero_crossing(x0, x1, y0, y1):
    if y1 == y0:
        return (x0 + x1) / 2
    return x0 + (x1 - x0) * (0.0 - y0) / (y1 - y0)


def qc_cross_intervals(table, tol=GAP_TOL):
    """
    Thickness intervals where the quantum correlation exceeds the classical one

    Args:
        table (SweepTable): Sweep results
        tol (float): Gap below which Q and C count as equal

    Returns:
        list: (L_start, L_end) pairs, ends linearly interpolated
    """
    gap = table.column('Q') - table.column('C')
    return _positive_runs(table.thickness, gap, tol)


def _is_flat(values, tol=PLATEAU_TOL):
    values = np.asarray(values, dtype=float)
    return values.size > 0 and float(values.max() - values.min()) <= tol


def plateaus(mixture, model, kappa_steps=DEFAULT_KAPPA_STEPS):
    """
    Thickness ranges over which Q or C stays constant

    Before the sudden change only the shrinking coefficients move, and Q is
    checked there; after it eta is pinned to the fixed coefficient and C is
    checked there. Without a switch both are checked over the whole range.

    Args:
        mixture (BellMixture): Bell weights before dephasing
        model (DephasingModel): Thickness calibration
        kappa_steps (int): Grid size used for the constancy checks

    Returns:
        dict: Optional 'frozen_Q' and 'frozen_C' entries as (L_lo, L_hi)
    """
    kappa_star = sudden_change_kappa(mixture)
    found = {}
    if kappa_star is None:
        curves = analytic_curves(mixture, np.linspace(0.0, 1.0, kappa_steps))
        if _is_flat(curves['Q']):
            found['frozen_Q'] = (0.0, math.inf)
        if _is_flat(curves['C']):
            found['frozen_C'] = (0.0, math.inf)
        return found

    l_switch = thickness_of_kappa(model, kappa_star)
    before = analytic_curves(mixture, np.linspace(kappa_star, 1.0, kappa_steps))
    after = analytic_curves(mixture, np.linspace(0.0, kappa_star, kappa_steps))
    if _is_flat(before['Q']):
        found['frozen_Q'] = (0.0, l_switch)
    if _is_flat(after['C']):
        found['frozen_C'] = (l_switch, math.inf)
    return found


def _first_sign_loss(x, y):
    """First x where a positive y drops to <= 0, interpolated"""
    if y[0] <= 0:
        return None
    for i in range(1, len(x)):
        if y[i] <= 0:
            return float(_zero_crossing(x[i - 1], x[i], y[i - 1], y[i]))
    return None


def _first_direction_switch(table):
    if 'theta' not in table.rows.columns:
        return None
    theta, phi = table.column('theta'), table.column('phi')
    bloch = np.stack([np.sin(2 * theta) * np.cos(phi),
                      np.sin(2 * theta) * np.sin(phi),
                      np.cos(2 * theta)], axis=1)
    x = table.thickness
    for i in range(1, len(x)):
        # antipodal Bloch vectors are the same measurement
        if 1.0 - abs(float(bloch[i] @ bloch[i - 1])) > DIRECTION_SWITCH_TOL:
            return float((x[i - 1] + x[i]) / 2)
    return None


def events(spec, model, table=None, kappa_steps=DEFAULT_KAPPA_STEPS):
    """
    Detect every landmark of a trajectory

    Bell-diagonal inputs use the closed-form solvers; other explicit states
    fall back to the sweep (first sign loss of Lambda, first switch of the
    optimal measurement direction).

    Args:
        spec (StateFamilySpec): Input state
        model (DephasingModel): Thickness calibration
        table (SweepTable): Sweep of the same state; a default sweep is run if None
        kappa_steps (int): Grid size for plateau checks

    Returns:
        EventMarkers: Detected events
    """
    if table is None:
        table = sweep(spec, model, DEFAULT_L_MAX, DEFAULT_STEPS)

    mixture = spec.mixture()
    intervals = tuple(qc_cross_intervals(table))
    if mixture is not None:
        sudden = sudden_change_point(mixture, model)
        esd = esd_point(mixture, model)
        found_plateaus = plateaus(mixture, model, kappa_steps)
        source = 'analytic'
    else:
        logger.warning("Input state is not Bell-diagonal; locating events from the sweep")
        sudden = _first_direction_switch(table)
        esd = _first_sign_loss(table.thickness, table.column('Lambda'))
        found_plateaus = {}
        source = 'sweep'

    extrapolated = tuple(name for name, value in (('sudden_change_L', sudden), ('esd_L', esd))
                         if value is not None and value > table.l_max)
    markers = EventMarkers(
        sudden_change_L=sudden,
        esd_L=esd,
        qc_cross_intervals=intervals,
        plateaus=found_plateaus,
        extrapolated=extrapolated,
        source=source,
    )
    logger.info(f"Events for {spec.label()}: " + "; ".join(markers.summary()))
    return markers


def qc_gap_scan(model, b_values, r_values, kappa_steps=DEFAULT_KAPPA_STEPS):
    """
    Scan the four-Bell family for the largest excess of Q over C

    Args:
        model (DephasingModel): Thickness calibration
        b_values (iterable): Values of b
        r_values (iterable): Values of R
        kappa_steps (int): Grid size in |kappa|

    Returns:
        DataFrame: One row per (b, R), sorted by descending max_gap, with the
            Q > C window in units of the central wavelength
    """
    kappas = np.linspace(0.0, 1.0, kappa_steps)
    results = []
    for b in b_values:
        for r in r_values:
            curves = analytic_curves(four_mix_mixture(b, r), kappas)
            gap = (curves['Q'] - curves['C']).to_numpy()
            best = int(np.argmax(gap))
            row = {
                'b': float(b),
                'R': float(r),
                'max_gap': float(gap[best]),
                'kappa_at_max': float(kappas[best]),
                'L_at_max': thickness_of_kappa(model, float(kappas[best])),
                'window_start_L': np.nan,
                'window_end_L': np.nan,
                'window_width_L': 0.0,
            }
            windows = _positive_runs(kappas, gap, GAP_TOL)
            if windows:
                k_lo = min(lo for lo, _ in windows)
                k_hi = max(hi for _, hi in windows)
                # larger |kappa| means thinner quartz
                row['window_start_L'] = thickness_of_kappa(model, min(max(k_hi, 0.0), 1.0))
                row['window_end_L'] = thickness_of_kappa(model, min(max(k_lo, 0.0), 1.0))
                row['window_width_L'] = row['window_end_L'] - row['window_start_L']
            results.append(row)

    scan = pd.DataFrame(results)
    if not scan.empty:
        scan = scan.sort_values('max_gap', ascending=False, kind='stable').reset_index(drop=True)
    logger.info(f"Scanned {len(scan)} (b, R) pairs")
    return scan
