#!/usr/bin/env python3
"""
Dynamics Sweep Module
-------------------
Evaluates correlation reports along a grid of quartz thicknesses and
writes the resulting table as CSV or JSON
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
import json
import logging
import math
import os
import sys

import numpy as np
import pandas as pd

from correlation_measures import full_report
from dephasing_channel import evolve
from dephasing_model import DephasingModel, kappa_of_thickness
from exceptions import ValidationError
from state_factory import StateFamilySpec

logger = logging.getLogger('correlation_dynamics.dynamics_sweep')

COLUMNS = ['L_lambda0', 'p', 'kappa_abs', 'I', 'C', 'Q', 'Lambda', 'En', 'Rn', 'D']
DIRECTION_COLUMNS = ['theta', 'phi']

DEFAULT_L_MAX = 350.0
DEFAULT_STEPS = 141


class OutputFormat(str, Enum):
    CSV = 'csv'
    JSON = 'json'


@dataclass
class SweepTable:
    """Correlation quantifiers of one input state along a thickness grid"""
    rows: pd.DataFrame
    spec: StateFamilySpec
    model: DephasingModel = field(default_factory=DephasingModel)

    def __post_init__(self):
        missing = [c for c in COLUMNS if c not in self.rows.columns]
        if missing:
            raise ValidationError(f"sweep table is missing columns {missing}")
        thickness = self.rows['L_lambda0'].to_numpy()
        if thickness.size == 0:
            raise ValidationError("sweep table has no rows")
        if np.any(np.diff(thickness) <= 0):
            raise ValidationError("sweep table thickness must be strictly increasing")

    def __len__(self):
        return len(self.rows)

    @property
    def thickness(self):
        return self.rows['L_lambda0'].to_numpy()

    @property
    def l_max(self):
        return float(self.thickness[-1])

    def column(self, name):
        return self.rows[name].to_numpy(dtype=float)

    def to_dict(self):
        columns = COLUMNS + [c for c in DIRECTION_COLUMNS if c in self.rows.columns]
        records = []
        for record in self.rows[columns].to_dict(orient='records'):
            records.append({k: (None if isinstance(v, float) and math.isnan(v) else float(v))
                            for k, v in record.items()})
        return {"spec": self.spec.to_dict(), "model": self.model.to_dict(), "rows": records}

    @classmethod
    def from_dict(cls, data):
        rows = pd.DataFrame.from_records(data["rows"])
        return cls(
            rows=rows.astype(float),
            spec=StateFamilySpec.from_dict(data["spec"]),
            model=DephasingModel.from_dict(data.get("model", {})),
        )


def _row(spec, model, thickness, channel, optimizer):
    strength = kappa_of_thickness(model, thickness)
    report = full_report(evolve(spec, model, thickness, channel=channel), optimizer=optimizer)
    direction = report.direction
    return {
        'L_lambda0': float(thickness),
        'p': strength.p,
        'kappa_abs': strength.kappa_abs,
        'I': report.i_total,
        'C': report.c_classical,
        'Q': report.q_quantum,
        'Lambda': report.lambda_,
        'En': report.en,
        'Rn': np.nan if report.rn is None else report.rn,
        'D': np.nan if report.d_nonent is None else report.d_nonent,
        'theta': direction.theta if direction is not None else np.nan,
        'phi': direction.phi if direction is not None else np.nan,
    }


def sweep(spec, model, l_max=DEFAULT_L_MAX, steps=DEFAULT_STEPS, workers=1, channel=None, optimizer=None):
    """
    Evaluate full correlation reports over a uniform thickness grid

    Args:
        spec (StateFamilySpec): Input state
        model (DephasingModel): Thickness calibration
        l_max (float): Largest thickness in units of the central wavelength
        steps (int): Number of grid points, endpoints included
        workers (int): Threads evaluating rows concurrently
        channel (ChannelKind or str): Channel implementation, default closed form
        optimizer (MeasurementOptimizer): Optimizer for non-Bell-diagonal states

    Returns:
        SweepTable: Rows ordered by thickness
    """
    if isinstance(steps, bool) or not isinstance(steps, (int, np.integer)) or steps < 2:
        raise ValidationError(f"steps must be an integer >= 2, got {steps!r}")
    if l_max is None or not (l_max > 0 and math.isfinite(l_max)):
        raise ValidationError(f"l_max must be a positive number, got {l_max!r}")
    if workers < 1:
        raise ValidationError(f"workers must be at least 1, got {workers!r}")

    thicknesses = np.linspace(0.0, float(l_max), int(steps))
    logger.info(f"Sweeping {spec.label()} over {steps} thicknesses up to {l_max:g} lambda0 "
                f"({model.profile.value} profile, {workers} worker(s))")

    def evaluate(thickness):
        return _row(spec, model, thickness, channel, optimizer)

    if workers == 1:
        rows = [evaluate(t) for t in thicknesses]
    else:
        # map keeps input order whatever the completion order
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(evaluate, thicknesses))

    return SweepTable(rows=pd.DataFrame(rows, columns=COLUMNS + DIRECTION_COLUMNS), spec=spec, model=model)


def _open_destination(destination):
    if destination is None or destination == '-':
        return sys.stdout, False
    if hasattr(destination, 'write'):
        return destination, False
    directory = os.path.dirname(os.path.abspath(destination))
    os.makedirs(directory, exist_ok=True)
    return open(destination, 'w', newline=''), True


def emit(table, markers=None, fmt=OutputFormat.CSV, destination=None):
    """
    Write a sweep table

    CSV carries exactly the columns L_lambda0, p, kappa_abs, I, C, Q, Lambda,
    En, Rn, D with 9 significant digits; JSON carries the table, its input
    state and calibration and the event markers at full precision.

    Args:
        table (SweepTable): Sweep results
        markers (EventMarkers): Detected events, or None
        fmt (str): 'csv' or 'json'
        destination (str or file): Path, open text file, or None/'-' for stdout
    """
    try:
        fmt = OutputFormat(fmt)
    except ValueError:
        raise ValidationError(f"unknown output format {fmt!r}")

    handle, owned = _open_destination(destination)
    try:
        if fmt is OutputFormat.CSV:
            table.rows[COLUMNS].to_csv(handle, index=False, float_format='%.9g', lineterminator='\n')
        else:
            data = table.to_dict()
            data["markers"] = markers.to_dict() if markers is not None else {}
            json.dump(data, handle, indent=2, allow_nan=False)
            handle.write('\n')
    finally:
        if owned:
            handle.close()

    if owned:
        logger.info(f"Wrote {len(table)} rows as {fmt.value} to {destination}")


def read_table_json(path):
    """
    Load a table written by emit(..., fmt='json')

    Args:
        path (str): File path

    Returns:
        tuple: (SweepTable, markers dict)
    """
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{path} is not valid JSON: {e}")
    return SweepTable.from_dict(data), data.get("markers", {})
