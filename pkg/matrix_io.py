#!/usr/bin/env python3
"""
Matrix I/O Module
---------------
Reads and writes matrices in the JSON form
{ "dim": n, "entries": [[re, im], ...] } (row-major)
"""

import json
import logging
import math
import os

import numpy as np

from exceptions import MatrixFormatError

logger = logging.getLogger('correlation_dynamics.matrix_io')


def matrix_to_dict(m):
    """
    Convert a square matrix to its JSON-ready dict

    Args:
        m (ndarray): Square complex matrix

    Returns:
        dict: {"dim": n, "entries": [[re, im], ...]}
    """
    m = np.asarray(m, dtype=np.complex128)
    return {
        "dim": int(m.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def matrix_from_dict(data):
    """
    Parse the JSON dict form of a matrix

    Args:
        data (dict): Parsed JSON object

    Returns:
        ndarray: Complex matrix
    """
    if not isinstance(data, dict):
        raise MatrixFormatError("matrix JSON must be an object with 'dim' and 'entries'")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim <= 0:
        raise MatrixFormatError(f"'dim' must be a positive integer, got {dim!r}")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise MatrixFormatError("'entries' must be a list of [re, im] pairs")

    m = np.zeros((dim, dim), dtype=np.complex128)
    for index in range(dim * dim):
        row, col = divmod(index, dim)
        if index >= len(entries):
            raise MatrixFormatError(f"expected {dim * dim} entries, got {len(entries)}", row, col)
        entry = entries[index]
        if (not isinstance(entry, (list, tuple)) or len(entry) != 2
                or not all(_is_finite_number(x) for x in entry)):
            raise MatrixFormatError(f"entry {entry!r} is not a finite [re, im] pair", row, col)
        m[row, col] = complex(entry[0], entry[1])
    if len(entries) != dim * dim:
        raise MatrixFormatError(f"expected {dim * dim} entries, got {len(entries)}")
    return m


def _is_finite_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def read_matrix_json(path):
    """
    Load a matrix from a JSON file

    Args:
        path (str): File path

    Returns:
        ndarray: Complex matrix
    """
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise MatrixFormatError(f"{path} is not valid JSON: {e}")
    matrix = matrix_from_dict(data)
    logger.info(f"Loaded {matrix.shape[0]}x{matrix.shape[1]} matrix from {path}")
    return matrix


def write_matrix_json(m, path):
    """
    Save a matrix to a JSON file

    Args:
        m (ndarray): Square complex matrix
        path (str): File path
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(matrix_to_dict(m), f, indent=2)
    logger.info(f"Saved matrix to {path}")
