"""
Tests for the matrix JSON format
"""

import json

import numpy as np
import pytest

from exceptions import MatrixFormatError, ValidationError
from matrix_io import matrix_from_dict, matrix_to_dict, read_matrix_json, write_matrix_json
from state_factory import bell_state


def test_dict_layout():
    data = matrix_to_dict(np.array([[1, 2j], [-2j, 0]]))
    assert data == {"dim": 2, "entries": [[1.0, 0.0], [0.0, 2.0], [0.0, -2.0], [0.0, 0.0]]}


def test_file_round_trip(tmp_path):
    rho = bell_state('psi+')
    path = tmp_path / "out" / "rho.json"
    write_matrix_json(rho, str(path))
    assert np.array_equal(read_matrix_json(str(path)), rho)


@pytest.mark.parametrize("data", [
    [1, 2, 3],
    {"entries": []},
    {"dim": 0, "entries": []},
    {"dim": True, "entries": [[1, 0]]},
    {"dim": 2, "entries": "abcd"},
])
def test_structural_errors(data):
    with pytest.raises(MatrixFormatError):
        matrix_from_dict(data)


def test_bad_entry_reports_position():
    entries = [[0.0, 0.0]] * 4
    entries[3] = [0.0, float('nan')]
    with pytest.raises(MatrixFormatError) as excinfo:
        matrix_from_dict({"dim": 2, "entries": entries})
    assert (excinfo.value.row, excinfo.value.col) == (1, 1)
    assert "row 1, col 1" in str(excinfo.value)


def test_wrong_entry_count():
    with pytest.raises(MatrixFormatError) as excinfo:
        matrix_from_dict({"dim": 2, "entries": [[1, 0]] * 3})
    assert excinfo.value.row == 1
    with pytest.raises(MatrixFormatError) as excinfo:
        matrix_from_dict({"dim": 2, "entries": [[1, 0]] * 5})
    assert excinfo.value.row is None and excinfo.value.col is None
    assert str(excinfo.value) == "expected 4 entries, got 5"


def test_invalid_json_file(tmp_path):
    path = tmp_path / "rho.json"
    path.write_text("{dim: 2")
    with pytest.raises(ValidationError):
        read_matrix_json(str(path))


def test_boolean_entries_are_rejected():
    with pytest.raises(MatrixFormatError):
        matrix_from_dict({"dim": 1, "entries": [[True, 0]]})
    assert json.loads(json.dumps(matrix_to_dict(np.eye(1))))["dim"] == 1
