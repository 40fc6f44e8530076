#!/usr/bin/env python3
"""
Exceptions Module
---------------
Error types shared by the correlation dynamics modules
"""


class CorrelationDynamicsError(Exception):
    """Base class for all errors raised by this package"""
    pass


class ValidationError(CorrelationDynamicsError, ValueError):
    """A precondition on an input value was violated"""
    pass


class ConvergenceError(CorrelationDynamicsError, RuntimeError):
    """An iterative routine exhausted its budget"""
    pass


class MatrixFormatError(ValidationError):
    """Malformed matrix JSON"""

    def __init__(self, message, row=None, col=None):
        """
        Initialize the error

        Args:
            message (str): Description of the problem
            row (int): Row of the first bad entry, if known
            col (int): Column of the first bad entry, if known
        """
        if row is not None:
            message = f"{message} (row {row}, col {col})"
        super().__init__(message)
        self.row = row
        self.col = col


class CountsFileError(ValidationError):
    """Incomplete or invalid tomography counts"""

    def __init__(self, message, missing=None):
        """
        Initialize the error

        Args:
            message (str): Description of the problem
            missing (list): Basis indices absent from the record set
        """
        self.missing = sorted(missing or [])
        if self.missing:
            message = f"{message}; missing basis indices: {self.missing}"
        super().__init__(message)


class ConfigError(ValidationError):
    """Invalid command-line flag or configuration value"""

    def __init__(self, flag, message):
        """
        Initialize the error

        Args:
            flag (str): The offending flag, e.g. '--b'
            message (str): Description of the problem
        """
        super().__init__(f"{flag}: {message}")
        self.flag = flag
