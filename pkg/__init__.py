"""
Correlation Dynamics Package
--------------------------
Classical and quantum correlations of two-qubit Bell-diagonal states under
one-sided phase damping, with event detection and simulated tomography
"""

__version__ = '0.1.0'
