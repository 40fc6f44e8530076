"""
Channels Package
--------------
Single-qubit dephasing channels acting on qubit A of a two-qubit state
"""
