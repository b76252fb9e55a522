"""Triplet-like correlation symmetry of two-mode Gaussian states and two-qubit Bell states."""

__version__ = "0.1.0"
