"""Exact simulator and verification toolkit for a t-of-n threshold
quantum cash protocol built on two-qubit permutation and Grover
operations."""

__version__ = "0.1.0"
