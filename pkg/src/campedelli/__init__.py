"""Exact verification toolkit for the numerical Campedelli surfaces whose
algebraic fundamental group has order 9 (types A, B1, B2)."""

__version__ = "0.1.0"
