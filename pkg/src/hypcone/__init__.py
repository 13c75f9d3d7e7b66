"""Numerical verification of minimal submanifolds with relative nullity in hyperbolic space."""

__version__ = "0.1.0"
