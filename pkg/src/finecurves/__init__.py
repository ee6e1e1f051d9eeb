"""Exact curve-configuration machinery for punctured planar surfaces."""

__version__ = "0.1.0"
