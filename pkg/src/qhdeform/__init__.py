"""Exact and numeric verification of the (q,h)-deformed sl(2) map."""

__version__ = "0.1.0"
