"""Exact and high-precision tools for the quantum differential equation of Hilb(C^2, n)."""

__version__ = "0.1.0"
