"""Exact symbolic engine for linear constant-coefficient PDE operators."""

__version__ = "0.1.0"
