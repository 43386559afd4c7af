"""Exact homological algebra for divisor arrangements at desk scale."""

__version__ = "0.1.0"
