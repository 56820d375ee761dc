"""Exact point counting, zeta numerators and their interactive certification."""

__version__ = "0.1.0"
